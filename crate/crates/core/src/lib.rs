//! Lexicon-driven sentiment polarity scoring for Bengali review text.
//!
//! The pipeline runs raw text through [`textproc`] (tokenize, normalize,
//! drop stop words), scores the surviving tokens with the rule [`engine`]
//! against a [`lexicon`], then normalizes and bins the raw score into nine
//! categories with [`classify`]. [`corpus`] handles CSV datasets and the
//! labeled export, [`metrics`] evaluates predictions, and [`cli`] wires the
//! stages into the `bsps` binary.

pub mod classify;
pub mod cli;
pub mod corpus;
pub mod engine;
pub mod lexicon;
pub mod metrics;
pub mod pipeline;
pub mod textproc;

pub use classify::{BinConfig, BinaryLabel, NormalizationScale, SentimentCategory};
pub use engine::{score_review, score_tokens, RuleConfig, ScoreTrace};
pub use lexicon::{LexiconDataDictionary, TokenRole};
