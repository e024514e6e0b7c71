//! The polarity rule engine.
//!
//! Tokens are consumed left to right. Each token either contributes to the
//! running score (sentiment words), arms a flag for what follows (extreme
//! words, phrase initiators, and-words), or applies a negation to what came
//! before. Negation is postposed in Bengali, so it always looks backwards:
//!
//! * under an armed phrase initiator it amplifies the last sentiment word
//!   instead of reversing it ("so good I can't believe it");
//! * after an extreme-modified word it adds `base * extreme_negation_factor`,
//!   which turns "not very bad" mildly positive rather than "very good";
//! * otherwise it reverses the whole conjunction group ("good and tasty"
//!   followed by "not" reverses both conjuncts).
//!
//! A negation that completes a configured double-negation idiom is cancelled.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lexicon::{LexiconDataDictionary, TokenRole};
use crate::textproc::{preprocess, TokenStream};

/// Raw scores closer to zero than this are reported as exactly zero.
pub const ZERO_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RuleConfig {
    pub extreme_multiplier: f64,
    pub phrase_negation_amplifier: f64,
    pub extreme_negation_factor: f64,
    pub plain_negation_multiplier: f64,
}

impl Default for RuleConfig {
    fn default() -> Self {
        Self {
            extreme_multiplier: 1.6,
            phrase_negation_amplifier: 1.5,
            extreme_negation_factor: -2.0,
            plain_negation_multiplier: -1.0,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("extreme_multiplier must be > 1 (got {0})")]
    ExtremeMultiplier(f64),
    #[error("phrase_negation_amplifier must be > 0 (got {0})")]
    PhraseAmplifier(f64),
    #[error("plain_negation_multiplier must be < 0 (got {0})")]
    PlainNegation(f64),
    #[error("extreme_negation_factor must be finite (got {0})")]
    ExtremeNegation(f64),
}

impl RuleConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.extreme_multiplier > 1.0) || !self.extreme_multiplier.is_finite() {
            return Err(ConfigError::ExtremeMultiplier(self.extreme_multiplier));
        }
        if !(self.phrase_negation_amplifier > 0.0) || !self.phrase_negation_amplifier.is_finite() {
            return Err(ConfigError::PhraseAmplifier(self.phrase_negation_amplifier));
        }
        if !(self.plain_negation_multiplier < 0.0) || !self.plain_negation_multiplier.is_finite() {
            return Err(ConfigError::PlainNegation(self.plain_negation_multiplier));
        }
        if !self.extreme_negation_factor.is_finite() {
            return Err(ConfigError::ExtremeNegation(self.extreme_negation_factor));
        }
        Ok(())
    }
}

/// Flag set and running totals for one review.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct EngineState {
    pub score: f64,
    pub neg_flag: bool,
    pub pos_word_flag: bool,
    pub neg_word_flag: bool,
    pub extreme_flag: bool,
    pub phrase_flag: bool,
    pub pure_pos_flag: bool,
    pub pure_neg_flag: bool,
    pub and_flag: bool,
    pub double_flag: bool,
    /// Contribution of the most recent conjunction group.
    pub group_score: f64,
    /// Lexicon score of the most recent sentiment word, before any multiplier.
    pub last_base: f64,
    /// Whether the most recent sentiment word was extreme-modified and has
    /// not yet been consumed by a negation.
    pub last_extreme: bool,
    #[serde(skip)]
    modified: bool,
}

impl EngineState {
    fn close_group(&mut self) {
        self.and_flag = false;
        self.double_flag = false;
    }

    fn consume_negation(&mut self) {
        self.group_score = 0.0;
        self.last_extreme = false;
        self.modified = true;
        self.close_group();
    }

    fn refresh_purity(&mut self) {
        self.pure_pos_flag = !self.modified && self.pos_word_flag && !self.neg_word_flag;
        self.pure_neg_flag = !self.modified && self.neg_word_flag && !self.pos_word_flag;
    }
}

/// One row of a score trace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceEntry {
    pub token: String,
    pub location: &'static str,
    pub score_after: f64,
    pub calculation: String,
    #[serde(skip)]
    pub role: TokenRole,
    pub state: EngineState,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ScoreTrace {
    pub entries: Vec<TraceEntry>,
}

impl ScoreTrace {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn scores(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.score_after).collect()
    }

    /// Four-column text table: Token | Location | Score | Calculation.
    pub fn render(&self) -> String {
        let header = ["Token", "Location", "Score", "Calculation"];
        let rows: Vec<[String; 4]> = self
            .entries
            .iter()
            .map(|e| {
                [
                    e.token.clone(),
                    e.location.to_owned(),
                    fmt_num(e.score_after),
                    e.calculation.clone(),
                ]
            })
            .collect();

        let mut widths = header.map(|h| h.chars().count());
        for row in &rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }

        let line = |cells: &[&str]| {
            let mut out = String::from("|");
            for (cell, w) in cells.iter().zip(widths) {
                let pad = w - cell.chars().count();
                out.push(' ');
                out.push_str(cell);
                out.push_str(&" ".repeat(pad));
                out.push_str(" |");
            }
            out.push('\n');
            out
        };

        let mut out = line(&header);
        out.push('|');
        for w in widths {
            out.push_str(&"-".repeat(w + 2));
            out.push('|');
        }
        out.push('\n');
        for row in &rows {
            out.push_str(&line(&row.each_ref().map(String::as_str)));
        }
        out
    }
}

impl fmt::Display for ScoreTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Compact number rendering for trace tables: at most four decimals, no
/// trailing zeros.
pub fn fmt_num(x: f64) -> String {
    let s = format!("{x:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_owned()
    } else {
        s.to_owned()
    }
}

/// Operand rendering: negative values get parentheses after an operator.
fn operand(x: f64) -> String {
    let s = fmt_num(x);
    if s.starts_with('-') {
        format!("({s})")
    } else {
        s
    }
}

fn snap(x: f64) -> f64 {
    if x.abs() < ZERO_TOLERANCE {
        0.0
    } else {
        x
    }
}

/// Does `tokens[idx]` close one of the idioms, matched against the
/// immediately preceding tokens?
fn closes_idiom(tokens: &[&str], idx: usize, idioms: &[Vec<String>]) -> bool {
    idioms.iter().any(|idiom| {
        let n = idiom.len();
        n <= idx + 1 && tokens[idx + 1 - n..=idx].iter().zip(idiom).all(|(t, w)| *t == w)
    })
}

/// Score an already filtered and normalized token sequence.
pub fn score_tokens(
    tokens: &[&str],
    ldd: &LexiconDataDictionary,
    config: &RuleConfig,
) -> (f64, ScoreTrace) {
    let mut st = EngineState::default();
    let mut entries = Vec::with_capacity(tokens.len());

    for (idx, &token) in tokens.iter().enumerate() {
        let role = ldd.lookup_role(token);
        let before = st.score;
        let mut calculation = String::from("None");
        let mut neg_applied = false;

        match role {
            TokenRole::Positive(base) | TokenRole::Negative(base) => {
                let contribution = if st.extreme_flag {
                    calculation = if before == 0.0 {
                        format!("{} * {}", fmt_num(base), fmt_num(config.extreme_multiplier))
                    } else {
                        format!(
                            "{} + ({} * {})",
                            fmt_num(before),
                            fmt_num(base),
                            fmt_num(config.extreme_multiplier)
                        )
                    };
                    st.modified = true;
                    base * config.extreme_multiplier
                } else {
                    calculation = format!("{} + {}", fmt_num(before), operand(base));
                    base
                };
                st.score += contribution;
                if st.and_flag {
                    st.group_score += contribution;
                } else {
                    st.group_score = contribution;
                    st.double_flag = false;
                }
                st.last_base = base;
                st.last_extreme = st.extreme_flag;
                st.extreme_flag = false;
                st.and_flag = false;
                if base > 0.0 {
                    st.pos_word_flag = true;
                } else {
                    st.neg_word_flag = true;
                }
            }
            TokenRole::Extreme => {
                st.extreme_flag = true;
                st.close_group();
            }
            TokenRole::AndWord => {
                st.and_flag = true;
                st.double_flag = true;
            }
            TokenRole::PhraseInitiator => {
                st.phrase_flag = true;
                st.close_group();
            }
            TokenRole::StopWord | TokenRole::Unknown => st.close_group(),
            TokenRole::Negation => {
                if closes_idiom(tokens, idx, ldd.double_negation_idioms()) {
                    calculation = "None (double negation)".to_owned();
                    st.close_group();
                } else {
                    st.neg_flag = true;
                    neg_applied = true;
                    if st.phrase_flag {
                        let amplified =
                            st.last_base.abs() * config.phrase_negation_amplifier * st.last_base.signum();
                        calculation = if st.last_base >= 0.0 {
                            format!(
                                "{} + {} * {}",
                                fmt_num(before),
                                fmt_num(st.last_base),
                                fmt_num(config.phrase_negation_amplifier)
                            )
                        } else {
                            format!(
                                "{} + ({} * {})",
                                fmt_num(before),
                                fmt_num(st.last_base),
                                fmt_num(config.phrase_negation_amplifier)
                            )
                        };
                        st.score += amplified;
                        st.phrase_flag = false;
                    } else if st.last_extreme {
                        calculation = format!(
                            "{} + ({} * {})",
                            fmt_num(before),
                            fmt_num(st.last_base),
                            fmt_num(config.extreme_negation_factor)
                        );
                        st.score += st.last_base * config.extreme_negation_factor;
                    } else if st.group_score != 0.0 {
                        let g = st.group_score;
                        calculation = if g == before {
                            format!("{} * {}", fmt_num(g), fmt_num(config.plain_negation_multiplier))
                        } else {
                            format!(
                                "{} - {} + ({} * {})",
                                fmt_num(before),
                                operand(g),
                                fmt_num(g),
                                fmt_num(config.plain_negation_multiplier)
                            )
                        };
                        st.score = st.score - g + g * config.plain_negation_multiplier;
                    } else {
                        calculation = "None (nothing to negate)".to_owned();
                    }
                    st.consume_negation();
                }
            }
        }

        st.refresh_purity();
        entries.push(TraceEntry {
            token: token.to_owned(),
            location: role.location(),
            score_after: st.score,
            calculation,
            role,
            state: st,
        });
        if neg_applied {
            st.neg_flag = false;
        }
    }

    let score = snap(st.score);
    if let Some(last) = entries.last_mut() {
        last.score_after = score;
    }
    (score, ScoreTrace { entries })
}

/// Full pipeline for one raw review.
pub fn score_review(
    text: &str,
    ldd: &LexiconDataDictionary,
    config: &RuleConfig,
) -> (f64, ScoreTrace) {
    let stream: TokenStream = preprocess(text, ldd);
    score_tokens(&stream.words(), ldd, config)
}
