//! Batch scoring across a bounded worker pool with input-ordered output.

use rayon::prelude::*;
use serde::Serialize;

use crate::classify::{categorize, collapse_binary, fit_scale, normalize, BinConfig, NormalizationScale};
use crate::corpus::{Review, ScoredReview};
use crate::engine::{score_review, RuleConfig};
use crate::lexicon::LexiconDataDictionary;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScaleSource {
    Fitted,
    Supplied,
}

#[derive(Debug, Clone)]
pub struct BatchOutput {
    pub scored: Vec<ScoredReview>,
    pub scale: NormalizationScale,
    pub scale_source: ScaleSource,
}

/// Raw scores in input order. `workers == 0` lets rayon pick.
pub fn score_all(
    reviews: &[Review],
    ldd: &LexiconDataDictionary,
    rules: &RuleConfig,
    workers: usize,
) -> Vec<f64> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool");
    pool.install(|| {
        reviews
            .par_iter()
            .map(|r| score_review(&r.text, ldd, rules).0)
            .collect()
    })
}

/// Score, normalize against the supplied scale (or one fitted on this batch),
/// bin, and collapse to binary predictions.
pub fn run_batch(
    reviews: &[Review],
    ldd: &LexiconDataDictionary,
    rules: &RuleConfig,
    bins: &BinConfig,
    scale: Option<NormalizationScale>,
    workers: usize,
) -> BatchOutput {
    let raw = score_all(reviews, ldd, rules, workers);
    let (scale, scale_source) = match scale {
        Some(s) => (s, ScaleSource::Supplied),
        None => (fit_scale(&raw), ScaleSource::Fitted),
    };
    let scored = reviews
        .iter()
        .zip(raw)
        .map(|(review, raw_score)| {
            let normalized_score = normalize(raw_score, &scale);
            ScoredReview {
                review: review.clone(),
                raw_score,
                normalized_score,
                category: categorize(normalized_score, bins).expect("normalize stays within [-1, 1]"),
                binary_pred: collapse_binary(raw_score),
            }
        })
        .collect();
    BatchOutput { scored, scale, scale_source }
}
