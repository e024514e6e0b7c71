//! Per-sign normalization of raw scores and the nine-way category scheme.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Nine sentiment grades. `Ord` follows sentiment value, so
/// `ExtremelyNegative < … < Neutral < … < ExtremelyPositive`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SentimentCategory {
    ExtremelyNegative,
    ConsiderablyNegative,
    Negative,
    SlightlyNegative,
    Neutral,
    SlightlyPositive,
    Positive,
    ConsiderablyPositive,
    ExtremelyPositive,
}

impl SentimentCategory {
    /// Most positive first.
    pub const ALL: [SentimentCategory; 9] = [
        SentimentCategory::ExtremelyPositive,
        SentimentCategory::ConsiderablyPositive,
        SentimentCategory::Positive,
        SentimentCategory::SlightlyPositive,
        SentimentCategory::Neutral,
        SentimentCategory::SlightlyNegative,
        SentimentCategory::Negative,
        SentimentCategory::ConsiderablyNegative,
        SentimentCategory::ExtremelyNegative,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SentimentCategory::ExtremelyPositive => "extremely_positive",
            SentimentCategory::ConsiderablyPositive => "considerably_positive",
            SentimentCategory::Positive => "positive",
            SentimentCategory::SlightlyPositive => "slightly_positive",
            SentimentCategory::Neutral => "neutral",
            SentimentCategory::SlightlyNegative => "slightly_negative",
            SentimentCategory::Negative => "negative",
            SentimentCategory::ConsiderablyNegative => "considerably_negative",
            SentimentCategory::ExtremelyNegative => "extremely_negative",
        }
    }

    pub fn is_positive(self) -> bool {
        self > SentimentCategory::Neutral
    }

    pub fn is_negative(self) -> bool {
        self < SentimentCategory::Neutral
    }
}

impl fmt::Display for SentimentCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SentimentCategory {
    type Err = ClassifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| ClassifyError::UnknownCategory(s.to_owned()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BinaryLabel {
    Positive,
    Negative,
}

impl BinaryLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            BinaryLabel::Positive => "positive",
            BinaryLabel::Negative => "negative",
        }
    }
}

impl fmt::Display for BinaryLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BinaryLabel {
    type Err = ClassifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "positive" => Ok(BinaryLabel::Positive),
            "negative" => Ok(BinaryLabel::Negative),
            other => Err(ClassifyError::UnknownLabel(other.to_owned())),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ClassifyError {
    #[error("normalized score {0} is outside [-1, 1]")]
    OutOfRange(f64),
    #[error("bin edges must be four strictly ascending values in (0, 1] ending at 1, got {0:?}")]
    BadEdges(Vec<f64>),
    #[error("cannot parse bin edges '{0}'")]
    EdgeSyntax(String),
    #[error("scale values must be finite and non-negative")]
    BadScale,
    #[error("unknown category '{0}'")]
    UnknownCategory(String),
    #[error("unknown binary label '{0}' (expected positive or negative)")]
    UnknownLabel(String),
}

/// Upper edges of the four positive bins; negative bins mirror them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinConfig {
    positive_edges: [f64; 4],
}

impl Default for BinConfig {
    fn default() -> Self {
        Self { positive_edges: [0.25, 0.5, 0.75, 1.0] }
    }
}

impl BinConfig {
    pub fn new(edges: [f64; 4]) -> Result<Self, ClassifyError> {
        let ascending = edges.windows(2).all(|w| w[0] < w[1]);
        if !ascending || !(edges[0] > 0.0) || edges[3] != 1.0 {
            return Err(ClassifyError::BadEdges(edges.to_vec()));
        }
        Ok(Self { positive_edges: edges })
    }

    /// Parse `E1,E2,E3,E4`.
    pub fn parse(spec: &str) -> Result<Self, ClassifyError> {
        let values: Vec<f64> = spec
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| ClassifyError::EdgeSyntax(spec.to_owned()))?;
        let edges: [f64; 4] = values.clone().try_into().map_err(|_| ClassifyError::BadEdges(values))?;
        Self::new(edges)
    }

    pub fn positive_edges(&self) -> [f64; 4] {
        self.positive_edges
    }

    /// Mirrored negative edges, ascending from -1.
    pub fn negative_edges(&self) -> [f64; 4] {
        let p = self.positive_edges;
        [-p[3], -p[2], -p[1], -p[0]]
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormalizationScale {
    pub max_positive: f64,
    pub max_negative_magnitude: f64,
}

impl NormalizationScale {
    pub fn new(max_positive: f64, max_negative_magnitude: f64) -> Result<Self, ClassifyError> {
        let ok = |x: f64| x.is_finite() && x >= 0.0;
        if ok(max_positive) && ok(max_negative_magnitude) {
            Ok(Self { max_positive, max_negative_magnitude })
        } else {
            Err(ClassifyError::BadScale)
        }
    }

    pub fn validate(&self) -> Result<(), ClassifyError> {
        Self::new(self.max_positive, self.max_negative_magnitude).map(|_| ())
    }
}

/// Largest positive score and largest negative magnitude in a batch.
pub fn fit_scale(raw: &[f64]) -> NormalizationScale {
    raw.iter().fold(NormalizationScale::default(), |mut acc, &r| {
        if r > 0.0 {
            acc.max_positive = acc.max_positive.max(r);
        } else if r < 0.0 {
            acc.max_negative_magnitude = acc.max_negative_magnitude.max(-r);
        }
        acc
    })
}

/// Map a raw score into [-1, 1], each sign scaled by its own maximum.
pub fn normalize(raw: f64, scale: &NormalizationScale) -> f64 {
    if raw > 0.0 {
        if scale.max_positive == 0.0 {
            1.0
        } else {
            (raw / scale.max_positive).min(1.0)
        }
    } else if raw < 0.0 {
        if scale.max_negative_magnitude == 0.0 {
            -1.0
        } else {
            (raw / scale.max_negative_magnitude).max(-1.0)
        }
    } else {
        0.0
    }
}

/// Bin a normalized score. Exactly zero is Neutral; each sign has four bins
/// closed on the side away from zero.
pub fn categorize(normalized: f64, bins: &BinConfig) -> Result<SentimentCategory, ClassifyError> {
    use SentimentCategory::*;

    if !(-1.0..=1.0).contains(&normalized) {
        return Err(ClassifyError::OutOfRange(normalized));
    }
    if normalized == 0.0 {
        return Ok(Neutral);
    }
    let magnitude = normalized.abs();
    let grade = bins.positive_edges.iter().position(|&e| magnitude <= e).unwrap_or(3);
    let positive = [SlightlyPositive, Positive, ConsiderablyPositive, ExtremelyPositive];
    let negative = [SlightlyNegative, Negative, ConsiderablyNegative, ExtremelyNegative];
    Ok(if normalized > 0.0 { positive[grade] } else { negative[grade] })
}

/// Binary label from the raw sign. Zero goes to the majority class (positive).
pub fn collapse_binary(raw: f64) -> BinaryLabel {
    if raw < 0.0 {
        BinaryLabel::Negative
    } else {
        BinaryLabel::Positive
    }
}
