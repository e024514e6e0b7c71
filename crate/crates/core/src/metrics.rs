//! Confusion matrices and support-weighted precision / recall / F1.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("gold has {gold} labels but predictions have {pred}")]
    LengthMismatch { gold: usize, pred: usize },
    #[error("label '{0}' is not in the label set")]
    UnknownLabel(String),
    #[error("duplicate label '{0}' in the label set")]
    DuplicateLabel(String),
    #[error("confusion matrix is empty")]
    Empty,
}

/// Rows are gold labels, columns are predictions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    labels: Vec<String>,
    counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    /// Build directly from counts; used by tests and by callers that already
    /// hold a tallied matrix.
    pub fn from_counts(labels: Vec<String>, counts: Vec<Vec<u64>>) -> Result<Self, MetricsError> {
        let n = labels.len();
        if counts.len() != n || counts.iter().any(|r| r.len() != n) {
            return Err(MetricsError::LengthMismatch { gold: n, pred: counts.len() });
        }
        check_unique(&labels)?;
        Ok(Self { labels, counts })
    }

    /// Same matrix under a different label order.
    pub fn permuted(&self, order: &[usize]) -> Self {
        Self {
            labels: order.iter().map(|&i| self.labels[i].clone()).collect(),
            counts: order
                .iter()
                .map(|&r| order.iter().map(|&c| self.counts[r][c]).collect())
                .collect(),
        }
    }
}

fn check_unique(labels: &[String]) -> Result<(), MetricsError> {
    let mut seen = std::collections::HashSet::new();
    for l in labels {
        if !seen.insert(l) {
            return Err(MetricsError::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

pub fn confusion<S: AsRef<str>>(
    gold: &[S],
    pred: &[S],
    labels: &[String],
) -> Result<ConfusionMatrix, MetricsError> {
    if gold.len() != pred.len() {
        return Err(MetricsError::LengthMismatch { gold: gold.len(), pred: pred.len() });
    }
    check_unique(labels)?;
    let index: HashMap<&str, usize> =
        labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    let lookup = |l: &str| index.get(l).copied().ok_or_else(|| MetricsError::UnknownLabel(l.to_owned()));

    let n = labels.len();
    let mut counts = vec![vec![0u64; n]; n];
    for (g, p) in gold.iter().zip(pred) {
        counts[lookup(g.as_ref())?][lookup(p.as_ref())?] += 1;
    }
    Ok(ConfusionMatrix { labels: labels.to_vec(), counts })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
    /// Set when any of the three metrics hit a 0/0 and was reported as 0.
    pub zero_division: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Weighted {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub labels: Vec<String>,
    pub matrix: Vec<Vec<u64>>,
    pub accuracy: f64,
    pub per_class: BTreeMap<String, ClassMetrics>,
    pub weighted: Weighted,
    #[serde(default)]
    pub config: serde_json::Value,
}

fn ratio(num: u64, den: u64) -> (f64, bool) {
    if den == 0 {
        (0.0, true)
    } else {
        (num as f64 / den as f64, false)
    }
}

pub fn weighted_metrics(matrix: &ConfusionMatrix) -> Result<EvalReport, MetricsError> {
    let total = matrix.total();
    if total == 0 {
        return Err(MetricsError::Empty);
    }
    let n = matrix.labels.len();
    let c = &matrix.counts;

    let mut per_class = BTreeMap::new();
    let (mut wp, mut wr, mut wf) = (0.0, 0.0, 0.0);
    let mut diagonal = 0;
    for i in 0..n {
        let tp = c[i][i];
        let support: u64 = c[i].iter().sum();
        let predicted: u64 = (0..n).map(|r| c[r][i]).sum();
        diagonal += tp;

        let (precision, p0) = ratio(tp, predicted);
        let (recall, r0) = ratio(tp, support);
        let (f1, f0) = if precision + recall == 0.0 {
            (0.0, true)
        } else {
            (2.0 * precision * recall / (precision + recall), false)
        };

        let w = support as f64;
        wp += w * precision;
        wr += w * recall;
        wf += w * f1;
        per_class.insert(
            matrix.labels[i].clone(),
            ClassMetrics { precision, recall, f1, support, zero_division: p0 || r0 || f0 },
        );
    }

    let t = total as f64;
    Ok(EvalReport {
        labels: matrix.labels.clone(),
        matrix: matrix.counts.clone(),
        accuracy: diagonal as f64 / t,
        per_class,
        weighted: Weighted { precision: wp / t, recall: wr / t, f1: wf / t },
        config: serde_json::Value::Null,
    })
}

impl EvalReport {
    pub fn with_config(mut self, config: serde_json::Value) -> Self {
        self.config = config;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Per-class rows for plotting: label,precision,recall,f1,support.
    pub fn per_class_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["label", "precision", "recall", "f1", "support"]).expect("in-memory write");
        for label in &self.labels {
            let m = &self.per_class[label];
            w.write_record([
                label.clone(),
                m.precision.to_string(),
                m.recall.to_string(),
                m.f1.to_string(),
                m.support.to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }

    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let width = self.labels.iter().map(|l| l.chars().count()).max().unwrap_or(0).max(8);
        let _ = writeln!(out, "{:<width$}  precision  recall     f1  support", "label");
        for label in &self.labels {
            let m = &self.per_class[label];
            let _ = writeln!(
                out,
                "{:<width$}  {:>9.4}  {:>6.4}  {:>5.4}  {:>7}",
                label, m.precision, m.recall, m.f1, m.support
            );
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "accuracy            {:.4}", self.accuracy);
        let _ = writeln!(out, "weighted precision  {:.4}", self.weighted.precision);
        let _ = writeln!(out, "weighted recall     {:.4}", self.weighted.recall);
        let _ = writeln!(out, "weighted f1         {:.4}", self.weighted.f1);
        out
    }
}
