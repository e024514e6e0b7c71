//! Review datasets on disk: ingestion with null/duplicate cleaning, seeded
//! train/test splits, and the labeled export consumed downstream.

use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::classify::{BinaryLabel, SentimentCategory};
use crate::lexicon::nfc;

pub const LABELED_COLUMNS: [&str; 7] =
    ["id", "text", "gold_label", "raw_score", "normalized_score", "category", "binary_pred"];

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}:{line}: malformed CSV: {message}")]
    Csv { path: String, line: u64, message: String },
    #[error("{path}: missing required column '{column}'")]
    MissingColumn { path: String, column: String },
    #[error("{path}:{line}: duplicate id '{id}'")]
    DuplicateId { path: String, line: u64, id: String },
    #[error("{path}:{line}: bad value '{value}' in column '{column}'")]
    BadValue { path: String, line: u64, column: String, value: String },
    #[error("train fraction must be strictly between 0 and 1 (got {0})")]
    BadFraction(f64),
}

impl CorpusError {
    pub fn is_io(&self) -> bool {
        matches!(self, CorpusError::Io { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Review {
    pub id: String,
    pub text: String,
    pub gold_label: Option<BinaryLabel>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoredReview {
    pub review: Review,
    pub raw_score: f64,
    pub normalized_score: f64,
    pub category: SentimentCategory,
    pub binary_pred: BinaryLabel,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct LoadReport {
    pub rows_read: usize,
    pub null_dropped: usize,
    pub duplicates_dropped: usize,
    pub retained: usize,
}

fn open(path: &Path) -> Result<File, CorpusError> {
    File::open(path).map_err(|source| CorpusError::Io { path: path.display().to_string(), source })
}

fn csv_error(path: &str, e: csv::Error) -> CorpusError {
    let line = e.position().map_or(0, |p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(source) => CorpusError::Io { path: path.to_owned(), source },
        kind => CorpusError::Csv { path: path.to_owned(), line, message: format!("{kind:?}") },
    }
}

struct Columns {
    index: HashMap<String, usize>,
    path: String,
}

impl Columns {
    fn new(headers: &csv::StringRecord, path: &str) -> Self {
        let index = headers.iter().enumerate().map(|(i, h)| (h.trim().to_owned(), i)).collect();
        Self { index, path: path.to_owned() }
    }

    fn require(&self, column: &str) -> Result<usize, CorpusError> {
        self.index.get(column).copied().ok_or_else(|| CorpusError::MissingColumn {
            path: self.path.clone(),
            column: column.to_owned(),
        })
    }
}

fn parse_label(raw: &str, path: &str, line: u64, column: &str) -> Result<Option<BinaryLabel>, CorpusError> {
    let raw = raw.trim();
    if raw.is_empty() {
        return Ok(None);
    }
    raw.parse().map(Some).map_err(|_| CorpusError::BadValue {
        path: path.to_owned(),
        line,
        column: column.to_owned(),
        value: raw.to_owned(),
    })
}

/// Load an `id,text,label` CSV. Empty texts are dropped, exact duplicate texts
/// (after NFC) keep their first occurrence. The `label` column is optional
/// and may hold empty cells.
pub fn load_dataset(path: impl AsRef<Path>) -> Result<(Vec<Review>, LoadReport), CorpusError> {
    let path = path.as_ref();
    read_dataset(open(path)?, &path.display().to_string())
}

pub fn read_dataset<R: Read>(reader: R, name: &str) -> Result<(Vec<Review>, LoadReport), CorpusError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers = rdr.headers().map_err(|e| csv_error(name, e))?.clone();
    let cols = Columns::new(&headers, name);
    let id_col = cols.require("id")?;
    let text_col = cols.require("text")?;
    let label_col = cols.index.get("label").copied();

    let mut report = LoadReport::default();
    let mut reviews = Vec::new();
    let mut seen_text = HashSet::new();
    let mut seen_id = HashSet::new();

    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(name, e))?;
        let line = record.position().map_or(0, |p| p.line());
        report.rows_read += 1;

        let text = nfc(record.get(text_col).unwrap_or("").trim());
        if text.is_empty() {
            report.null_dropped += 1;
            continue;
        }
        if !seen_text.insert(text.clone()) {
            report.duplicates_dropped += 1;
            continue;
        }
        let id = record.get(id_col).unwrap_or("").trim().to_owned();
        if !seen_id.insert(id.clone()) {
            return Err(CorpusError::DuplicateId { path: name.to_owned(), line, id });
        }
        let gold_label = match label_col {
            Some(c) => parse_label(record.get(c).unwrap_or(""), name, line, "label")?,
            None => None,
        };
        reviews.push(Review { id, text, gold_label });
    }
    report.retained = reviews.len();
    Ok((reviews, report))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Split<T> {
    pub train: Vec<T>,
    pub test: Vec<T>,
    /// Set when one side of the split came out empty.
    pub warning: Option<String>,
}

/// Seeded shuffle, then the first `round(fraction * n)` items train.
pub fn split_dataset<T: Clone>(items: &[T], train_fraction: f64, seed: u64) -> Result<Split<T>, CorpusError> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(CorpusError::BadFraction(train_fraction));
    }
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let n_train = (train_fraction * items.len() as f64).round() as usize;

    let train: Vec<T> = order[..n_train].iter().map(|&i| items[i].clone()).collect();
    let test: Vec<T> = order[n_train..].iter().map(|&i| items[i].clone()).collect();
    let warning = (train.is_empty() || test.is_empty()).then(|| {
        format!("degenerate split of {} items: {} train / {} test", items.len(), train.len(), test.len())
    });
    Ok(Split { train, test, warning })
}

/// Write the labeled export. Row order follows the input.
pub fn write_labeled(path: impl AsRef<Path>, scored: &[ScoredReview]) -> Result<(), CorpusError> {
    let path = path.as_ref();
    let name = path.display().to_string();
    let file = File::create(path).map_err(|source| CorpusError::Io { path: name.clone(), source })?;
    write_labeled_to(file, scored).map_err(|e| csv_error(&name, e))
}

pub fn write_labeled_to<W: Write>(writer: W, scored: &[ScoredReview]) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(LABELED_COLUMNS)?;
    for s in scored {
        w.write_record([
            s.review.id.as_str(),
            s.review.text.as_str(),
            s.review.gold_label.map_or("", BinaryLabel::as_str),
            &s.raw_score.to_string(),
            &s.normalized_score.to_string(),
            s.category.as_str(),
            s.binary_pred.as_str(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Read a labeled export back. No cleaning is applied.
pub fn read_labeled(path: impl AsRef<Path>) -> Result<Vec<ScoredReview>, CorpusError> {
    let path = path.as_ref();
    let name = path.display().to_string();
    let mut rdr = csv::Reader::from_reader(open(path)?);
    let headers = rdr.headers().map_err(|e| csv_error(&name, e))?.clone();
    let cols = Columns::new(&headers, &name);
    let idx: Vec<usize> = LABELED_COLUMNS.iter().map(|c| cols.require(c)).collect::<Result<_, _>>()?;

    let mut out = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(&name, e))?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |i: usize| record.get(idx[i]).unwrap_or("");
        let bad = |i: usize| CorpusError::BadValue {
            path: name.clone(),
            line,
            column: LABELED_COLUMNS[i].to_owned(),
            value: field(i).to_owned(),
        };
        out.push(ScoredReview {
            review: Review {
                id: field(0).to_owned(),
                text: field(1).to_owned(),
                gold_label: parse_label(field(2), &name, line, "gold_label")?,
            },
            raw_score: field(3).parse().map_err(|_| bad(3))?,
            normalized_score: field(4).parse().map_err(|_| bad(4))?,
            category: field(5).parse().map_err(|_| bad(5))?,
            binary_pred: field(6).parse().map_err(|_| bad(6))?,
        });
    }
    Ok(out)
}

/// Pull two named columns out of any CSV with a header row.
pub fn read_columns(
    path: impl AsRef<Path>,
    first: &str,
    second: &str,
) -> Result<(Vec<String>, Vec<String>), CorpusError> {
    let path = path.as_ref();
    let name = path.display().to_string();
    let mut rdr = csv::Reader::from_reader(open(path)?);
    let headers = rdr.headers().map_err(|e| csv_error(&name, e))?.clone();
    let cols = Columns::new(&headers, &name);
    let (a, b) = (cols.require(first)?, cols.require(second)?);
    let mut left = Vec::new();
    let mut right = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(&name, e))?;
        left.push(record.get(a).unwrap_or("").trim().to_owned());
        right.push(record.get(b).unwrap_or("").trim().to_owned());
    }
    Ok((left, right))
}
