//! Lexicon Data Dictionary (LDD): polarity maps plus the special word lists
//! the scoring engine consults.
//!
//! The on-disk form is a single JSON document with named sections. Words are
//! NFC-normalized on load and on lookup, so visually identical Bengali
//! spellings with different code point sequences resolve to the same entry.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use unicode_normalization::{is_nfc, UnicodeNormalization};

const STARTER_LEXICON: &str = include_str!("../data/starter_lexicon.json");

/// NFC-normalize a word. Cheap when the input is already NFC.
pub fn nfc(word: &str) -> String {
    if is_nfc(word) {
        word.to_owned()
    } else {
        word.nfc().collect()
    }
}

/// Names of the sections of a lexicon document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ListName {
    Positive,
    Negative,
    NegationWords,
    ExtremeWords,
    PhraseInitiators,
    AndWords,
    StopWords,
    DoubleNegationIdioms,
}

impl ListName {
    pub fn as_str(self) -> &'static str {
        match self {
            ListName::Positive => "positive",
            ListName::Negative => "negative",
            ListName::NegationWords => "negation_words",
            ListName::ExtremeWords => "extreme_words",
            ListName::PhraseInitiators => "phrase_initiators",
            ListName::AndWords => "and_words",
            ListName::StopWords => "stop_words",
            ListName::DoubleNegationIdioms => "double_negation_idioms",
        }
    }
}

impl fmt::Display for ListName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One polarity-bearing word.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LexiconEntry {
    pub word: String,
    pub score: f64,
}

/// The role a token plays for the engine. Exactly one role per lookup.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TokenRole {
    Positive(f64),
    Negative(f64),
    Negation,
    Extreme,
    PhraseInitiator,
    AndWord,
    StopWord,
    Unknown,
}

impl TokenRole {
    /// Lexicon polarity for sentiment words, `None` otherwise.
    pub fn polarity(self) -> Option<f64> {
        match self {
            TokenRole::Positive(s) | TokenRole::Negative(s) => Some(s),
            _ => None,
        }
    }

    /// Column label used in trace tables.
    pub fn location(self) -> &'static str {
        match self {
            TokenRole::Positive(_) => "Positive-Lexicon",
            TokenRole::Negative(_) => "Negative Lexicon",
            TokenRole::Negation => "Direct Negation",
            TokenRole::Extreme => "Extreme Word",
            TokenRole::PhraseInitiator => "Phrase-Initial",
            TokenRole::AndWord => "and-word",
            TokenRole::StopWord => "Stop Word",
            TokenRole::Unknown => "None",
        }
    }
}

/// Raw lexicon document, exactly as serialized. Polarity sections keep
/// insertion order and any duplicate keys so validation can report them.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LexiconDocument {
    #[serde(default, with = "ordered_entries")]
    pub positive: Vec<LexiconEntry>,
    #[serde(default, with = "ordered_entries")]
    pub negative: Vec<LexiconEntry>,
    #[serde(default)]
    pub negation_words: Vec<String>,
    #[serde(default)]
    pub extreme_words: Vec<String>,
    #[serde(default)]
    pub phrase_initiators: Vec<String>,
    #[serde(default)]
    pub and_words: Vec<String>,
    #[serde(default)]
    pub stop_words: Vec<String>,
    #[serde(default)]
    pub double_negation_idioms: Vec<Vec<String>>,
}

impl LexiconDocument {
    pub fn from_json(text: &str) -> Result<Self, LexiconError> {
        serde_json::from_str(text).map_err(|e| LexiconError::Schema(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("lexicon document serializes")
    }

    fn word_lists(&self) -> [(ListName, &[String]); 5] {
        [
            (ListName::NegationWords, &self.negation_words),
            (ListName::ExtremeWords, &self.extreme_words),
            (ListName::PhraseInitiators, &self.phrase_initiators),
            (ListName::AndWords, &self.and_words),
            (ListName::StopWords, &self.stop_words),
        ]
    }
}

/// JSON objects are read as ordered entry lists so that duplicate keys survive
/// deserialization (serde maps would silently keep one).
mod ordered_entries {
    use std::fmt;

    use serde::de::{MapAccess, Visitor};
    use serde::ser::SerializeMap;
    use serde::{Deserializer, Serializer};

    use super::LexiconEntry;

    pub fn serialize<S: Serializer>(entries: &[LexiconEntry], s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(entries.len()))?;
        for e in entries {
            map.serialize_entry(&e.word, &e.score)?;
        }
        map.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<LexiconEntry>, D::Error> {
        struct EntriesVisitor;

        impl<'de> Visitor<'de> for EntriesVisitor {
            type Value = Vec<LexiconEntry>;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an object mapping words to numeric scores")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Self::Value, A::Error> {
                let mut out = Vec::with_capacity(map.size_hint().unwrap_or(0));
                while let Some((word, score)) = map.next_entry::<String, f64>()? {
                    out.push(LexiconEntry { word, score });
                }
                Ok(out)
            }
        }

        d.deserialize_map(EntriesVisitor)
    }
}

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("lexicon schema violation: {0}")]
    Schema(String),
    #[error("score {score} for word '{word}' in {list} is outside the allowed range")]
    Range { word: String, list: ListName, score: f64 },
    #[error("word '{word}' appears in both {first} and {second}")]
    Overlap { word: String, first: ListName, second: ListName },
    #[error("invalid entry '{word}' in {list}: {reason}")]
    Invalid { word: String, list: ListName, reason: String },
    #[error("cannot read lexicon {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl LexiconError {
    fn from_violation(v: &Violation) -> Self {
        match v {
            Violation::Range { word, list, score } => LexiconError::Range {
                word: word.clone(),
                list: *list,
                score: *score,
            },
            Violation::Overlap { word, first, second } => LexiconError::Overlap {
                word: word.clone(),
                first: *first,
                second: *second,
            },
            Violation::EmptyWord { list } => LexiconError::Invalid {
                word: String::new(),
                list: *list,
                reason: "empty word".into(),
            },
            Violation::Whitespace { word, list } => LexiconError::Invalid {
                word: word.clone(),
                list: *list,
                reason: "word contains whitespace".into(),
            },
            Violation::IdiomTooShort { idiom } => LexiconError::Invalid {
                word: idiom.join(" "),
                list: ListName::DoubleNegationIdioms,
                reason: "idiom needs at least two words".into(),
            },
            Violation::IdiomWithoutNegation { idiom } => LexiconError::Invalid {
                word: idiom.join(" "),
                list: ListName::DoubleNegationIdioms,
                reason: "idiom must end with a negation word".into(),
            },
            Violation::IdiomStopWord { idiom, word } => LexiconError::Invalid {
                word: word.clone(),
                list: ListName::DoubleNegationIdioms,
                reason: format!("stop word inside idiom '{}' would be filtered out", idiom.join(" ")),
            },
        }
    }
}

/// A hard invariant violation. Any of these makes a document unloadable.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Range { word: String, list: ListName, score: f64 },
    Overlap { word: String, first: ListName, second: ListName },
    EmptyWord { list: ListName },
    Whitespace { word: String, list: ListName },
    IdiomTooShort { idiom: Vec<String> },
    IdiomWithoutNegation { idiom: Vec<String> },
    IdiomStopWord { idiom: Vec<String>, word: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", LexiconError::from_violation(self))
    }
}

/// Tolerated irregularities. Duplicates resolve to the last occurrence.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Warning {
    Duplicate { word: String, list: ListName },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::Duplicate { word, list } => {
                write!(f, "duplicate word '{word}' in {list}; last occurrence wins")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<Warning>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.violations.is_empty() && self.warnings.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return writeln!(f, "lexicon OK");
        }
        for v in &self.violations {
            writeln!(f, "error: {v}")?;
        }
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        Ok(())
    }
}

/// Check every LDD invariant on a raw document, after NFC normalization.
pub fn validate_ldd(doc: &LexiconDocument) -> ValidationReport {
    let mut report = ValidationReport::default();
    // word -> first exclusive list it was seen in
    let mut owner: BTreeMap<String, ListName> = BTreeMap::new();

    let mut claim = |word: &str, list: ListName, report: &mut ValidationReport| {
        if let Some(&first) = owner.get(word) {
            if first == list {
                report.warnings.push(Warning::Duplicate { word: word.to_owned(), list });
            } else {
                report.violations.push(Violation::Overlap {
                    word: word.to_owned(),
                    first,
                    second: list,
                });
            }
        } else {
            owner.insert(word.to_owned(), list);
        }
    };

    for (list, entries) in [(ListName::Positive, &doc.positive), (ListName::Negative, &doc.negative)] {
        for e in entries {
            let Some(word) = check_word(&e.word, list, &mut report) else {
                continue;
            };
            let in_range = match list {
                ListName::Positive => e.score > 0.0 && e.score <= 1.0,
                _ => e.score >= -1.0 && e.score < 0.0,
            };
            if !in_range {
                report.violations.push(Violation::Range { word: word.clone(), list, score: e.score });
            }
            claim(&word, list, &mut report);
        }
    }

    // Stop words only need to stay clear of the other lists; the special
    // lists must be pairwise disjoint and disjoint from both polarity maps.
    for (list, words) in doc.word_lists() {
        for w in words {
            if let Some(word) = check_word(w, list, &mut report) {
                claim(&word, list, &mut report);
            }
        }
    }

    let negations: BTreeSet<String> = doc.negation_words.iter().map(|w| nfc(w.trim())).collect();
    let stops: BTreeSet<String> = doc.stop_words.iter().map(|w| nfc(w.trim())).collect();
    for idiom in &doc.double_negation_idioms {
        let words: Vec<String> = idiom.iter().map(|w| nfc(w.trim())).collect();
        for (w, normalized) in idiom.iter().zip(&words) {
            if normalized.is_empty() {
                report.violations.push(Violation::EmptyWord { list: ListName::DoubleNegationIdioms });
            } else if normalized.chars().any(char::is_whitespace) {
                report.violations.push(Violation::Whitespace {
                    word: w.clone(),
                    list: ListName::DoubleNegationIdioms,
                });
            } else if stops.contains(normalized) {
                report.violations.push(Violation::IdiomStopWord {
                    idiom: words.clone(),
                    word: normalized.clone(),
                });
            }
        }
        if words.len() < 2 {
            report.violations.push(Violation::IdiomTooShort { idiom: words });
        } else if !words.last().is_some_and(|w| negations.contains(w)) {
            report.violations.push(Violation::IdiomWithoutNegation { idiom: words });
        }
    }

    report
}

fn check_word(raw: &str, list: ListName, report: &mut ValidationReport) -> Option<String> {
    let word = nfc(raw.trim());
    if word.is_empty() {
        report.violations.push(Violation::EmptyWord { list });
        None
    } else if word.chars().any(char::is_whitespace) {
        report.violations.push(Violation::Whitespace { word, list });
        None
    } else {
        Some(word)
    }
}

/// Validated, immutable lexicon. Safe to share across threads.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LexiconDataDictionary {
    positive: BTreeMap<String, f64>,
    negative: BTreeMap<String, f64>,
    negation_words: BTreeSet<String>,
    extreme_words: BTreeSet<String>,
    phrase_initiators: BTreeSet<String>,
    and_words: BTreeSet<String>,
    stop_words: BTreeSet<String>,
    double_negation_idioms: Vec<Vec<String>>,
    warnings: Vec<Warning>,
}

impl LexiconDataDictionary {
    /// Build from a parsed document, enforcing every invariant.
    pub fn from_document(doc: &LexiconDocument) -> Result<Self, LexiconError> {
        let report = validate_ldd(doc);
        if let Some(v) = report.violations.first() {
            return Err(LexiconError::from_violation(v));
        }

        let polarity = |entries: &[LexiconEntry]| {
            entries.iter().map(|e| (nfc(e.word.trim()), e.score)).collect::<BTreeMap<_, _>>()
        };
        let set = |words: &[String]| words.iter().map(|w| nfc(w.trim())).collect::<BTreeSet<_>>();

        Ok(Self {
            positive: polarity(&doc.positive),
            negative: polarity(&doc.negative),
            negation_words: set(&doc.negation_words),
            extreme_words: set(&doc.extreme_words),
            phrase_initiators: set(&doc.phrase_initiators),
            and_words: set(&doc.and_words),
            stop_words: set(&doc.stop_words),
            double_negation_idioms: doc
                .double_negation_idioms
                .iter()
                .map(|idiom| idiom.iter().map(|w| nfc(w.trim())).collect())
                .collect(),
            warnings: report.warnings,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, LexiconError> {
        Self::from_document(&LexiconDocument::from_json(text)?)
    }

    /// The small lexicon bundled with the crate.
    pub fn starter() -> Self {
        Self::from_json(STARTER_LEXICON).expect("bundled starter lexicon is valid")
    }

    pub fn starter_json() -> &'static str {
        STARTER_LEXICON
    }

    /// Serialize back to the document form. Duplicates are already resolved.
    pub fn to_document(&self) -> LexiconDocument {
        let entries = |m: &BTreeMap<String, f64>| {
            m.iter().map(|(w, &s)| LexiconEntry { word: w.clone(), score: s }).collect()
        };
        let list = |s: &BTreeSet<String>| s.iter().cloned().collect();
        LexiconDocument {
            positive: entries(&self.positive),
            negative: entries(&self.negative),
            negation_words: list(&self.negation_words),
            extreme_words: list(&self.extreme_words),
            phrase_initiators: list(&self.phrase_initiators),
            and_words: list(&self.and_words),
            stop_words: list(&self.stop_words),
            double_negation_idioms: self.double_negation_idioms.clone(),
        }
    }

    /// Role of a token. Precedence:
    /// Negation > AndWord > PhraseInitiator > Extreme > Positive > Negative > StopWord > Unknown.
    pub fn lookup_role(&self, token: &str) -> TokenRole {
        let owned;
        let token = if is_nfc(token) {
            token
        } else {
            owned = token.nfc().collect::<String>();
            owned.as_str()
        };

        if self.negation_words.contains(token) {
            TokenRole::Negation
        } else if self.and_words.contains(token) {
            TokenRole::AndWord
        } else if self.phrase_initiators.contains(token) {
            TokenRole::PhraseInitiator
        } else if self.extreme_words.contains(token) {
            TokenRole::Extreme
        } else if let Some(&s) = self.positive.get(token) {
            TokenRole::Positive(s)
        } else if let Some(&s) = self.negative.get(token) {
            TokenRole::Negative(s)
        } else if self.stop_words.contains(token) {
            TokenRole::StopWord
        } else {
            TokenRole::Unknown
        }
    }

    pub fn double_negation_idioms(&self) -> &[Vec<String>] {
        &self.double_negation_idioms
    }

    /// Duplicate-entry warnings collected at load time.
    pub fn warnings(&self) -> &[Warning] {
        &self.warnings
    }

    /// Every word the dictionary knows, across all lists.
    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.positive
            .keys()
            .chain(self.negative.keys())
            .chain(&self.negation_words)
            .chain(&self.extreme_words)
            .chain(&self.phrase_initiators)
            .chain(&self.and_words)
            .chain(&self.stop_words)
            .map(String::as_str)
    }
}

/// Read and validate a lexicon file.
pub fn load_ldd(path: impl AsRef<Path>) -> Result<LexiconDataDictionary, LexiconError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| LexiconError::Io {
        path: path.display().to_string(),
        source,
    })?;
    LexiconDataDictionary::from_json(&text)
}
