//! Tokenization, normalization and stop-word filtering.

use std::ops::Range;
use std::sync::OnceLock;

use regex::Regex;
use unicode_normalization::UnicodeNormalization;

use crate::lexicon::{LexiconDataDictionary, TokenRole};

/// A word with its byte span in the original text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub span: Range<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenStream {
    pub tokens: Vec<Token>,
}

impl TokenStream {
    /// Naive whitespace split that keeps attached punctuation, e.g. `looking!`.
    /// Useful for feeding [`normalize_tokens`] raw material.
    pub fn from_whitespace(text: &str) -> Self {
        let mut tokens = Vec::new();
        let mut start = None;
        for (i, c) in text.char_indices().chain(std::iter::once((text.len(), ' '))) {
            match (c.is_whitespace(), start) {
                (true, Some(s)) => {
                    tokens.push(Token { text: text[s..i].to_owned(), span: s..i });
                    start = None;
                }
                (false, None) => start = Some(i),
                _ => {}
            }
        }
        Self { tokens }
    }

    pub fn words(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.text.as_str()).collect()
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// Bengali letters, vowel signs and digits; Latin letters; ASCII digits; and
/// the zero-width (non-)joiners that occur inside Bengali conjuncts.
fn word_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"[[\p{Bengali}&&[\p{L}\p{M}\p{Nd}]][\p{Latin}&&\p{L}]0-9\x{200C}\x{200D}]+")
            .expect("word pattern compiles")
    })
}

fn is_joiner(c: char) -> bool {
    matches!(c, '\u{200C}' | '\u{200D}')
}

/// Split text into maximal runs of word characters.
pub fn tokenize(text: &str) -> TokenStream {
    let tokens = word_regex()
        .find_iter(text)
        .filter(|m| !m.as_str().chars().all(is_joiner))
        .map(|m| Token { text: m.as_str().to_owned(), span: m.range() })
        .collect();
    TokenStream { tokens }
}

/// NFC-normalize each token and strip any non-word characters left on it.
/// Tokens that end up empty are dropped.
pub fn normalize_tokens(stream: TokenStream) -> TokenStream {
    let tokens = stream
        .tokens
        .into_iter()
        .filter_map(|t| {
            let composed: String = t.text.nfc().collect();
            let cleaned: String = word_regex().find_iter(&composed).map(|m| m.as_str()).collect();
            if cleaned.chars().all(is_joiner) {
                None
            } else {
                Some(Token { text: cleaned, span: t.span })
            }
        })
        .collect();
    TokenStream { tokens }
}

/// Drop tokens whose role is `StopWord`. Anything with a stronger role stays.
pub fn remove_stop_words(stream: TokenStream, ldd: &LexiconDataDictionary) -> TokenStream {
    let tokens = stream
        .tokens
        .into_iter()
        .filter(|t| ldd.lookup_role(&t.text) != TokenRole::StopWord)
        .collect();
    TokenStream { tokens }
}

/// tokenize → normalize → remove stop words.
pub fn preprocess(text: &str, ldd: &LexiconDataDictionary) -> TokenStream {
    remove_stop_words(normalize_tokens(tokenize(text)), ldd)
}
