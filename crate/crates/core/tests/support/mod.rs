#![allow(dead_code)]

use bsps::LexiconDataDictionary;

/// Review texts for the three worked examples and the shirt review.
pub const EXAMPLE_01: &str = "খাবারটা ভালো এবং সুস্বাদু ছিল না";
pub const EXAMPLE_02: &str = "এত ভালো যে বিশ্বাস হয় না";
pub const EXAMPLE_03: &str = "ব্যাগটা খুব খারাপ না";
pub const SHIRT_REVIEW: &str = "ভাই, শার্টটা দামের তুলনায় খুব সুন্দর আর বিক্রেতা ভাই ভালো দেখতে!";
pub const SHIRT_TOKENS: [&str; 11] = [
    "ভাই", "শার্টটা", "দামের", "তুলনায়", "খুব", "সুন্দর", "আর", "বিক্রেতা", "ভাই", "ভালো", "দেখতে",
];

pub const SAMPLE_CORPUS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/sample_reviews.csv");

/// One word per role class.
pub const TOY_WORDS: [&str; 8] = ["good", "bad", "not", "very", "so", "and", "the", "xyz"];
pub const TOY_POSITIVE: f64 = 0.7;
pub const TOY_NEGATIVE: f64 = -0.4;

pub fn toy_lexicon() -> LexiconDataDictionary {
    LexiconDataDictionary::from_json(&format!(
        r#"{{"positive": {{"good": {TOY_POSITIVE}}}, "negative": {{"bad": {TOY_NEGATIVE}}},
            "negation_words": ["not"], "extreme_words": ["very"], "phrase_initiators": ["so"],
            "and_words": ["and"], "stop_words": ["the"], "double_negation_idioms": []}}"#
    ))
    .unwrap()
}

/// Every sequence over `TOY_WORDS` of length 1..=max_len.
pub fn toy_sequences(max_len: usize) -> Vec<Vec<&'static str>> {
    let mut all = Vec::new();
    let mut frontier: Vec<Vec<&'static str>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for seq in &frontier {
            for w in TOY_WORDS {
                let mut s = seq.clone();
                s.push(w);
                next.push(s);
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    all
}

/// Hand-written interpreter of the rule table, kept apart from the engine.
/// Returns the score after every token; the last value is the final score.
pub mod oracle {
    pub struct Constants {
        pub extreme: f64,
        pub phrase_amp: f64,
        pub extreme_neg: f64,
        pub plain_neg: f64,
    }

    pub const DEFAULTS: Constants =
        Constants { extreme: 1.6, phrase_amp: 1.5, extreme_neg: -2.0, plain_neg: -1.0 };

    fn sign(x: f64) -> f64 {
        if x < 0.0 {
            -1.0
        } else if x > 0.0 {
            1.0
        } else {
            0.0
        }
    }

    pub fn run(words: &[&str], pos: f64, neg: f64, k: &Constants) -> Vec<f64> {
        let mut score = 0.0_f64;
        let mut group: Vec<f64> = Vec::new();
        let mut joining = false;
        let mut extreme = false;
        let mut phrase = false;
        let mut last_base = 0.0_f64;
        let mut last_modified = false;
        let mut out = Vec::new();

        for &w in words {
            match w {
                "good" | "bad" => {
                    let s = if w == "good" { pos } else { neg };
                    let c = if extreme { s * k.extreme } else { s };
                    score += c;
                    if !joining {
                        group.clear();
                    }
                    group.push(c);
                    last_base = s;
                    last_modified = extreme;
                    extreme = false;
                    joining = false;
                }
                "very" => {
                    extreme = true;
                    joining = false;
                }
                "and" => joining = true,
                "so" => {
                    phrase = true;
                    joining = false;
                }
                "not" => {
                    joining = false;
                    if phrase {
                        score += last_base.abs() * k.phrase_amp * sign(last_base);
                        phrase = false;
                    } else if last_modified {
                        score += last_base * k.extreme_neg;
                    } else if !group.is_empty() {
                        let g = group.iter().fold(0.0, |a, b| a + b);
                        score = score - g + g * k.plain_neg;
                    }
                    group.clear();
                    last_modified = false;
                }
                _ => joining = false,
            }
            out.push(score);
        }
        if let Some(last) = out.last_mut() {
            if last.abs() < 1e-9 {
                *last = 0.0;
            }
        }
        out
    }
}
