mod support;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use bsps::corpus;
use support::*;

fn bsps(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bsps")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn score_trace_for_example_one() {
    let out = bsps(&["score", "--trace", EXAMPLE_01]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].contains("Token") && lines[0].contains("Location"));
    assert!(lines[0].contains("Score") && lines[0].contains("Calculation"));
    // header, rule, five token rows
    assert!(lines[6].contains("Direct Negation") && lines[6].contains("1.6 * -1"), "{text}");
    assert!(lines[6].contains("| -1.6 "), "{text}");
    assert!(text.contains("score: -1.6\n"));
    assert!(text.contains("binary: negative\n"));
}

#[test]
fn score_empty_and_unknown_text() {
    let out = bsps(&["score", "--trace", ""]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.starts_with('|')).count(), 2);
    assert!(text.contains("score: 0\n"));

    let out = bsps(&["score", "--trace", "লাল নীল সবুজ"]);
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().filter(|l| l.starts_with('|')).skip(2).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.contains("| None ")));
    assert!(text.contains("score: 0\n"));
}

#[test]
fn score_with_scale_reports_category() {
    let dir = tempfile::tempdir().unwrap();
    let scale = dir.path().join("scale.json");
    fs::write(&scale, r#"{"max_positive": 2.25, "max_negative_magnitude": 1.6}"#).unwrap();
    let out = bsps(&["score", EXAMPLE_01, "--scale", p(&scale)]);
    let text = stdout(&out);
    assert!(text.contains("normalized: -1\ncategory: extremely_negative"), "{text}");
}

#[test]
fn invalid_lexicon_fails_with_report() {
    let dir = tempfile::tempdir().unwrap();
    let lex = dir.path().join("bad.json");
    fs::write(&lex, r#"{"positive": {"ভালো": 1.5}, "extreme_words": ["ভালো"]}"#).unwrap();
    let out = bsps(&["score", "ভালো", "--lexicon", p(&lex)]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("outside the allowed range") && err.contains("appears in both"), "{err}");

    let out = bsps(&["validate-lexicon", p(&lex)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out).lines().filter(|l| l.starts_with("error:")).count(), 2);
}

#[test]
fn validate_lexicon_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    fs::write(&good, bsps::LexiconDataDictionary::starter_json()).unwrap();
    let out = bsps(&["validate-lexicon", p(&good)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "lexicon OK\n");

    let dup = dir.path().join("dup.json");
    fs::write(&dup, r#"{"stop_words": ["আর", "আর"]}"#).unwrap();
    let out = bsps(&["validate-lexicon", p(&dup)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("warning: duplicate"));

    let out = bsps(&["validate-lexicon", "/nonexistent/lexicon.json"]);
    assert_eq!(out.status.code(), Some(2));

    let garbage = dir.path().join("garbage.json");
    fs::write(&garbage, "{").unwrap();
    assert_eq!(bsps(&["validate-lexicon", p(&garbage)]).status.code(), Some(1));
}

#[test]
fn run_sample_corpus_is_deterministic_across_workers() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let c = dir.path().join("c.csv");
    for (out, workers) in [(&a, "1"), (&b, "4"), (&c, "4")] {
        let o = bsps(&["run", "--input", SAMPLE_CORPUS, "--output", p(out), "--workers", workers, "--emit-plot-data"]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let bytes = fs::read(&a).unwrap();
    assert_eq!(bytes, fs::read(&b).unwrap());
    assert_eq!(bytes, fs::read(&c).unwrap());
    assert_eq!(fs::read(dir.path().join("a.scale.json")).unwrap(), fs::read(dir.path().join("b.scale.json")).unwrap());

    let scored = corpus::read_labeled(&a).unwrap();
    assert_eq!(scored.len(), 60);
    assert!((scored[0].raw_score + 1.6).abs() < 1e-9);

    let histogram = fs::read_to_string(dir.path().join("a.categories.csv")).unwrap();
    let counts: Vec<u32> = histogram.lines().skip(1).map(|l| l.rsplit(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(counts.len(), 9);
    assert!(counts.iter().all(|&n| n > 0), "{histogram}");
    assert_eq!(counts.iter().sum::<u32>(), 60);

    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("a.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["rule_config"]["extreme_multiplier"], 1.6);
    assert_eq!(manifest["scale_source"], "fitted");
    assert_eq!(manifest["seed"], 42);
    assert_eq!(manifest["bins"], serde_json::json!([0.25, 0.5, 0.75, 1.0]));
}

#[test]
fn single_row_dataset() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("one.csv");
    fs::write(&input, format!("id,text,label\nx1,{EXAMPLE_01},negative\n")).unwrap();
    let out = dir.path().join("one.labeled.csv");
    assert_eq!(bsps(&["run", "--input", p(&input), "--output", p(&out)]).status.code(), Some(0));
    let rows = corpus::read_labeled(&out).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].normalized_score, -1.0);
    let scale: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("one.labeled.scale.json")).unwrap()).unwrap();
    assert_eq!(scale["max_positive"], 0.0);
    assert_eq!(scale["max_negative_magnitude"], 1.6);
}

#[test]
fn run_with_supplied_scale_and_bins() {
    let dir = tempfile::tempdir().unwrap();
    let scale = dir.path().join("scale.json");
    fs::write(&scale, r#"{"max_positive": 10.0, "max_negative_magnitude": 10.0}"#).unwrap();
    let out = dir.path().join("o.csv");
    let o = bsps(&[
        "run", "--input", SAMPLE_CORPUS, "--output", p(&out), "--scale", p(&scale), "--bins", "0.1,0.2,0.3,1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rows = corpus::read_labeled(&out).unwrap();
    assert!((rows[1].normalized_score - 0.225).abs() < 1e-12);
    assert_eq!(rows[1].category, bsps::SentimentCategory::ConsiderablyPositive);

    let o = bsps(&["run", "--input", SAMPLE_CORPUS, "--output", p(&out), "--bins", "0.5,0.1,0.3,1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn run_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o.csv");
    let o = bsps(&["run", "--input", "/nonexistent.csv", "--output", p(&out)]);
    assert_eq!(o.status.code(), Some(2));

    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "id,body\n1,x\n").unwrap();
    let o = bsps(&["run", "--input", p(&bad), "--output", p(&out)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing required column 'text'"));

    let config = dir.path().join("rules.json");
    fs::write(&config, r#"{"extreme_multiplier": 0.5}"#).unwrap();
    let o = bsps(&["run", "--input", SAMPLE_CORPUS, "--output", p(&out), "--config", p(&config)]);
    assert_eq!(o.status.code(), Some(1));

    let o = bsps(&["run", "--input", SAMPLE_CORPUS, "--output", "/nonexistent/dir/o.csv"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn custom_rule_config_changes_scores() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("rules.json");
    fs::write(&config, r#"{"extreme_multiplier": 2.0}"#).unwrap();
    let out = bsps(&["score", EXAMPLE_03, "--config", p(&config)]);
    // -0.9 * 2 + (-0.9 * -2) = 0
    assert!(stdout(&out).contains("score: 0\n"), "{}", stdout(&out));
}

#[test]
fn export_writes_seeded_split() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("export.csv");
    let o = bsps(&["export", "--input", SAMPLE_CORPUS, "--output", p(&out), "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let train = corpus::read_labeled(dir.path().join("export.train.csv")).unwrap();
    let test = corpus::read_labeled(dir.path().join("export.test.csv")).unwrap();
    assert_eq!((train.len(), test.len()), (48, 12));
    let first_train = fs::read(dir.path().join("export.train.csv")).unwrap();

    let again = dir.path().join("again.csv");
    bsps(&["export", "--input", SAMPLE_CORPUS, "--output", p(&again), "--seed", "7"]);
    assert_eq!(first_train, fs::read(dir.path().join("again.train.csv")).unwrap());
}

#[test]
fn eval_hand_computed_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("fixture.csv");
    fs::write(&input, "id,gold_label,binary_pred\n1,positive,positive\n2,positive,negative\n3,negative,negative\n")
        .unwrap();
    let o = bsps(&["eval", "--input", p(&input), "--emit-plot-data"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("weighted precision  0.8333"), "{text}");
    assert!(text.contains("accuracy            0.6667"));

    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("fixture.report.json")).unwrap()).unwrap();
    assert_eq!(report["labels"], serde_json::json!(["positive", "negative"]));
    assert_eq!(report["matrix"], serde_json::json!([[1, 1], [0, 1]]));
    assert!((report["weighted"]["precision"].as_f64().unwrap() - 5.0 / 6.0).abs() < 1e-9);
    assert!((report["weighted"]["f1"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-9);
    assert_eq!(report["config"]["gold_column"], "gold_label");
    assert!(dir.path().join("fixture.report.per_class.csv").exists());
}

#[test]
fn eval_self_comparisons_are_perfect() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("labeled.csv");
    bsps(&["run", "--input", SAMPLE_CORPUS, "--output", p(&out)]);

    // rebuild a file where predictions equal gold everywhere
    let rows = corpus::read_labeled(&out).unwrap();
    let agree = dir.path().join("agree.csv");
    let mut body = String::from("gold_label,binary_pred\n");
    for r in &rows {
        let g = r.review.gold_label.unwrap();
        body.push_str(&format!("{g},{g}\n"));
    }
    fs::write(&agree, body).unwrap();
    let o = bsps(&["eval", "--input", p(&agree)]);
    assert!(stdout(&o).contains("accuracy            1.0000"));

    let report_path = dir.path().join("nine.json");
    let o = bsps(&[
        "eval", "--input", p(&out), "--gold-column", "category", "--pred-column", "category", "--output", p(&report_path),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report_path).unwrap()).unwrap();
    let matrix = report["matrix"].as_array().unwrap();
    assert_eq!(matrix.len(), 9);
    for (i, row) in matrix.iter().enumerate() {
        for (j, v) in row.as_array().unwrap().iter().enumerate() {
            assert_eq!(v.as_u64().unwrap() > 0, i == j);
        }
    }
    assert_eq!(report["accuracy"], 1.0);
    // the run manifest next to the input is folded into the config snapshot
    assert_eq!(report["config"]["run"]["rule_config"]["phrase_negation_amplifier"], 1.5);
}

#[test]
fn eval_column_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("f.csv");
    fs::write(&input, "gold_label,binary_pred\npositive,negative\n").unwrap();
    let o = bsps(&["eval", "--input", p(&input), "--pred-column", "nope"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing required column 'nope'"));
}

#[test]
fn class_balance_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("balance.csv");
    let mut body = String::from("id,text,label\n");
    for i in 0..133 {
        body.push_str(&format!("p{i},ভালো পণ্য {i},positive\n"));
    }
    for i in 0..18 {
        body.push_str(&format!("n{i},খারাপ পণ্য {i},negative\n"));
    }
    fs::write(&input, body).unwrap();
    let (reviews, report) = corpus::load_dataset(&input).unwrap();
    assert_eq!(reviews.len(), 151);
    assert_eq!(report.null_dropped + report.duplicates_dropped, 0);
    let positive = reviews.iter().filter(|r| r.gold_label == Some(bsps::BinaryLabel::Positive)).count();
    assert_eq!((positive, reviews.len() - positive), (133, 18));
}
