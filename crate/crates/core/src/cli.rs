//! Command-line front end.
//!
//! Exit codes: 0 success, 1 validation or contract failure, 2 I/O failure.

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::classify::{collapse_binary, BinConfig, BinaryLabel, NormalizationScale, SentimentCategory};
use crate::corpus::{self, CorpusError, LoadReport};
use crate::engine::{fmt_num, score_review, RuleConfig};
use crate::lexicon::{validate_ldd, LexiconDataDictionary, LexiconDocument, LexiconError};
use crate::metrics::{confusion, weighted_metrics};
use crate::pipeline::{run_batch, ScaleSource};
use crate::classify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_IO: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "bsps", version, about = "Rule-based sentiment polarity scoring for Bengali reviews")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Score one review and optionally print the per-token trace.
    Score(ScoreArgs),
    /// Score a dataset, fit the normalization scale and write the labeled CSV.
    Run(RunArgs),
    /// Evaluate a prediction column against a gold column.
    Eval(EvalArgs),
    /// Check a lexicon file against every invariant.
    ValidateLexicon {
        path: PathBuf,
    },
    /// `run`, plus seeded train/test files for the fine-tuning harness.
    Export(ExportArgs),
}

#[derive(Debug, Args)]
struct EngineArgs {
    /// Lexicon JSON; the bundled starter lexicon when omitted.
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Rule constants as JSON (any subset of the RuleConfig fields).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Positive bin edges E1,E2,E3,E4; negatives mirror them.
    #[arg(long)]
    bins: Option<String>,
    /// Normalization scale JSON instead of fitting one.
    #[arg(long)]
    scale: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ScoreArgs {
    text: String,
    #[command(flatten)]
    engine: EngineArgs,
    /// Print the Token | Location | Score | Calculation table.
    #[arg(long)]
    trace: bool,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
    #[command(flatten)]
    engine: EngineArgs,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Worker threads for scoring; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Also write a per-category histogram CSV.
    #[arg(long)]
    emit_plot_data: bool,
}

#[derive(Debug, Args)]
struct ExportArgs {
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, default_value_t = 0.8)]
    train_fraction: f64,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "gold_label")]
    gold_column: String,
    #[arg(long, default_value = "binary_pred")]
    pred_column: String,
    /// Report JSON path; defaults to `<input stem>.report.json`.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Also write the per-class CSV next to the report.
    #[arg(long)]
    emit_plot_data: bool,
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn invalid(message: impl Into<String>) -> Self {
        Self { code: EXIT_INVALID, message: message.into() }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        Self { code: EXIT_IO, message: format!("{}: {e}", path.display()) }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<CorpusError> for CliError {
    fn from(e: CorpusError) -> Self {
        let code = if e.is_io() { EXIT_IO } else { EXIT_INVALID };
        Self { code, message: e.to_string() }
    }
}

impl From<LexiconError> for CliError {
    fn from(e: LexiconError) -> Self {
        let code = if matches!(e, LexiconError::Io { .. }) { EXIT_IO } else { EXIT_INVALID };
        Self { code, message: e.to_string() }
    }
}

/// Parse arguments, run the command, return the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let result = match cli.command {
        Command::Score(args) => cmd_score(&args, &mut out),
        Command::Run(args) => cmd_run(&args, None, "run", &mut out),
        Command::Export(args) => cmd_run(&args.run, Some(args.train_fraction), "export", &mut out),
        Command::Eval(args) => cmd_eval(&args, &mut out),
        Command::ValidateLexicon { path } => cmd_validate_lexicon(&path, &mut out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

/// Load a lexicon; on failure the error carries the full validation report.
fn load_lexicon(path: Option<&Path>) -> Result<LexiconDataDictionary, CliError> {
    let Some(path) = path else {
        return Ok(LexiconDataDictionary::starter());
    };
    let doc = LexiconDocument::from_json(&read_text(path)?)
        .map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))?;
    let report = validate_ldd(&doc);
    if !report.is_valid() {
        return Err(CliError::invalid(format!("{}: invalid lexicon\n{report}", path.display())));
    }
    Ok(LexiconDataDictionary::from_document(&doc)?)
}

struct EngineSetup {
    ldd: LexiconDataDictionary,
    rules: RuleConfig,
    bins: BinConfig,
    scale: Option<NormalizationScale>,
}

fn engine_setup(args: &EngineArgs) -> Result<EngineSetup, CliError> {
    let ldd = load_lexicon(args.lexicon.as_deref())?;
    let rules = match &args.config {
        Some(p) => serde_json::from_str::<RuleConfig>(&read_text(p)?)
            .map_err(|e| CliError::invalid(format!("{}: {e}", p.display())))?,
        None => RuleConfig::default(),
    };
    rules.validate().map_err(|e| CliError::invalid(e.to_string()))?;
    let bins = match &args.bins {
        Some(spec) => BinConfig::parse(spec).map_err(|e| CliError::invalid(e.to_string()))?,
        None => BinConfig::default(),
    };
    let scale = match &args.scale {
        Some(p) => {
            let s: NormalizationScale = serde_json::from_str(&read_text(p)?)
                .map_err(|e| CliError::invalid(format!("{}: {e}", p.display())))?;
            s.validate().map_err(|e| CliError::invalid(format!("{}: {e}", p.display())))?;
            Some(s)
        }
        None => None,
    };
    Ok(EngineSetup { ldd, rules, bins, scale })
}

fn emit(out: &mut impl Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError { code: EXIT_IO, message: format!("stdout: {e}") })
}

fn cmd_score(args: &ScoreArgs, out: &mut impl Write) -> Result<i32, CliError> {
    let setup = engine_setup(&args.engine)?;
    let (raw, trace) = score_review(&args.text, &setup.ldd, &setup.rules);
    let mut text = String::new();
    if args.trace {
        text.push_str(&trace.render());
    }
    text.push_str(&format!("score: {}\n", fmt_num(raw)));
    text.push_str(&format!("binary: {}\n", collapse_binary(raw)));
    if let Some(scale) = setup.scale {
        let normalized = classify::normalize(raw, &scale);
        let category = classify::categorize(normalized, &setup.bins)
            .map_err(|e| CliError::invalid(e.to_string()))?;
        text.push_str(&format!("normalized: {}\ncategory: {category}\n", fmt_num(normalized)));
    }
    emit(out, &text)?;
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct RunManifest<'a> {
    command: &'a str,
    tool_version: &'static str,
    input: String,
    lexicon: String,
    outputs: Vec<String>,
    rule_config: RuleConfig,
    bins: [f64; 4],
    scale: NormalizationScale,
    scale_source: ScaleSource,
    seed: u64,
    workers: usize,
    train_fraction: Option<f64>,
    binary_tie_rule: &'static str,
    load_report: LoadReport,
    started_at_unix: u64,
    finished_at_unix: u64,
}

fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

/// `dir/stem.<suffix>` next to `path`.
fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map_or_else(|| "output".into(), |s| s.to_string_lossy().into_owned());
    path.with_file_name(format!("{stem}.{suffix}"))
}

fn category_histogram(scored: &[corpus::ScoredReview]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["category", "count"]).expect("in-memory write");
    for c in SentimentCategory::ALL {
        let n = scored.iter().filter(|s| s.category == c).count();
        w.write_record([c.as_str(), &n.to_string()]).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

fn cmd_run(args: &RunArgs, train_fraction: Option<f64>, command: &str, out: &mut impl Write) -> Result<i32, CliError> {
    let started = unix_now();
    let setup = engine_setup(&args.engine)?;
    let (reviews, load_report) = corpus::load_dataset(&args.input)?;
    let batch = run_batch(&reviews, &setup.ldd, &setup.rules, &setup.bins, setup.scale, args.workers);

    let mut outputs = vec![args.output.clone()];
    corpus::write_labeled(&args.output, &batch.scored)?;

    let scale_path = sibling(&args.output, "scale.json");
    let scale_json = serde_json::to_string_pretty(&batch.scale).expect("scale serializes") + "\n";
    write_file(&scale_path, scale_json.as_bytes())?;
    outputs.push(scale_path);

    if args.emit_plot_data {
        let p = sibling(&args.output, "categories.csv");
        write_file(&p, category_histogram(&batch.scored).as_bytes())?;
        outputs.push(p);
    }

    let mut notes = Vec::new();
    if let Some(fraction) = train_fraction {
        let split = corpus::split_dataset(&batch.scored, fraction, args.seed)?;
        if let Some(w) = &split.warning {
            notes.push(format!("warning: {w}"));
        }
        for (part, rows) in [("train", &split.train), ("test", &split.test)] {
            let p = sibling(&args.output, &format!("{part}.csv"));
            corpus::write_labeled(&p, rows)?;
            outputs.push(p);
        }
    }

    let manifest_path = sibling(&args.output, "manifest.json");
    outputs.push(manifest_path.clone());
    let manifest = RunManifest {
        command,
        tool_version: env!("CARGO_PKG_VERSION"),
        input: args.input.display().to_string(),
        lexicon: args
            .engine
            .lexicon
            .as_ref()
            .map_or_else(|| "<starter>".to_owned(), |p| p.display().to_string()),
        outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
        rule_config: setup.rules,
        bins: setup.bins.positive_edges(),
        scale: batch.scale,
        scale_source: batch.scale_source,
        seed: args.seed,
        workers: args.workers,
        train_fraction,
        binary_tie_rule: "raw score 0 is labeled positive",
        load_report,
        started_at_unix: started,
        finished_at_unix: unix_now(),
    };
    let manifest_json = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    write_file(&manifest_path, manifest_json.as_bytes())?;

    let mut text = format!(
        "scored {} reviews ({} read, {} empty dropped, {} duplicates dropped)\n",
        batch.scored.len(),
        load_report.rows_read,
        load_report.null_dropped,
        load_report.duplicates_dropped
    );
    for n in notes {
        text.push_str(&n);
        text.push('\n');
    }
    for p in &outputs {
        text.push_str(&format!("wrote {}\n", p.display()));
    }
    emit(out, &text)?;
    Ok(EXIT_OK)
}

/// Label order for a report: binary labels, the nine categories, or the
/// sorted set of whatever appears.
fn label_set(gold: &[String], pred: &[String]) -> Vec<String> {
    let values: std::collections::BTreeSet<&str> = gold.iter().chain(pred).map(String::as_str).collect();
    if values.iter().all(|v| v.parse::<BinaryLabel>().is_ok()) {
        return [BinaryLabel::Positive, BinaryLabel::Negative].map(|l| l.as_str().to_owned()).to_vec();
    }
    if values.iter().all(|v| v.parse::<SentimentCategory>().is_ok()) {
        return SentimentCategory::ALL.map(|c| c.as_str().to_owned()).to_vec();
    }
    values.into_iter().map(str::to_owned).collect()
}

fn cmd_eval(args: &EvalArgs, out: &mut impl Write) -> Result<i32, CliError> {
    let (gold_all, pred_all) = corpus::read_columns(&args.input, &args.gold_column, &args.pred_column)?;
    let rows = gold_all.len();
    let (gold, pred): (Vec<String>, Vec<String>) = gold_all
        .into_iter()
        .zip(pred_all)
        .filter(|(g, p)| !g.is_empty() && !p.is_empty())
        .unzip();
    let skipped = rows - gold.len();

    let labels = label_set(&gold, &pred);
    let matrix = confusion(&gold, &pred, &labels).map_err(|e| CliError::invalid(e.to_string()))?;
    let report = weighted_metrics(&matrix).map_err(|e| CliError::invalid(e.to_string()))?;

    let manifest_path = sibling(&args.input, "manifest.json");
    let run_manifest = fs::read_to_string(&manifest_path)
        .ok()
        .and_then(|s| serde_json::from_str::<serde_json::Value>(&s).ok())
        .map(|m| {
            json!({
                "rule_config": m["rule_config"],
                "bins": m["bins"],
                "scale": m["scale"],
                "seed": m["seed"],
                "binary_tie_rule": m["binary_tie_rule"],
            })
        });
    let report = report.with_config(json!({
        "input": args.input.display().to_string(),
        "gold_column": args.gold_column,
        "pred_column": args.pred_column,
        "skipped_rows": skipped,
        "run": run_manifest,
    }));

    let report_path = args.output.clone().unwrap_or_else(|| sibling(&args.input, "report.json"));
    write_file(&report_path, (report.to_json() + "\n").as_bytes())?;
    let mut text = report.render_table();
    if skipped > 0 {
        text.push_str(&format!("skipped {skipped} rows with an empty label\n"));
    }
    text.push_str(&format!("wrote {}\n", report_path.display()));
    if args.emit_plot_data {
        let p = sibling(&report_path, "per_class.csv");
        write_file(&p, report.per_class_csv().as_bytes())?;
        text.push_str(&format!("wrote {}\n", p.display()));
    }
    emit(out, &text)?;
    Ok(EXIT_OK)
}

fn cmd_validate_lexicon(path: &Path, out: &mut impl Write) -> Result<i32, CliError> {
    let doc = LexiconDocument::from_json(&read_text(path)?)
        .map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))?;
    let report = validate_ldd(&doc);
    emit(out, &report.to_string())?;
    Ok(if report.is_valid() { EXIT_OK } else { EXIT_INVALID })
}
