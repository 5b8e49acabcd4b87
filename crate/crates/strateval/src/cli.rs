//! Command-line surface. The binary stays thin: every subcommand parses
//! arguments, merges them over the config file, and delegates to the
//! library.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::Config;
use crate::dataset::io as dataset_io;
use crate::error::{Error, Result};
use crate::metrics::Metric;
use crate::prob::{expected_metrics, score_tail_probability, TailQuery};
use crate::report::{
    build_report, compare, render_compare_csv, render_compare_json, render_compare_text,
    render_report_csv, render_report_json, render_report_table, CompareOptions, StratifiedReport,
};
use crate::sim::{sweep, write_sweep_csv, SimulationConfig};

#[derive(Debug, Parser)]
#[command(
    name = "strateval",
    version,
    about = "Agreement-stratified evaluation of binary classifiers under ground-truth uncertainty"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stratify a dataset by annotator agreement and score every system.
    Stratify(StratifyArgs),
    /// Print closed-form expected metrics for (p_d, m), optionally with
    /// a score-tail probability.
    Expect(ExpectArgs),
    /// Print P(Score >= r_c) for a labeler with agreement p_d.
    Tail(TailArgs),
    /// Monte Carlo sweep: simulated expert vs. random labeler.
    Simulate(SimulateArgs),
    /// Compare stratified reports: delta distributions, significance,
    /// highlights, and evidence warnings.
    Compare(CompareArgs),
}

#[derive(Debug, Args)]
pub struct StratifyArgs {
    /// Annotation file (delimited text or .json).
    #[arg(long)]
    pub annotations: PathBuf,
    /// Prediction file (delimited text or .json).
    #[arg(long)]
    pub predictions: PathBuf,
    /// TOML config file; flags below override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Treat this system id as a human rater (repeatable).
    #[arg(long = "human")]
    pub human_systems: Vec<String>,
    /// Field delimiter for delimited files.
    #[arg(long)]
    pub delimiter: Option<char>,
    /// Formats to emit (default from config, else a table).
    #[arg(long, value_enum)]
    pub format: Vec<OutputFormat>,
    /// Write outputs into this directory instead of stdout
    /// (report.table / report.csv / report.json).
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Derive a pseudo-rater by sampling one ground-truth vote per item
    /// with this seed, and score it as a human rater.
    #[arg(long)]
    pub pseudo_human_seed: Option<u64>,
    /// System id given to the derived pseudo-rater.
    #[arg(long, default_value = "H'")]
    pub pseudo_human_id: String,
}

#[derive(Debug, Args)]
pub struct ExpectArgs {
    /// Agreement probability p_d in (0, 1].
    #[arg(long)]
    pub pd: f64,
    /// Positive-class ratio m in [0, 1].
    #[arg(long)]
    pub m: f64,
    /// Sample count for an optional tail probability.
    #[arg(long)]
    pub n: Option<u64>,
    /// Correct-answer threshold for the optional tail probability.
    #[arg(long)]
    pub rc: Option<u64>,
}

#[derive(Debug, Args)]
pub struct TailArgs {
    /// Agreement probability p_d in (0, 1].
    #[arg(long)]
    pub pd: f64,
    /// Sample count.
    #[arg(long)]
    pub n: u64,
    /// Correct-answer threshold.
    #[arg(long)]
    pub rc: u64,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Agreement grid (repeatable).
    #[arg(long = "pd", default_values_t = vec![0.6, 0.8, 1.0])]
    pub p_d: Vec<f64>,
    /// Positive-ratio grid (repeatable).
    #[arg(long = "m", default_values_t = vec![0.1, 0.3, 0.5])]
    pub m: Vec<f64>,
    #[arg(long, default_value_t = 500)]
    pub items: usize,
    #[arg(long, default_value_t = 10)]
    pub annotators: usize,
    #[arg(long, default_value_t = 20)]
    pub runs: usize,
    /// TOML config file supplying the default seed.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// RNG seed; overrides the config value.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Stratified report JSON files produced by `stratify`.
    #[arg(required = true)]
    pub reports: Vec<PathBuf>,
    /// TOML config file supplying metric/threshold defaults.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Metric whose deltas are compared; overrides the config value.
    #[arg(long)]
    pub metric: Option<String>,
    /// Pair deltas by (model, task) across bins instead of Welch.
    #[arg(long)]
    pub paired: bool,
    /// Overall-metric threshold below which evidence warnings fire;
    /// overrides the config value.
    #[arg(long)]
    pub evidence_threshold: Option<f64>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    pub format: OutputFormat,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Execute a parsed command line.
pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Stratify(args) => run_stratify(&args),
        Command::Expect(args) => run_expect(&args),
        Command::Tail(args) => run_tail(&args),
        Command::Simulate(args) => run_simulate(&args),
        Command::Compare(args) => run_compare(&args),
    }
}

fn effective_config(args: &StratifyArgs) -> Result<Config> {
    let mut config = match &args.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    if !args.human_systems.is_empty() {
        config.human_systems = args.human_systems.clone();
    }
    if let Some(delimiter) = args.delimiter {
        config.delimiter = delimiter.to_string();
    }
    config.validate()?;
    Ok(config)
}

fn run_stratify(args: &StratifyArgs) -> Result<()> {
    let mut config = effective_config(args)?;
    let delimiter = config.delimiter_byte()?;
    let mut dataset = dataset_io::read_dataset(
        &args.annotations,
        &args.predictions,
        &config.label_mapping,
        delimiter,
    )?;

    if let Some(seed) = args.pseudo_human_seed {
        let pseudo = dataset.pseudo_rater(&args.pseudo_human_id, seed);
        dataset.predictions.extend(pseudo);
        if !config.human_systems.contains(&args.pseudo_human_id) {
            config.human_systems.push(args.pseudo_human_id.clone());
        }
    }

    let report = build_report(&dataset, &config)?;
    let formats = if args.format.is_empty() {
        config
            .output_formats
            .iter()
            .map(|name| parse_format(name))
            .collect::<Result<Vec<_>>>()?
    } else {
        args.format.clone()
    };
    emit_report(&report, &formats, args.out_dir.as_deref())
}

fn parse_format(name: &str) -> Result<OutputFormat> {
    match name.to_ascii_lowercase().as_str() {
        "table" => Ok(OutputFormat::Table),
        "csv" => Ok(OutputFormat::Csv),
        "json" => Ok(OutputFormat::Json),
        other => Err(Error::Config(format!("unknown output format `{other}`"))),
    }
}

fn emit_report(
    report: &StratifiedReport,
    formats: &[OutputFormat],
    out_dir: Option<&Path>,
) -> Result<()> {
    for format in formats {
        let (name, content) = match format {
            OutputFormat::Table => ("report.table", render_report_table(report)),
            OutputFormat::Csv => ("report.csv", render_report_csv(report)?),
            OutputFormat::Json => ("report.json", render_report_json(report)?),
        };
        match out_dir {
            Some(dir) => {
                fs::create_dir_all(dir)?;
                fs::write(dir.join(name), content)?;
            }
            None => print!("{content}"),
        }
    }
    Ok(())
}

fn run_expect(args: &ExpectArgs) -> Result<()> {
    let em = expected_metrics(args.pd, args.m)?;
    let show = |v: Option<f64>| v.map_or("NaN".to_string(), |v| format!("{v:.4}"));
    println!("expected metrics at p_d={}, m={}", args.pd, args.m);
    println!("  precision {}", show(em.precision));
    println!("  recall    {:.4}", em.recall);
    println!("  f1        {}", show(em.f1));
    println!("  accuracy  {:.4}", em.accuracy);
    match (args.n, args.rc) {
        (Some(n), Some(rc)) => {
            let p = score_tail_probability(&TailQuery::new(n, rc, args.pd)?)?;
            println!("  P(score >= {rc} of {n}) = {p:e}");
        }
        (None, None) => {}
        _ => return Err(Error::Domain("--n and --rc must be given together".into())),
    }
    Ok(())
}

fn run_tail(args: &TailArgs) -> Result<()> {
    let p = score_tail_probability(&TailQuery::new(args.n, args.rc, args.pd)?)?;
    println!("{p:e}");
    Ok(())
}

fn run_simulate(args: &SimulateArgs) -> Result<()> {
    let config = match &args.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let base = SimulationConfig {
        items_per_run: args.items,
        annotators_per_item: args.annotators,
        runs: args.runs,
        seed: args.seed.unwrap_or(config.seed),
        ..Default::default()
    };
    let points = sweep(&args.p_d, &args.m, &base)?;
    match &args.out {
        Some(path) => {
            let file = fs::File::create(path)?;
            write_sweep_csv(&points, file)?;
        }
        None => {
            let mut buf = Vec::new();
            write_sweep_csv(&points, &mut buf)?;
            print!("{}", String::from_utf8(buf).expect("csv output is utf-8"));
        }
    }
    Ok(())
}

fn run_compare(args: &CompareArgs) -> Result<()> {
    let config = match &args.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let mut loaded = Vec::new();
    for path in &args.reports {
        let text = fs::read_to_string(path)?;
        let report: StratifiedReport = serde_json::from_str(&text)?;
        loaded.push(report);
    }
    let refs: Vec<&StratifiedReport> = loaded.iter().collect();
    let options = CompareOptions {
        metric: match &args.metric {
            Some(name) => name.parse::<Metric>()?,
            None => config.evidence_metric,
        },
        paired: args.paired,
        evidence_threshold: args.evidence_threshold.unwrap_or(config.evidence_threshold),
    };
    let result = compare(&refs, &options)?;
    let content = match args.format {
        OutputFormat::Table => render_compare_text(&result),
        OutputFormat::Csv => render_compare_csv(&result)?,
        OutputFormat::Json => render_compare_json(&result)?,
    };
    match &args.out {
        Some(path) => fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}
