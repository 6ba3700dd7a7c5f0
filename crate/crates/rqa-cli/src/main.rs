//! `rqa` — batch recurrence analysis of text corpora.
//!
//! Exit status: 0 on success, 1 when some input files failed, 2 on fatal
//! errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rqa_core::alphabet::{Alphabet, TransliterationTable};
use rqa_core::corpus::{
    analyze_corpus, export_metrics_csv, export_rec_det_plane, render_plots, PlotOutcome, RunConfig,
};

mod config_file;

#[derive(Parser)]
#[command(name = "rqa", version, about = "Recurrence quantification analysis of letter sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a corpus of text files and write report.json,
    /// rec_det_plane.csv and optional recurrence plots.
    Analyze(AnalyzeArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Input text files (UTF-8, one text per file; the file stem is the
    /// source id).
    #[arg(required = true)]
    paths: Vec<PathBuf>,

    /// Alphabet preset (english-26, italian-21) or letter-list file.
    #[arg(long)]
    alphabet: Option<String>,

    /// Transliteration table file, one "source=target" rule per line.
    #[arg(long)]
    translit: Option<PathBuf>,

    /// Embedding dimension (k-gram length).
    #[arg(long, short = 'm')]
    m: Option<usize>,

    /// Embedding delay.
    #[arg(long)]
    tau: Option<usize>,

    /// Minimum diagonal line length for DET.
    #[arg(long)]
    lmin: Option<usize>,

    /// Number of shuffle surrogates per text.
    #[arg(long)]
    surrogates: Option<usize>,

    /// Master RNG seed.
    #[arg(long)]
    seed: Option<u64>,

    /// Config file: key=value lines plus "group.<label> = <glob>"
    /// assignments. CLI flags override file values.
    #[arg(long)]
    groups: Option<PathBuf>,

    /// Write one recurrence-plot PBM per text into <out>/plots/.
    #[arg(long)]
    plots: bool,

    /// Cross-check the grouped recurrence set against the naive oracle
    /// (texts up to 5,000 letters).
    #[arg(long)]
    verify_oracle: bool,

    /// Worker thread cap.
    #[arg(long)]
    workers: Option<usize>,

    /// Output directory.
    #[arg(long, required = true)]
    out: PathBuf,
}

fn build_run_config(args: &AnalyzeArgs) -> Result<RunConfig, String> {
    let file = match &args.groups {
        Some(path) => config_file::ConfigFile::load(path).map_err(|e| e.to_string())?,
        None => config_file::ConfigFile::default(),
    };

    let alphabet_spec = args
        .alphabet
        .clone()
        .or_else(|| file.get("alphabet").map(str::to_string))
        .ok_or("no alphabet given (use --alphabet or an `alphabet=` config line)")?;
    let alphabet = Alphabet::from_spec(&alphabet_spec).map_err(|e| e.to_string())?;

    let mut cfg = RunConfig::new(alphabet);
    macro_rules! setting {
        ($field:expr, $flag:expr, $key:literal) => {
            if let Some(v) = $flag.or_else(|| file.parse_value($key)) {
                $field = v;
            }
        };
    }
    setting!(cfg.embedding.dimension, args.m, "m");
    setting!(cfg.embedding.delay, args.tau, "tau");
    setting!(cfg.embedding.lmin, args.lmin, "lmin");
    setting!(cfg.n_surrogates, args.surrogates, "surrogates");
    setting!(cfg.seed, args.seed, "seed");

    let translit_path = args
        .translit
        .clone()
        .or_else(|| file.get("translit").map(PathBuf::from));
    if let Some(path) = translit_path {
        cfg.translit = Some(TransliterationTable::load(&path).map_err(|e| e.to_string())?);
    }

    cfg.groups = file.groups().to_vec();
    cfg.workers = args.workers;
    cfg.verify_oracle = args.verify_oracle;
    cfg.keep_pairsets = args.plots;
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn run_analyze(args: &AnalyzeArgs) -> Result<u8, String> {
    let cfg = build_run_config(args)?;
    let out = analyze_corpus(&args.paths, &cfg).map_err(|e| e.to_string())?;

    std::fs::create_dir_all(&args.out)
        .map_err(|e| format!("{}: {e}", args.out.display()))?;
    let report_path = args.out.join("report.json");
    std::fs::write(&report_path, out.report.to_json())
        .map_err(|e| format!("{}: {e}", report_path.display()))?;
    let csv_path = args.out.join("rec_det_plane.csv");
    std::fs::write(&csv_path, export_rec_det_plane(&out.report))
        .map_err(|e| format!("{}: {e}", csv_path.display()))?;
    let metrics_path = args.out.join("metrics.csv");
    std::fs::write(&metrics_path, export_metrics_csv(&out.report))
        .map_err(|e| format!("{}: {e}", metrics_path.display()))?;

    if args.plots {
        let outcomes = render_plots(&out.pairsets, &args.out.join("plots"), cfg.pixel_budget)
            .map_err(|e| e.to_string())?;
        for o in &outcomes {
            if let PlotOutcome::Skipped { source_id, pixels } = o {
                eprintln!(
                    "warning: plot for '{source_id}' skipped ({pixels} pixels over budget {})",
                    cfg.pixel_budget
                );
            }
        }
    }

    for e in &out.report.errors {
        eprintln!("error: {}: {}", e.source_id, e.error);
    }
    eprintln!(
        "analyzed {} text(s), {} error(s) -> {}",
        out.report.texts.len(),
        out.report.errors.len(),
        args.out.display()
    );
    Ok(if out.report.errors.is_empty() { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Analyze(args) => match run_analyze(args) {
            Ok(code) => ExitCode::from(code),
            Err(msg) => {
                eprintln!("fatal: {msg}");
                ExitCode::from(2)
            }
        },
    }
}
