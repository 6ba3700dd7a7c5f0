//! Batch analysis: run the full pipeline over a set of text files, compare
//! groups and export reports.
//!
//! Determinism contract: identical (inputs, config, seed) produce identical
//! reports, CSVs and images across runs and across worker counts. Per-text
//! seeds are derived from the master seed and the source id, and results are
//! aggregated in source-id order.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::alphabet::{normalize, Alphabet, SymbolSequence, TransliterationTable};
use crate::embed::{embed, EmbeddingConfig};
use crate::error::Error;
use crate::metrics::{compute_metrics, csv_field, RqaMetrics};
use crate::plot::recurrence_plot_bitmap;
use crate::recurrence::{recurrence_set_grouped, recurrence_set_naive, RecurrencePairSet};
use crate::stats::{f_test, mean, pearson, std_dev, welch_t, CorrelationResult, FTestResult, TTestResult};
use crate::surrogate::{
    derive_seed, significance, surrogate_distribution, SignificanceReport, RNG_ID,
};

pub const SCHEMA_VERSION: u32 = 1;

/// Naive-oracle verification is refused above this many letters.
pub const ORACLE_CAP_LETTERS: usize = 5_000;

/// Plots larger than this many pixels (N_e^2) are skipped.
pub const DEFAULT_PIXEL_BUDGET: u64 = 4_000_000;

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub alphabet: Alphabet,
    pub translit: Option<TransliterationTable>,
    pub embedding: EmbeddingConfig,
    pub n_surrogates: usize,
    pub seed: u64,
    /// (label, filename glob) assignments; first match wins.
    pub groups: Vec<(String, String)>,
    /// Worker thread cap; `None` uses the rayon default.
    pub workers: Option<usize>,
    /// Cross-check the grouped pair set against the naive oracle
    /// (texts up to [`ORACLE_CAP_LETTERS`] letters only).
    pub verify_oracle: bool,
    pub keep_pairsets: bool,
    pub pixel_budget: u64,
}

impl RunConfig {
    pub fn new(alphabet: Alphabet) -> Self {
        Self {
            alphabet,
            translit: None,
            embedding: EmbeddingConfig::default(),
            n_surrogates: 100,
            seed: 0,
            groups: Vec::new(),
            workers: None,
            verify_oracle: false,
            keep_pairsets: false,
            pixel_budget: DEFAULT_PIXEL_BUDGET,
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        self.embedding.validate()?;
        if self.n_surrogates < 2 {
            return Err(Error::TooFewSurrogates {
                need: 2,
                got: self.n_surrogates,
            });
        }
        Ok(())
    }
}

/// Digest of the surrogate distribution kept in the per-text report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurrogateDigest {
    pub n_surrogates: usize,
    pub seed: u64,
    pub rng: String,
    pub rec_mean: f64,
    pub rec_sd: f64,
    pub det_mean: f64,
    pub det_sd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TextRecord {
    pub source_id: String,
    pub group: Option<String>,
    pub n: usize,
    pub n_e: usize,
    pub metrics: RqaMetrics,
    pub surrogates: SurrogateDigest,
    pub significance: SignificanceReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileError {
    pub source_id: String,
    pub path: String,
    pub error: String,
}

/// Group means and test results for one descriptor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricComparison {
    pub metric: String,
    pub mean_a: f64,
    pub sd_a: f64,
    pub mean_b: f64,
    pub sd_b: f64,
    pub welch: TTestResult,
    /// Absent when a group variance is zero.
    pub f: Option<FTestResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupComparison {
    pub group_a: String,
    pub group_b: String,
    pub n_a: usize,
    pub n_b: usize,
    pub rec: MetricComparison,
    pub det: MetricComparison,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportConfig {
    pub alphabet: String,
    pub dimension: usize,
    pub delay: usize,
    pub lmin: usize,
    pub n_surrogates: usize,
    pub seed: u64,
    pub rng: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusReport {
    pub schema_version: u32,
    pub config: ReportConfig,
    pub texts: Vec<TextRecord>,
    pub errors: Vec<FileError>,
    /// REC vs DET over all analyzed texts; absent below 3 texts or when a
    /// descriptor is constant.
    pub rec_det_correlation: Option<CorrelationResult>,
    pub group_comparisons: Vec<GroupComparison>,
}

impl CorpusReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Report plus the retained pair sets for plot rendering.
#[derive(Debug)]
pub struct AnalysisOutput {
    pub report: CorpusReport,
    /// (source_id, pairs), present when `keep_pairsets` was set. Sorted by
    /// source id.
    pub pairsets: Vec<(String, RecurrencePairSet)>,
}

/// Minimal filename glob: `*` matches any run, `?` one character.
fn glob_match(pattern: &str, name: &str) -> bool {
    fn inner(p: &[char], s: &[char]) -> bool {
        match p.split_first() {
            None => s.is_empty(),
            Some(('*', rest)) => {
                (0..=s.len()).any(|k| inner(rest, &s[k..]))
            }
            Some(('?', rest)) => !s.is_empty() && inner(rest, &s[1..]),
            Some((&c, rest)) => s.first() == Some(&c) && inner(rest, &s[1..]),
        }
    }
    inner(
        &pattern.chars().collect::<Vec<_>>(),
        &name.chars().collect::<Vec<_>>(),
    )
}

fn assign_group(groups: &[(String, String)], path: &Path, source_id: &str) -> Option<String> {
    let file_name = path.file_name().and_then(|s| s.to_str()).unwrap_or("");
    groups
        .iter()
        .find(|(_, pat)| glob_match(pat, source_id) || glob_match(pat, file_name))
        .map(|(label, _)| label.clone())
}

/// Stable u64 text seed from the master seed and source id.
fn text_seed(master: u64, source_id: &str) -> u64 {
    let bytes = derive_seed(master, source_id);
    u64::from_le_bytes(bytes[..8].try_into().unwrap())
}

fn analyze_one(
    path: &Path,
    source_id: &str,
    config: &RunConfig,
) -> Result<(TextRecord, Option<RecurrencePairSet>), Error> {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let seq: SymbolSequence = normalize(&raw, &config.alphabet, config.translit.as_ref(), source_id)?;
    let es = embed(&seq, &config.embedding)?;
    let pairs = recurrence_set_grouped(&es);
    if config.verify_oracle {
        if seq.len() > ORACLE_CAP_LETTERS {
            return Err(Error::Io(format!(
                "oracle verification capped at {ORACLE_CAP_LETTERS} letters, text has {}",
                seq.len()
            )));
        }
        assert_eq!(
            pairs,
            recurrence_set_naive(&es),
            "grouped pair set diverged from naive oracle on {source_id}"
        );
    }
    let metrics = compute_metrics(&pairs, &config.embedding);
    let seed = text_seed(config.seed, source_id);
    let summary = surrogate_distribution(&seq, &config.embedding, config.n_surrogates, seed)?;
    let sig = significance(&metrics, &summary);
    let record = TextRecord {
        source_id: source_id.to_string(),
        group: assign_group(&config.groups, path, source_id),
        n: seq.len(),
        n_e: es.effective_len(),
        metrics,
        surrogates: SurrogateDigest {
            n_surrogates: summary.n_surrogates,
            seed: summary.seed,
            rng: summary.rng.clone(),
            rec_mean: summary.rec_mean,
            rec_sd: summary.rec_sd,
            det_mean: summary.det_mean,
            det_sd: summary.det_sd,
        },
        significance: sig,
    };
    Ok((record, config.keep_pairsets.then_some(pairs)))
}

/// File stem as source id; duplicate stems get a numeric suffix so every
/// input appears exactly once.
fn source_ids(paths: &[PathBuf]) -> Vec<String> {
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    paths
        .iter()
        .map(|p| {
            let stem = p
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or("unnamed")
                .to_string();
            let n = seen.entry(stem.clone()).or_insert(0);
            *n += 1;
            if *n == 1 {
                stem
            } else {
                format!("{stem}-{n}")
            }
        })
        .collect()
}

/// Run the full pipeline over every input file. Files that fail
/// normalization or embedding become error records; the batch continues.
pub fn analyze_corpus(paths: &[PathBuf], config: &RunConfig) -> Result<AnalysisOutput, Error> {
    config.validate()?;
    if paths.is_empty() {
        return Err(Error::NoInputs);
    }
    let ids = source_ids(paths);
    let jobs: Vec<(usize, &PathBuf, &String)> = paths
        .iter()
        .zip(&ids)
        .enumerate()
        .map(|(k, (p, id))| (k, p, id))
        .collect();

    let run = || {
        jobs.par_iter()
            .map(|(_, path, id)| (id.to_string(), path, analyze_one(path, id, config)))
            .collect::<Vec<_>>()
    };
    let results = match config.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::Io(e.to_string()))?
            .install(run),
        None => run(),
    };

    let mut texts = Vec::new();
    let mut errors = Vec::new();
    let mut pairsets = Vec::new();
    for (id, path, res) in results {
        match res {
            Ok((record, pairs)) => {
                if let Some(p) = pairs {
                    pairsets.push((id, p));
                }
                texts.push(record);
            }
            Err(e) => errors.push(FileError {
                source_id: id,
                path: path.display().to_string(),
                error: e.to_string(),
            }),
        }
    }
    texts.sort_by(|a, b| a.source_id.cmp(&b.source_id));
    errors.sort_by(|a, b| a.source_id.cmp(&b.source_id));
    pairsets.sort_by(|a, b| a.0.cmp(&b.0));
    let rec: Vec<f64> = texts.iter().map(|t| t.metrics.rec_percent).collect();
    let det: Vec<f64> = texts.iter().map(|t| t.metrics.det_percent).collect();
    let rec_det_correlation = if texts.len() >= 3 {
        pearson(&rec, &det).ok()
    } else {
        None
    };

    let mut report = CorpusReport {
        schema_version: SCHEMA_VERSION,
        config: ReportConfig {
            alphabet: config.alphabet.name().to_string(),
            dimension: config.embedding.dimension,
            delay: config.embedding.delay,
            lmin: config.embedding.lmin,
            n_surrogates: config.n_surrogates,
            seed: config.seed,
            rng: RNG_ID.to_string(),
        },
        texts,
        errors,
        rec_det_correlation,
        group_comparisons: Vec::new(),
    };
    report.group_comparisons = all_group_comparisons(&report);
    Ok(AnalysisOutput { report, pairsets })
}

fn metric_comparison(name: &str, a: &[f64], b: &[f64]) -> Result<MetricComparison, Error> {
    Ok(MetricComparison {
        metric: name.to_string(),
        mean_a: mean(a),
        sd_a: std_dev(a),
        mean_b: mean(b),
        sd_b: std_dev(b),
        welch: welch_t(a, b)?,
        f: f_test(a, b).ok(),
    })
}

/// Compare two labeled groups on REC and DET.
pub fn compare_groups(
    report: &CorpusReport,
    group_a: &str,
    group_b: &str,
) -> Result<GroupComparison, Error> {
    let collect = |label: &str| -> Vec<&TextRecord> {
        report
            .texts
            .iter()
            .filter(|t| t.group.as_deref() == Some(label))
            .collect()
    };
    let ta = collect(group_a);
    let tb = collect(group_b);
    for (label, texts) in [(group_a, &ta), (group_b, &tb)] {
        if texts.is_empty() {
            return Err(Error::UnknownGroup(label.to_string()));
        }
        if texts.len() < 2 {
            return Err(Error::GroupTooSmall {
                label: label.to_string(),
                got: texts.len(),
                need: 2,
            });
        }
    }
    let rec_a: Vec<f64> = ta.iter().map(|t| t.metrics.rec_percent).collect();
    let rec_b: Vec<f64> = tb.iter().map(|t| t.metrics.rec_percent).collect();
    let det_a: Vec<f64> = ta.iter().map(|t| t.metrics.det_percent).collect();
    let det_b: Vec<f64> = tb.iter().map(|t| t.metrics.det_percent).collect();
    Ok(GroupComparison {
        group_a: group_a.to_string(),
        group_b: group_b.to_string(),
        n_a: ta.len(),
        n_b: tb.len(),
        rec: metric_comparison("rec", &rec_a, &rec_b)?,
        det: metric_comparison("det", &det_a, &det_b)?,
    })
}

/// All pairwise comparisons among groups with at least 2 texts, in label
/// order.
fn all_group_comparisons(report: &CorpusReport) -> Vec<GroupComparison> {
    let mut labels: Vec<String> = report
        .texts
        .iter()
        .filter_map(|t| t.group.clone())
        .collect();
    labels.sort();
    labels.dedup();
    let mut out = Vec::new();
    for (i, a) in labels.iter().enumerate() {
        for b in &labels[i + 1..] {
            if let Ok(c) = compare_groups(report, a, b) {
                out.push(c);
            }
        }
    }
    out
}

/// REC-DET plane CSV: one row per text, sorted by source id.
pub fn export_rec_det_plane(report: &CorpusReport) -> String {
    let mut out = String::new();
    out.push_str("source_id,group,rec,det,maxline,ent,trend,z_rec,z_det,p_rec,p_det\n");
    for t in &report.texts {
        let z = |v: Option<f64>| v.map(|z| z.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            csv_field(&t.source_id),
            csv_field(t.group.as_deref().unwrap_or("")),
            t.metrics.rec_percent,
            t.metrics.det_percent,
            t.metrics.maxline,
            t.metrics.entropy,
            t.metrics.trend,
            z(t.significance.rec.z),
            z(t.significance.det.z),
            t.significance.rec.empirical_p,
            t.significance.det.empirical_p,
        ));
    }
    out
}

/// Per-(text, config) metrics CSV over all analyzed texts.
pub fn export_metrics_csv(report: &CorpusReport) -> String {
    let config = EmbeddingConfig {
        dimension: report.config.dimension,
        delay: report.config.delay,
        lmin: report.config.lmin,
        trend_exclude_tail: false,
    };
    let mut out = String::from(crate::metrics::METRICS_CSV_HEADER);
    out.push('\n');
    for t in &report.texts {
        out.push_str(&crate::metrics::metrics_csv_row(
            &t.source_id,
            t.n,
            t.n_e,
            &config,
            &t.metrics,
        ));
        out.push('\n');
    }
    out
}

/// Outcome of one plot request.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlotOutcome {
    Written(PathBuf),
    /// Image would exceed the pixel budget; metrics are unaffected.
    Skipped { source_id: String, pixels: u64 },
}

/// Write one P1 PBM per retained pair set into `dir`.
pub fn render_plots(
    pairsets: &[(String, RecurrencePairSet)],
    dir: &Path,
    pixel_budget: u64,
) -> Result<Vec<PlotOutcome>, Error> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let mut outcomes = Vec::new();
    for (id, pairs) in pairsets {
        let n = pairs.effective_len() as u64;
        if n * n > pixel_budget {
            outcomes.push(PlotOutcome::Skipped {
                source_id: id.clone(),
                pixels: n * n,
            });
            continue;
        }
        let path = dir.join(format!("{id}.pbm"));
        let bmp = recurrence_plot_bitmap(pairs);
        let mut file = std::fs::File::create(&path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        bmp.write_pbm(&mut file)
            .and_then(|_| file.flush())
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        outcomes.push(PlotOutcome::Written(path));
    }
    Ok(outcomes)
}
