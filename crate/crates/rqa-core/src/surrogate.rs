//! Shuffle surrogates and significance against the shuffle distribution.
//!
//! All randomness flows from explicit seeds through ChaCha20, so identical
//! inputs reproduce identical results bit for bit, independent of platform
//! and evaluation order.

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::alphabet::SymbolSequence;
use crate::embed::{embed, EmbeddingConfig};
use crate::error::Error;
use crate::metrics::{compute_metrics, RqaMetrics};
use crate::recurrence::recurrence_set_grouped;
use crate::stats::{mean, std_dev};

/// Generator identity recorded in reports.
pub const RNG_ID: &str = "chacha20";

/// Deterministic 256-bit seed from a master seed and a label. Used to give
/// every text and every surrogate its own independent stream.
pub fn derive_seed(master: u64, label: &str) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(master.to_le_bytes());
    h.update([0u8]);
    h.update(label.as_bytes());
    h.finalize().into()
}

fn rng_for(master: u64, label: &str) -> ChaCha20Rng {
    ChaCha20Rng::from_seed(derive_seed(master, label))
}

/// Uniform index in 0..bound via rejection sampling.
fn uniform_index(rng: &mut ChaCha20Rng, bound: u64) -> u64 {
    let zone = u64::MAX - u64::MAX % bound;
    loop {
        let v = rng.next_u64();
        if v < zone {
            return v % bound;
        }
    }
}

fn fisher_yates(codes: &mut [u8], rng: &mut ChaCha20Rng) {
    for i in (1..codes.len()).rev() {
        let j = uniform_index(rng, (i + 1) as u64) as usize;
        codes.swap(i, j);
    }
}

/// Uniform random permutation of the sequence's codes. The letter histogram
/// is preserved exactly; the same seed reproduces the same permutation.
pub fn shuffle(seq: &SymbolSequence, seed: u64) -> SymbolSequence {
    let mut codes = seq.codes().to_vec();
    fisher_yates(&mut codes, &mut rng_for(seed, "shuffle"));
    seq.with_codes(codes)
}

/// Shuffle-distribution statistics for one sequence and configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurrogateSummary {
    pub n_surrogates: usize,
    pub seed: u64,
    pub rng: String,
    /// Per-surrogate descriptor values, indexed as in
    /// [`RqaMetrics::named_values`].
    pub values: MetricSamples,
    pub rec_mean: f64,
    pub rec_sd: f64,
    pub det_mean: f64,
    pub det_sd: f64,
}

/// One list of surrogate values per descriptor.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricSamples {
    pub rec: Vec<f64>,
    pub det: Vec<f64>,
    pub maxline: Vec<f64>,
    pub ent: Vec<f64>,
    pub trend: Vec<f64>,
}

impl MetricSamples {
    fn push(&mut self, m: &RqaMetrics) {
        self.rec.push(m.rec_percent);
        self.det.push(m.det_percent);
        self.maxline.push(m.maxline as f64);
        self.ent.push(m.entropy);
        self.trend.push(m.trend);
    }
}

/// Metrics of a single shuffled copy.
fn surrogate_metrics(
    seq: &SymbolSequence,
    config: &EmbeddingConfig,
    seed: u64,
) -> Result<RqaMetrics, Error> {
    let shuffled = shuffle(seq, seed);
    let es = embed(&shuffled, config)?;
    Ok(compute_metrics(&recurrence_set_grouped(&es), config))
}

/// Generate `n` shuffles (seeds derived from `seed` by index) and summarize
/// their metric distributions. Sample standard deviation, n-1 denominator.
pub fn surrogate_distribution(
    seq: &SymbolSequence,
    config: &EmbeddingConfig,
    n: usize,
    seed: u64,
) -> Result<SurrogateSummary, Error> {
    if n < 2 {
        return Err(Error::TooFewSurrogates { need: 2, got: n });
    }
    embed(seq, config)?; // fail early on short input

    // derive all sub-seeds up front so evaluation order cannot matter
    let mut seed_rng = rng_for(seed, "surrogate-seeds");
    let sub_seeds: Vec<u64> = (0..n).map(|_| seed_rng.next_u64()).collect();

    let mut values = MetricSamples::default();
    for &s in &sub_seeds {
        values.push(&surrogate_metrics(seq, config, s)?);
    }
    Ok(SurrogateSummary {
        n_surrogates: n,
        seed,
        rng: RNG_ID.to_string(),
        rec_mean: mean(&values.rec),
        rec_sd: std_dev(&values.rec),
        det_mean: mean(&values.det),
        det_sd: std_dev(&values.det),
        values,
    })
}

/// Departure of one observed metric from its surrogate distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSignificance {
    pub observed: f64,
    pub surrogate_mean: f64,
    pub surrogate_sd: f64,
    /// `None` when the surrogate sd is 0.
    pub z: Option<f64>,
    /// One-sided empirical p: (1 + #{surrogates >= observed}) / (n + 1).
    pub empirical_p: f64,
    /// True when the observed value lies above the surrogate mean.
    pub above: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignificanceReport {
    pub rec: MetricSignificance,
    pub det: MetricSignificance,
    pub maxline: MetricSignificance,
    pub ent: MetricSignificance,
    pub trend: MetricSignificance,
}

fn metric_significance(observed: f64, samples: &[f64]) -> MetricSignificance {
    let m = mean(samples);
    let sd = std_dev(samples);
    let n = samples.len();
    let k = samples.iter().filter(|&&v| v >= observed).count();
    MetricSignificance {
        observed,
        surrogate_mean: m,
        surrogate_sd: sd,
        z: if sd > 0.0 { Some((observed - m) / sd) } else { None },
        empirical_p: (1 + k) as f64 / (n + 1) as f64,
        above: observed > m,
    }
}

/// Per-metric z-scores and one-sided empirical p (structure = observed above
/// the surrogate distribution).
pub fn significance(observed: &RqaMetrics, summary: &SurrogateSummary) -> SignificanceReport {
    SignificanceReport {
        rec: metric_significance(observed.rec_percent, &summary.values.rec),
        det: metric_significance(observed.det_percent, &summary.values.det),
        maxline: metric_significance(observed.maxline as f64, &summary.values.maxline),
        ent: metric_significance(observed.entropy, &summary.values.ent),
        trend: metric_significance(observed.trend, &summary.values.trend),
    }
}
