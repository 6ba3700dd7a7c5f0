//! The five RQA descriptors: REC, DET, MAXLINE, ENT, TREND.

use serde::{Deserialize, Serialize};

use crate::embed::EmbeddingConfig;
use crate::recurrence::{extract_diagonal_lines, RecurrencePairSet};

/// Descriptor values for one sequence and configuration. All derived from
/// exact integer counts in double precision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RqaMetrics {
    /// Percentage of recurrent pairs among all upper-triangle pairs.
    pub rec_percent: f64,
    /// Percentage of recurrent points on diagonal lines of length >= lmin.
    pub det_percent: f64,
    /// Longest diagonal line of length >= lmin, else 0.
    pub maxline: u32,
    /// Shannon entropy (bits) of the length distribution of lines >= lmin.
    pub entropy: f64,
    /// Slope of recurrence density against diagonal offset, in % per 1000
    /// epochs.
    pub trend: f64,
}

impl RqaMetrics {
    pub fn named_values(&self) -> [(&'static str, f64); 5] {
        [
            ("rec", self.rec_percent),
            ("det", self.det_percent),
            ("maxline", self.maxline as f64),
            ("ent", self.entropy),
            ("trend", self.trend),
        ]
    }
}

/// Header for the per-(text, config) metrics CSV.
pub const METRICS_CSV_HEADER: &str = "source_id,n,n_e,m,tau,lmin,rec,det,maxline,ent,trend";

/// One metrics CSV row matching [`METRICS_CSV_HEADER`].
pub fn metrics_csv_row(
    source_id: &str,
    n: usize,
    n_e: usize,
    config: &EmbeddingConfig,
    m: &RqaMetrics,
) -> String {
    format!(
        "{},{n},{n_e},{},{},{},{},{},{},{},{}",
        csv_field(source_id),
        config.dimension,
        config.delay,
        config.lmin,
        m.rec_percent,
        m.det_percent,
        m.maxline,
        m.entropy,
        m.trend
    )
}

/// Compute all five descriptors from a pair set.
pub fn compute_metrics(pairs: &RecurrencePairSet, config: &EmbeddingConfig) -> RqaMetrics {
    let n_e = pairs.effective_len();
    let n_pairs = pairs.len() as u64;
    let rec_percent = 100.0 * n_pairs as f64 / pairs.triangle_size() as f64;

    let lines = extract_diagonal_lines(pairs);
    let lmin = config.lmin as u32;
    let det_points: u64 = lines
        .iter()
        .filter(|l| l.length >= lmin)
        .map(|l| l.length as u64)
        .sum();
    let det_percent = if n_pairs == 0 {
        0.0
    } else {
        100.0 * det_points as f64 / n_pairs as f64
    };

    let maxline = lines
        .iter()
        .map(|l| l.length)
        .filter(|&l| l >= lmin)
        .max()
        .unwrap_or(0);

    let entropy = line_length_entropy(lines.iter().map(|l| l.length).filter(|&l| l >= lmin));

    let trend = trend_slope(pairs, n_e, config.trend_exclude_tail);

    RqaMetrics {
        rec_percent,
        det_percent,
        maxline,
        entropy,
        trend,
    }
}

/// Quote a CSV field when it contains separators.
pub(crate) fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Shannon entropy (base 2) of a multiset of line lengths. Zero when at most
/// one distinct length is present.
fn line_length_entropy(lengths: impl Iterator<Item = u32>) -> f64 {
    // BTreeMap keeps the summation order fixed so ENT is bit-reproducible
    let mut counts: std::collections::BTreeMap<u32, u64> = std::collections::BTreeMap::new();
    let mut total = 0u64;
    for l in lengths {
        *counts.entry(l).or_insert(0) += 1;
        total += 1;
    }
    if counts.len() <= 1 {
        return 0.0;
    }
    let total = total as f64;
    -counts
        .values()
        .map(|&c| {
            let p = c as f64 / total;
            p * p.log2()
        })
        .sum::<f64>()
}

/// Least-squares slope of per-offset recurrence density against offset,
/// scaled to % per 1000 epochs. Density at offset d is
/// 100 * count(d) / (N_e - d); the regression runs over d = 1..N_e-1
/// (optionally dropping the last 10% of offsets).
fn trend_slope(pairs: &RecurrencePairSet, n_e: usize, exclude_tail: bool) -> f64 {
    let max_d = n_e - 1;
    if max_d < 2 {
        return 0.0;
    }
    let mut counts = vec![0u64; max_d + 1];
    for &(i, j) in pairs.pairs() {
        counts[(j - i) as usize] += 1;
    }
    let upper = if exclude_tail {
        // drop the last 10% of offsets, keep at least 2
        ((max_d as f64 * 0.9).floor() as usize).max(2)
    } else {
        max_d
    };
    let n = upper as f64;
    let mut sum_d = 0.0;
    let mut sum_y = 0.0;
    let mut sum_dd = 0.0;
    let mut sum_dy = 0.0;
    for (d, &count) in counts.iter().enumerate().take(upper + 1).skip(1) {
        let density = 100.0 * count as f64 / (n_e - d) as f64;
        let df = d as f64;
        sum_d += df;
        sum_y += density;
        sum_dd += df * df;
        sum_dy += df * density;
    }
    let denom = n * sum_dd - sum_d * sum_d;
    if denom == 0.0 {
        return 0.0;
    }
    let slope = (n * sum_dy - sum_d * sum_y) / denom;
    slope * 1000.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::{normalize, Alphabet};
    use crate::embed::embed;
    use crate::recurrence::recurrence_set_grouped;

    fn metrics_of(text: &str) -> RqaMetrics {
        let a = Alphabet::preset("english-26").unwrap();
        let seq = normalize(text, &a, None, "t").unwrap();
        let cfg = EmbeddingConfig::default();
        let es = embed(&seq, &cfg).unwrap();
        compute_metrics(&recurrence_set_grouped(&es), &cfg)
    }

    #[test]
    fn abcabcab_hand_derived() {
        let m = metrics_of("abcabcab");
        assert!((m.rec_percent - 20.0).abs() < 1e-12);
        assert!((m.det_percent - 100.0).abs() < 1e-12);
        assert_eq!(m.maxline, 3);
        assert_eq!(m.entropy, 0.0);
        assert!(m.trend.abs() < 1e-12);
    }

    #[test]
    fn banana_hand_derived() {
        let m = metrics_of("banana");
        assert!((m.rec_percent - 100.0 / 6.0).abs() < 1e-12);
        assert_eq!(m.det_percent, 0.0);
        assert_eq!(m.maxline, 0);
        assert_eq!(m.entropy, 0.0);
    }

    #[test]
    fn constant_sequence_fully_recurrent() {
        let m = metrics_of("aaaaaa");
        assert_eq!(m.rec_percent, 100.0);
        // 6 recurrent points; the corner point (0,3) is an isolated
        // length-1 diagonal, the other 5 lie on lines >= lmin
        assert!((m.det_percent - 100.0 * 5.0 / 6.0).abs() < 1e-12);
        assert_eq!(m.maxline, 3);
    }

    #[test]
    fn entropy_two_length_classes() {
        // equal counts of two distinct lengths -> 1 bit
        let h = line_length_entropy([2u32, 2, 3, 3].into_iter());
        assert!((h - 1.0).abs() < 1e-12);
    }

    #[test]
    fn det_zero_without_pairs() {
        let m = metrics_of("abcdefgh");
        assert_eq!(m.rec_percent, 0.0);
        assert_eq!(m.det_percent, 0.0);
        assert_eq!(m.maxline, 0);
    }
}
