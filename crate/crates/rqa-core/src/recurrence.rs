//! Exact-match recurrence detection and diagonal line extraction.

use std::collections::HashMap;

use crate::embed::EmbeddedSeries;

/// Sparse set of recurrent index pairs (i, j) with i < j, over the upper
/// triangle of the recurrence matrix. The line of identity is excluded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrencePairSet {
    pairs: Vec<(u32, u32)>,
    effective_len: usize,
}

impl RecurrencePairSet {
    fn new(mut pairs: Vec<(u32, u32)>, effective_len: usize) -> Self {
        pairs.sort_unstable();
        pairs.dedup();
        Self {
            pairs,
            effective_len,
        }
    }

    /// Sorted (i, j) pairs, i < j.
    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn effective_len(&self) -> usize {
        self.effective_len
    }

    /// Number of distinct pairs in the upper triangle, the REC denominator.
    pub fn triangle_size(&self) -> u64 {
        let n = self.effective_len as u64;
        n.saturating_sub(1) * n / 2
    }
}

/// Direct O(N_e^2) comparison of all row pairs. Verification oracle for the
/// grouped fast path.
pub fn recurrence_set_naive(es: &EmbeddedSeries) -> RecurrencePairSet {
    let n = es.effective_len();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if es.rows_equal(i, j) {
                pairs.push((i as u32, j as u32));
            }
        }
    }
    RecurrencePairSet::new(pairs, n)
}

/// Key for one embedded row. k-grams short enough to pack into a u64 use the
/// packed form; longer ones fall back to the byte string.
#[derive(Hash, PartialEq, Eq)]
enum RowKey {
    Packed(u64),
    Wide(Vec<u8>),
}

fn row_key(es: &EmbeddedSeries, i: usize) -> RowKey {
    let m = es.config().dimension;
    if m <= 8 {
        let mut k = 0u64;
        for t in 0..m {
            k = (k << 8) | es.row_element(i, t) as u64;
        }
        RowKey::Packed(k)
    } else {
        RowKey::Wide((0..m).map(|t| es.row_element(i, t)).collect())
    }
}

/// Group row indices by k-gram content and emit all within-group pairs.
/// Output is identical to [`recurrence_set_naive`]; time is
/// O(N_e + |pairs|) instead of O(N_e^2).
pub fn recurrence_set_grouped(es: &EmbeddedSeries) -> RecurrencePairSet {
    let n = es.effective_len();
    let mut groups: HashMap<RowKey, Vec<u32>> = HashMap::new();
    for i in 0..n {
        groups.entry(row_key(es, i)).or_default().push(i as u32);
    }
    let n_pairs: usize = groups
        .values()
        .map(|g| g.len() * (g.len() - 1) / 2)
        .sum();
    let mut pairs = Vec::with_capacity(n_pairs);
    for group in groups.values() {
        // indices were inserted in scan order, so each group is sorted
        for (a, &i) in group.iter().enumerate() {
            for &j in &group[a + 1..] {
                pairs.push((i, j));
            }
        }
    }
    RecurrencePairSet::new(pairs, n)
}

/// A maximal run of consecutive recurrent points along one diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiagonalLine {
    /// Offset d = j - i of the diagonal.
    pub offset: u32,
    /// Index i at which the run starts.
    pub start: u32,
    /// Number of consecutive recurrent points.
    pub length: u32,
}

/// Split the pair set into maximal diagonal runs. Every recurrent point
/// belongs to exactly one line (isolated points are lines of length 1).
pub fn extract_diagonal_lines(pairs: &RecurrencePairSet) -> Vec<DiagonalLine> {
    // bucket by offset, preserving sorted i within each bucket
    let mut by_offset: HashMap<u32, Vec<u32>> = HashMap::new();
    for &(i, j) in pairs.pairs() {
        by_offset.entry(j - i).or_default().push(i);
    }
    let mut offsets: Vec<u32> = by_offset.keys().copied().collect();
    offsets.sort_unstable();
    let mut lines = Vec::new();
    for d in offsets {
        let starts = &by_offset[&d];
        let mut run_start = starts[0];
        let mut run_len = 1u32;
        for &i in &starts[1..] {
            if i == run_start + run_len {
                run_len += 1;
            } else {
                lines.push(DiagonalLine {
                    offset: d,
                    start: run_start,
                    length: run_len,
                });
                run_start = i;
                run_len = 1;
            }
        }
        lines.push(DiagonalLine {
            offset: d,
            start: run_start,
            length: run_len,
        });
    }
    lines
}
