//! Delay embedding of symbol sequences into overlapping k-grams.

use serde::{Deserialize, Serialize};

use crate::alphabet::SymbolSequence;
use crate::error::Error;

/// Embedding parameters. Radius is fixed at 0: recurrence means exact
/// k-gram identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingConfig {
    /// Embedding dimension m (k-gram length).
    pub dimension: usize,
    /// Delay between successive elements of a row.
    pub delay: usize,
    /// Minimum diagonal line length counted as deterministic.
    pub lmin: usize,
    /// When set, the TREND regression drops the last 10% of offsets.
    pub trend_exclude_tail: bool,
}

impl Default for EmbeddingConfig {
    fn default() -> Self {
        Self {
            dimension: 3,
            delay: 1,
            lmin: 2,
            trend_exclude_tail: false,
        }
    }
}

impl EmbeddingConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if self.dimension < 1 {
            return Err(Error::InvalidConfig("dimension must be >= 1".into()));
        }
        if self.delay < 1 {
            return Err(Error::InvalidConfig("delay must be >= 1".into()));
        }
        if self.lmin < 2 {
            return Err(Error::InvalidConfig("lmin must be >= 2".into()));
        }
        Ok(())
    }
}

/// A sequence viewed as overlapping m-tuples spaced `delay` apart.
/// Rows are materialized on demand; no copy of the underlying codes is made.
#[derive(Debug, Clone)]
pub struct EmbeddedSeries<'a> {
    seq: &'a SymbolSequence,
    config: EmbeddingConfig,
    effective_len: usize,
}

impl<'a> EmbeddedSeries<'a> {
    pub fn seq(&self) -> &SymbolSequence {
        self.seq
    }

    pub fn config(&self) -> EmbeddingConfig {
        self.config
    }

    /// N_e = N - (m-1)*tau.
    pub fn effective_len(&self) -> usize {
        self.effective_len
    }

    /// Element t of row i: code at position i + t*tau.
    #[inline]
    pub fn row_element(&self, i: usize, t: usize) -> u8 {
        self.seq.codes()[i + t * self.config.delay]
    }

    /// Iterator over the elements of row i.
    pub fn row(&self, i: usize) -> impl Iterator<Item = u8> + '_ {
        (0..self.config.dimension).map(move |t| self.row_element(i, t))
    }

    #[inline]
    pub fn rows_equal(&self, i: usize, j: usize) -> bool {
        (0..self.config.dimension).all(|t| self.row_element(i, t) == self.row_element(j, t))
    }
}

/// Embed a sequence. Requires N >= (m-1)*tau + 2 so that at least two rows
/// exist.
pub fn embed<'a>(
    seq: &'a SymbolSequence,
    config: &EmbeddingConfig,
) -> Result<EmbeddedSeries<'a>, Error> {
    config.validate()?;
    let n = seq.len();
    let span = (config.dimension - 1) * config.delay;
    if n < span + 2 {
        return Err(Error::SequenceTooShort {
            n,
            m: config.dimension,
            tau: config.delay,
            min: span + 2,
        });
    }
    Ok(EmbeddedSeries {
        seq,
        config: *config,
        effective_len: n - span,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::{normalize, Alphabet};

    fn seq(text: &str) -> SymbolSequence {
        normalize(text, &Alphabet::preset("english-26").unwrap(), None, "t").unwrap()
    }

    fn rows_as_strings(es: &EmbeddedSeries) -> Vec<String> {
        (0..es.effective_len())
            .map(|i| {
                es.row(i)
                    .map(|c| es.seq().alphabet().symbol(c))
                    .collect::<String>()
            })
            .collect()
    }

    #[test]
    fn embed_m3_tau1() {
        let s = seq("abcab");
        let cfg = EmbeddingConfig::default();
        let es = embed(&s, &cfg).unwrap();
        assert_eq!(es.effective_len(), 3);
        assert_eq!(rows_as_strings(&es), ["abc", "bca", "cab"]);
    }

    #[test]
    fn embed_m2_tau2() {
        let s = seq("abcab");
        let cfg = EmbeddingConfig {
            dimension: 2,
            delay: 2,
            ..Default::default()
        };
        let es = embed(&s, &cfg).unwrap();
        assert_eq!(es.effective_len(), 3);
        assert_eq!(rows_as_strings(&es), ["ac", "ba", "cb"]);
    }

    #[test]
    fn embed_too_short() {
        let s = seq("ab");
        assert!(matches!(
            embed(&s, &EmbeddingConfig::default()),
            Err(Error::SequenceTooShort { .. })
        ));
    }

    #[test]
    fn bad_config_rejected() {
        let cfg = EmbeddingConfig {
            lmin: 1,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
    }
}
