//! Recurrence quantification analysis for letter sequences.
//!
//! A text is normalized into a continuous stream of symbol codes, embedded
//! as overlapping k-grams, and scanned for exact repeats. The recurrence
//! structure is summarized by five descriptors (REC, DET, MAXLINE, ENT,
//! TREND), tested against shuffle surrogates, and compared across corpora
//! with standard statistics.
//!
//! ```
//! use rqa_core::alphabet::{normalize, Alphabet};
//! use rqa_core::embed::{embed, EmbeddingConfig};
//! use rqa_core::metrics::compute_metrics;
//! use rqa_core::recurrence::recurrence_set_grouped;
//!
//! let alphabet = Alphabet::preset("english-26").unwrap();
//! let seq = normalize("abcabcab", &alphabet, None, "demo").unwrap();
//! let config = EmbeddingConfig::default();
//! let embedded = embed(&seq, &config).unwrap();
//! let pairs = recurrence_set_grouped(&embedded);
//! let m = compute_metrics(&pairs, &config);
//! assert_eq!(m.rec_percent, 20.0);
//! assert_eq!(m.det_percent, 100.0);
//! ```

pub mod alphabet;
pub mod corpus;
pub mod embed;
mod error;
pub mod metrics;
pub mod plot;
pub mod recurrence;
pub mod stats;
pub mod surrogate;

pub use error::Error;
