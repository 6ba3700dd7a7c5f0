use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("alphabet needs at least 2 letters, got {0}")]
    AlphabetTooSmall(usize),
    #[error("duplicate letter '{0}' in alphabet")]
    DuplicateSymbol(char),
    #[error("unknown alphabet preset '{0}'")]
    UnknownPreset(String),
    #[error("bad transliteration rule at line {0}: '{1}' (expected source=target)")]
    BadTranslitRule(usize, String),
    #[error("symbol code {0} out of range for alphabet of size {1}")]
    CodeOutOfRange(u8, u8),
    #[error("no alphabet letters survived normalization")]
    EmptySequence,
    #[error("sequence of {n} letters too short to embed with m={m}, tau={tau} (need at least {min})")]
    SequenceTooShort { n: usize, m: usize, tau: usize, min: usize },
    #[error("invalid embedding config: {0}")]
    InvalidConfig(String),
    #[error("need at least {need} surrogates, got {got}")]
    TooFewSurrogates { need: usize, got: usize },
    #[error("samples have mismatched lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("sample too small: need at least {need} values, got {got}")]
    SampleTooSmall { need: usize, got: usize },
    #[error("sample has zero variance")]
    ZeroVariance,
    #[error("unknown group label '{0}'")]
    UnknownGroup(String),
    #[error("group '{label}' has {got} texts, need at least {need}")]
    GroupTooSmall { label: String, got: usize, need: usize },
    #[error("no readable input files")]
    NoInputs,
    #[error("io error: {0}")]
    Io(String),
}
