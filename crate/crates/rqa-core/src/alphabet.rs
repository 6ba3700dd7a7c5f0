//! Alphabets, transliteration tables and text normalization.
//!
//! Raw text is folded into a continuous stream of symbol codes: lowercased,
//! diacritics stripped to their base letters, transliteration rules applied,
//! and every character that does not map into the alphabet dropped.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// An ordered set of distinct lowercase letters. Codes are assigned by
/// position in the list, 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alphabet {
    name: String,
    symbols: Vec<char>,
}

impl Alphabet {
    /// Build an alphabet from an explicit letter list.
    pub fn new(name: impl Into<String>, symbols: &[char]) -> Result<Self, Error> {
        if symbols.len() < 2 {
            return Err(Error::AlphabetTooSmall(symbols.len()));
        }
        let mut seen = std::collections::HashSet::new();
        for &c in symbols {
            if !seen.insert(c) {
                return Err(Error::DuplicateSymbol(c));
            }
        }
        Ok(Self {
            name: name.into(),
            symbols: symbols.to_vec(),
        })
    }

    /// Resolve a named preset: `english-26` or `italian-21`.
    ///
    /// The Italian standard alphabet is the Latin alphabet without
    /// j, k, w, x and y.
    pub fn preset(name: &str) -> Result<Self, Error> {
        match name {
            "english-26" => Self::new(name, &('a'..='z').collect::<Vec<_>>()),
            "italian-21" => {
                let letters: Vec<char> = ('a'..='z')
                    .filter(|c| !matches!(c, 'j' | 'k' | 'w' | 'x' | 'y'))
                    .collect();
                Self::new(name, &letters)
            }
            other => Err(Error::UnknownPreset(other.to_string())),
        }
    }

    /// Parse either a preset name or a path to a letter-list file
    /// (one line of letters, or one letter per line).
    pub fn from_spec(spec: &str) -> Result<Self, Error> {
        match Self::preset(spec) {
            Ok(a) => Ok(a),
            Err(Error::UnknownPreset(_)) => {
                let text = std::fs::read_to_string(spec)
                    .map_err(|e| Error::Io(format!("{spec}: {e}")))?;
                let letters: Vec<char> = text.chars().filter(|c| c.is_alphabetic()).collect();
                let stem = std::path::Path::new(spec)
                    .file_stem()
                    .and_then(|s| s.to_str())
                    .unwrap_or(spec);
                Self::new(stem, &letters)
            }
            Err(e) => Err(e),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false // invariant: size >= 2
    }

    /// Code of a letter, if it belongs to the alphabet.
    pub fn code(&self, c: char) -> Option<u8> {
        self.symbols.iter().position(|&s| s == c).map(|i| i as u8)
    }

    /// Letter for a code. Panics if the code is out of range.
    pub fn symbol(&self, code: u8) -> char {
        self.symbols[code as usize]
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }
}

/// Ordered grapheme rewrite rules, applied longest-source-first in a single
/// left-to-right pass. Targets must expand into letters of the target
/// alphabet (checked at normalization time, when the alphabet is known).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransliterationTable {
    rules: Vec<(String, String)>,
}

impl TransliterationTable {
    pub fn new(rules: Vec<(String, String)>) -> Self {
        let mut rules = rules;
        // longest source first so e.g. "ch" wins over "c"
        rules.sort_by_key(|r| std::cmp::Reverse(r.0.chars().count()));
        Self { rules }
    }

    /// Parse a plain-text table: one `source=target` rule per line.
    /// Blank lines and lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self, Error> {
        let mut rules = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((src, dst)) = line.split_once('=') else {
                return Err(Error::BadTranslitRule(lineno + 1, line.to_string()));
            };
            let src = src.trim().to_lowercase();
            if src.is_empty() {
                return Err(Error::BadTranslitRule(lineno + 1, line.to_string()));
            }
            rules.push((src, dst.trim().to_lowercase()));
        }
        Ok(Self::new(rules))
    }

    pub fn load(path: &std::path::Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Single left-to-right pass over `text`; at each position the first
    /// (longest) matching source is replaced and the cursor moves past it,
    /// so targets are never re-expanded.
    pub fn apply(&self, text: &str) -> String {
        if self.rules.is_empty() {
            return text.to_string();
        }
        let chars: Vec<char> = text.chars().collect();
        let mut out = String::with_capacity(text.len());
        let mut i = 0;
        'outer: while i < chars.len() {
            for (src, dst) in &self.rules {
                let src_chars: Vec<char> = src.chars().collect();
                if chars[i..].starts_with(&src_chars) {
                    out.push_str(dst);
                    i += src_chars.len();
                    continue 'outer;
                }
            }
            out.push(chars[i]);
            i += 1;
        }
        out
    }
}

/// A normalized stream of symbol codes with no whitespace or punctuation
/// artifacts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolSequence {
    codes: Vec<u8>,
    alphabet: Alphabet,
    source_id: String,
}

impl SymbolSequence {
    /// Construct directly from codes. Every code must be in range.
    pub fn from_codes(
        codes: Vec<u8>,
        alphabet: Alphabet,
        source_id: impl Into<String>,
    ) -> Result<Self, Error> {
        let size = alphabet.len() as u8;
        if let Some(&bad) = codes.iter().find(|&&c| c >= size) {
            return Err(Error::CodeOutOfRange(bad, size));
        }
        if codes.is_empty() {
            return Err(Error::EmptySequence);
        }
        Ok(Self {
            codes,
            alphabet,
            source_id: source_id.into(),
        })
    }

    pub fn codes(&self) -> &[u8] {
        &self.codes
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn source_id(&self) -> &str {
        &self.source_id
    }

    /// Render the sequence back to letters.
    pub fn to_letters(&self) -> String {
        self.codes.iter().map(|&c| self.alphabet.symbol(c)).collect()
    }

    /// Replace the codes, keeping alphabet and source id. Lengths must match;
    /// used by the shuffle surrogate generator.
    pub(crate) fn with_codes(&self, codes: Vec<u8>) -> Self {
        debug_assert_eq!(codes.len(), self.codes.len());
        Self {
            codes,
            alphabet: self.alphabet.clone(),
            source_id: self.source_id.clone(),
        }
    }
}

impl fmt::Display for SymbolSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({} letters)", self.source_id, self.codes.len())
    }
}

/// Strip combining diacritical marks, mapping e.g. `é` to `e`.
///
/// NFD decomposition is approximated by a table of the Latin-1 and
/// Latin Extended-A precomposed letters, which covers the European
/// orthographies this tool targets.
fn fold_diacritic(c: char) -> char {
    match c {
        'à' | 'á' | 'â' | 'ã' | 'ä' | 'å' | 'ā' | 'ă' | 'ą' => 'a',
        'ç' | 'ć' | 'ĉ' | 'ċ' | 'č' => 'c',
        'ď' | 'đ' => 'd',
        'è' | 'é' | 'ê' | 'ë' | 'ē' | 'ĕ' | 'ė' | 'ę' | 'ě' => 'e',
        'ĝ' | 'ğ' | 'ġ' | 'ģ' => 'g',
        'ĥ' | 'ħ' => 'h',
        'ì' | 'í' | 'î' | 'ï' | 'ĩ' | 'ī' | 'ĭ' | 'į' | 'ı' => 'i',
        'ĵ' => 'j',
        'ķ' => 'k',
        'ĺ' | 'ļ' | 'ľ' | 'ŀ' | 'ł' => 'l',
        'ñ' | 'ń' | 'ņ' | 'ň' => 'n',
        'ò' | 'ó' | 'ô' | 'õ' | 'ö' | 'ø' | 'ō' | 'ŏ' | 'ő' => 'o',
        'ŕ' | 'ŗ' | 'ř' => 'r',
        'ś' | 'ŝ' | 'ş' | 'š' => 's',
        'ţ' | 'ť' | 'ŧ' => 't',
        'ù' | 'ú' | 'û' | 'ü' | 'ũ' | 'ū' | 'ŭ' | 'ů' | 'ű' | 'ų' => 'u',
        'ŵ' => 'w',
        'ý' | 'ÿ' | 'ŷ' => 'y',
        'ź' | 'ż' | 'ž' => 'z',
        other => other,
    }
}

/// Normalize raw text into a continuous symbol stream.
///
/// Pipeline: lowercase, fold diacritics, apply transliteration rules, then
/// drop every character that does not map into the alphabet. Errors if
/// nothing survives.
pub fn normalize(
    raw_text: &str,
    alphabet: &Alphabet,
    translit: Option<&TransliterationTable>,
    source_id: impl Into<String>,
) -> Result<SymbolSequence, Error> {
    let lowered: String = raw_text
        .chars()
        .flat_map(|c| c.to_lowercase())
        .map(fold_diacritic)
        .collect();
    let rewritten = match translit {
        Some(t) => t.apply(&lowered),
        None => lowered,
    };
    let codes: Vec<u8> = rewritten.chars().filter_map(|c| alphabet.code(c)).collect();
    if codes.is_empty() {
        return Err(Error::EmptySequence);
    }
    SymbolSequence::from_codes(codes, alphabet.clone(), source_id)
}

/// Exact per-symbol counts of a sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Histogram {
    counts: Vec<u64>,
    total: u64,
}

impl Histogram {
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Counts keyed by letter, for display.
    pub fn by_letter(&self, alphabet: &Alphabet) -> HashMap<char, u64> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &n)| n > 0)
            .map(|(i, &n)| (alphabet.symbol(i as u8), n))
            .collect()
    }
}

pub fn letter_histogram(seq: &SymbolSequence) -> Histogram {
    let mut counts = vec![0u64; seq.alphabet().len()];
    for &c in seq.codes() {
        counts[c as usize] += 1;
    }
    Histogram {
        counts,
        total: seq.len() as u64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn english() -> Alphabet {
        Alphabet::preset("english-26").unwrap()
    }

    #[test]
    fn english_preset_positional_codes() {
        let a = english();
        assert_eq!(a.len(), 26);
        assert_eq!(a.code('a'), Some(0));
        assert_eq!(a.code('z'), Some(25));
    }

    #[test]
    fn italian_preset_excludes_foreign_letters() {
        let a = Alphabet::preset("italian-21").unwrap();
        assert_eq!(a.len(), 21);
        for c in ['j', 'k', 'w', 'x', 'y'] {
            assert_eq!(a.code(c), None);
        }
        assert_eq!(a.code('a'), Some(0));
        assert_eq!(a.code('z'), Some(20));
    }

    #[test]
    fn duplicate_letters_rejected() {
        assert!(matches!(
            Alphabet::new("bad", &['a', 'a', 'b']),
            Err(Error::DuplicateSymbol('a'))
        ));
    }

    #[test]
    fn unknown_preset_rejected() {
        assert!(matches!(
            Alphabet::preset("klingon-40"),
            Err(Error::UnknownPreset(_))
        ));
    }

    #[test]
    fn normalize_drops_non_letters() {
        let seq = normalize("Dr. Seuss!", &english(), None, "t").unwrap();
        assert_eq!(seq.to_letters(), "drseuss");
    }

    #[test]
    fn normalize_translit_and_diacritics() {
        let it = Alphabet::preset("italian-21").unwrap();
        let table = TransliterationTable::parse("k=ch\n").unwrap();
        let seq = normalize("ök, sì", &it, Some(&table), "t").unwrap();
        assert_eq!(seq.to_letters(), "ochsi");
    }

    #[test]
    fn normalize_empty_result_is_error() {
        assert!(matches!(
            normalize("1234 …", &english(), None, "t"),
            Err(Error::EmptySequence)
        ));
    }

    #[test]
    fn normalize_idempotent_on_own_output() {
        let seq = normalize("To be, or not to be!", &english(), None, "t").unwrap();
        let again = normalize(&seq.to_letters(), &english(), None, "t").unwrap();
        assert_eq!(seq.codes(), again.codes());
    }

    #[test]
    fn translit_longest_source_first() {
        // with a "c"->"k" rule and a "ch"->"k" rule, "ch" must win
        let table = TransliterationTable::new(vec![
            ("c".into(), "s".into()),
            ("ch".into(), "k".into()),
        ]);
        assert_eq!(table.apply("chic"), "kis");
    }

    #[test]
    fn translit_no_re_expansion() {
        // k -> ch must not be re-rewritten by a c -> k rule later in the table
        let table =
            TransliterationTable::new(vec![("k".into(), "ch".into()), ("c".into(), "k".into())]);
        assert_eq!(table.apply("k"), "ch");
    }

    #[test]
    fn histogram_counts() {
        let seq = normalize("banana", &english(), None, "t").unwrap();
        let h = letter_histogram(&seq);
        let by = h.by_letter(&english());
        assert_eq!(by[&'a'], 3);
        assert_eq!(by[&'b'], 1);
        assert_eq!(by[&'n'], 2);
        assert_eq!(h.total(), 6);

        let aaaa = normalize("aaaa", &english(), None, "t").unwrap();
        assert_eq!(letter_histogram(&aaaa).by_letter(&english())[&'a'], 4);
    }
}
