//! Flat key=value run configuration with `group.<label> = <glob>` lines.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

#[derive(Debug, Default)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
    groups: Vec<(String, String)>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut cfg = ConfigFile::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(format!("line {}: expected key=value, got '{line}'", lineno + 1));
            };
            let key = key.trim();
            let value = value.trim().to_string();
            if let Some(label) = key.strip_prefix("group.") {
                cfg.groups.push((label.to_string(), value));
            } else {
                cfg.values.insert(key.to_string(), value);
            }
        }
        Ok(cfg)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn parse_value<T: FromStr>(&self, key: &str) -> Option<T> {
        self.get(key).and_then(|v| v.parse().ok())
    }

    pub fn groups(&self) -> &[(String, String)] {
        &self.groups
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_values_and_groups() {
        let cfg = ConfigFile::parse(
            "# run parameters\nm = 4\nseed = 99\ngroup.poems = poem*\ngroup.speech = sp-*\n",
        )
        .unwrap();
        assert_eq!(cfg.parse_value::<usize>("m"), Some(4));
        assert_eq!(cfg.parse_value::<u64>("seed"), Some(99));
        assert_eq!(
            cfg.groups(),
            &[
                ("poems".to_string(), "poem*".to_string()),
                ("speech".to_string(), "sp-*".to_string())
            ]
        );
    }

    #[test]
    fn bad_line_rejected() {
        assert!(ConfigFile::parse("just a line\n").is_err());
    }
}
