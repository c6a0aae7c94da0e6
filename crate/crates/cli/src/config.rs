//! Flat `key = value` project files. Keys are the long flag names; a flag
//! given on the command line wins over the file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

pub const KEYS: &[&str] = &[
    "all-methods",
    "annotations",
    "confidence-ratio",
    "consensus",
    "corpus",
    "count-empty-verses",
    "count-ratio",
    "distinctness-ratio",
    "extractions",
    "filler-vocab",
    "format",
    "grouping",
    "lemmas",
    "method",
    "min-shared",
    "nfc",
    "out-dir",
    "paraphrase-rate",
    "script",
    "seed",
    "similarity",
    "structures",
    "synonym-rate",
    "top-k",
    "unigram-threshold",
    "verdicts",
    "verses",
    "verses-per-form",
    "workers",
    "zipf-exponent",
];

/// Keys whose values are paths, resolved against the file's directory.
const PATH_KEYS: &[&str] = &[
    "annotations",
    "consensus",
    "corpus",
    "extractions",
    "out-dir",
    "similarity",
    "structures",
    "verdicts",
];

#[derive(Debug, Default)]
pub struct ProjectConfig {
    values: BTreeMap<String, String>,
    base: PathBuf,
}

impl ProjectConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text, path, base)
    }

    pub fn parse(text: &str, path: &Path, base: PathBuf) -> Result<Self, String> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let at = |m: String| format!("{}:{}: {m}", path.display(), i + 1);
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| at("expected key = value".into()))?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(at(format!("unknown key {key:?}")));
            }
            if values.insert(key.to_string(), value.to_string()).is_some() {
                return Err(at(format!("key {key:?} given twice")));
            }
        }
        Ok(ProjectConfig { values, base })
    }

    fn raw(&self, key: &str) -> Option<&str> {
        debug_assert!(KEYS.contains(&key), "{key}");
        self.values.get(key).map(String::as_str)
    }

    /// The flag if given, else the parsed config value.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, String>
    where
        T::Err: std::fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        self.raw(key)
            .map(|v| v.parse::<T>().map_err(|e| format!("config key {key}: {e}")))
            .transpose()
    }

    pub fn pick_or<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, String>
    where
        T::Err: std::fmt::Display,
    {
        Ok(self.pick(flag, key)?.unwrap_or(default))
    }

    pub fn switch(&self, flag: bool, key: &str) -> Result<bool, String> {
        Ok(flag || self.pick::<bool>(None, key)?.unwrap_or(false))
    }

    pub fn path(&self, flag: Option<PathBuf>, key: &str) -> Option<PathBuf> {
        debug_assert!(PATH_KEYS.contains(&key));
        flag.or_else(|| self.raw(key).map(|v| self.base.join(v)))
    }

    /// Comma-separated in the file.
    pub fn paths(&self, flag: Vec<PathBuf>, key: &str) -> Vec<PathBuf> {
        debug_assert!(PATH_KEYS.contains(&key));
        if !flag.is_empty() {
            return flag;
        }
        self.raw(key)
            .map(|v| {
                v.split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| self.base.join(s))
                    .collect()
            })
            .unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> Result<ProjectConfig, String> {
        ProjectConfig::parse(text, Path::new("p.conf"), PathBuf::from("/proj"))
    }

    #[test]
    fn flags_override_file() {
        let c = cfg("# run\nworkers = 3\ncorpus = a.tsv, b.tsv\n\nnfc = true\n").unwrap();
        assert_eq!(c.pick::<usize>(None, "workers").unwrap(), Some(3));
        assert_eq!(c.pick(Some(8usize), "workers").unwrap(), Some(8));
        assert_eq!(
            c.paths(vec![], "corpus"),
            vec![PathBuf::from("/proj/a.tsv"), PathBuf::from("/proj/b.tsv")]
        );
        assert_eq!(
            c.paths(vec!["x".into()], "corpus"),
            vec![PathBuf::from("x")]
        );
        assert!(c.switch(false, "nfc").unwrap());
        assert!(!c.switch(false, "all-methods").unwrap());
    }

    #[test]
    fn bad_files_name_the_line() {
        let e = cfg("workers = 2\nbogus = 1\n").unwrap_err();
        assert!(e.contains("p.conf:2"), "{e}");
        assert!(cfg("workers 2\n").unwrap_err().contains(":1:"));
        assert!(cfg("seed = 1\nseed = 2\n").is_err());
        let c = cfg("workers = many\n").unwrap();
        assert!(c.pick::<usize>(None, "workers").is_err());
    }
}
