//! Key = value configuration files. Explicit flags always win over config
//! entries, and any key the subcommand does not consume is rejected so a
//! typo cannot silently fall back to a default.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

/// Parsed configuration file: keys mapped to raw values.
pub struct Config {
    entries: BTreeMap<String, String>,
    source: String,
}

impl Config {
    /// No file given: every lookup misses and `finish` always succeeds.
    pub fn empty() -> Self {
        Self {
            entries: BTreeMap::new(),
            source: String::new(),
        }
    }

    /// Parse `key = value` lines; blank lines and `#` comments are skipped.
    pub fn load(path: &Path) -> Result<Self, String> {
        let source = path.display().to_string();
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {source}: {e}"))?;
        let mut entries = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("{source}:{}: expected key = value", lineno + 1))?;
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if key.is_empty() || !key.chars().all(|c| c.is_ascii_lowercase() || c == '_') {
                return Err(format!("{source}:{}: bad key {key:?}", lineno + 1));
            }
            if entries.insert(key.clone(), value).is_some() {
                return Err(format!("{source}:{}: duplicate key {key}", lineno + 1));
            }
        }
        Ok(Self { entries, source })
    }

    fn take(&mut self, key: &str) -> Option<String> {
        self.entries.remove(key)
    }

    /// Fail on any key no resolver consumed.
    pub fn finish(self) -> Result<(), String> {
        if self.entries.is_empty() {
            return Ok(());
        }
        let keys: Vec<&str> = self.entries.keys().map(String::as_str).collect();
        Err(format!(
            "unknown config key(s) in {}: {}",
            self.source,
            keys.join(", ")
        ))
    }

    /// The flag value when given, else the parsed config entry.
    pub fn resolve<T: FromStr>(
        &mut self,
        flag: Option<T>,
        key: &'static str,
    ) -> Result<Option<T>, String> {
        let raw = self.take(key);
        if flag.is_some() {
            return Ok(flag);
        }
        match raw {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| format!("config key {key}: cannot parse {v:?}")),
        }
    }

    /// Like `resolve` for types with a custom parser.
    pub fn resolve_with<T>(
        &mut self,
        flag: Option<T>,
        key: &'static str,
        parse: impl Fn(&str) -> Result<T, String>,
    ) -> Result<Option<T>, String> {
        let raw = self.take(key);
        if flag.is_some() {
            return Ok(flag);
        }
        match raw {
            None => Ok(None),
            Some(v) => parse(&v).map(Some).map_err(|e| format!("config key {key}: {e}")),
        }
    }

    /// Boolean switch: a set flag wins, otherwise the config entry.
    pub fn resolve_switch(&mut self, flag: bool, key: &'static str) -> Result<bool, String> {
        let raw = self.take(key);
        if flag {
            return Ok(true);
        }
        match raw.as_deref() {
            None => Ok(false),
            Some("true") => Ok(true),
            Some("false") => Ok(false),
            Some(v) => Err(format!("config key {key}: expected true or false, got {v:?}")),
        }
    }
}

/// Unwrap a parameter that has neither a flag nor a config entry.
pub fn require<T>(value: Option<T>, flag: &str, key: &str) -> Result<T, String> {
    value.ok_or_else(|| format!("missing required parameter {flag} (or config key {key})"))
}
