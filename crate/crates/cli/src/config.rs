//! `key = value` configuration files and flag/file/default precedence.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};

/// Keys a configuration file may set. Dashes and underscores are interchangeable.
pub const KNOWN_KEYS: &[&str] = &[
    "n",
    "p",
    "q",
    "function",
    "poly",
    "grid",
    "output",
    "format",
    "reproducible",
    "use_original",
    "expect_defect",
    "rule",
    "degrees",
    "n_min",
    "n_max",
    "n_step",
    "threshold",
    "variants",
    "kind",
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected key=value, got `{line}`", lineno + 1))?;
            let key = key.trim().replace('-', "_");
            if !KNOWN_KEYS.contains(&key.as_str()) {
                bail!(
                    "line {}: unknown key `{key}` (known: {})",
                    lineno + 1,
                    KNOWN_KEYS.join(", ")
                );
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config file {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in config file {}", path.display()))
    }

    /// Flag value if given, else the file value, else `None`.
    pub fn resolve<T>(&self, flag: Option<T>, key: &str) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        self.values
            .get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| anyhow!("config key `{key}`: cannot parse `{v}`: {e}"))
            })
            .transpose()
    }

    /// For switches: set on the command line, or `true` in the file.
    pub fn switch(&self, flag: bool, key: &str) -> Result<bool> {
        Ok(flag || self.resolve::<bool>(None, key)?.unwrap_or(false))
    }
}
