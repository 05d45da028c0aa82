//! Plain-text `key = value` configuration with flag overrides.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;
use std::path::Path;

use crate::CliError;

/// Keys understood by some command.
pub const KNOWN_KEYS: &[&str] = &[
    "fixture",
    "linear",
    "degrees",
    "entries",
    "n",
    "prime",
    "seed",
    "bound",
    "jobs",
    "fixtures_dir",
    "out",
    "scan_t",
    "scan_c",
    "scan_n",
    "scan_a",
    "scan_seeds",
    "linear_only",
    "chern_t",
    "cone_points",
];

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = Config::default();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("config line {}: expected `key = value`", k + 1))
            })?;
            cfg.set(key.trim(), value.trim())?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let key = key.replace('-', "_");
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(CliError::Usage(format!("unknown config key `{key}`")));
        }
        self.values.insert(key, value.to_string());
        Ok(())
    }

    /// Later values win.
    pub fn merge(&mut self, other: &Config) {
        for (k, v) in &other.values {
            self.values.insert(k.clone(), v.clone());
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        self.get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|_| CliError::Usage(format!("config key `{key}`: cannot parse `{v}`")))
            })
            .transpose()
    }

    pub fn flag(&self, key: &str) -> Result<Option<bool>, CliError> {
        self.get(key)
            .map(|v| match v {
                "true" | "yes" | "1" => Ok(true),
                "false" | "no" | "0" => Ok(false),
                _ => Err(CliError::Usage(format!(
                    "config key `{key}`: expected a boolean, got `{v}`"
                ))),
            })
            .transpose()
    }

    /// A list such as `1,2,5` or a range `1..3` (inclusive), or a mix.
    pub fn list(&self, key: &str) -> Result<Option<Vec<u64>>, CliError> {
        self.get(key).map(|v| parse_list(key, v)).transpose()
    }
}

pub fn parse_range(key: &str, v: &str) -> Result<RangeInclusive<u64>, CliError> {
    let bad = || CliError::Usage(format!("`{key}`: cannot parse range `{v}`"));
    match v.split_once("..") {
        Some((a, b)) => {
            let a: u64 = a.trim().parse().map_err(|_| bad())?;
            let b: u64 = b
                .trim_start_matches('=')
                .trim()
                .parse()
                .map_err(|_| bad())?;
            if a > b {
                return Err(bad());
            }
            Ok(a..=b)
        }
        None => {
            let a: u64 = v.trim().parse().map_err(|_| bad())?;
            Ok(a..=a)
        }
    }
}

pub fn parse_list(key: &str, v: &str) -> Result<Vec<u64>, CliError> {
    let mut out = Vec::new();
    for part in v.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        out.extend(parse_range(key, part)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_ranges_and_overrides() {
        let mut cfg =
            Config::parse("# grid\nscan_t = 1..3\nscan_a = 0, 1\nseed = 7 # fixed\n").unwrap();
        assert_eq!(cfg.list("scan_t").unwrap(), Some(vec![1, 2, 3]));
        assert_eq!(cfg.list("scan_a").unwrap(), Some(vec![0, 1]));
        let mut flags = Config::default();
        flags.set("seed", "9").unwrap();
        cfg.merge(&flags);
        assert_eq!(cfg.parsed::<u64>("seed").unwrap(), Some(9));
    }

    #[test]
    fn rejects_unknown_keys_and_bad_lines() {
        assert!(matches!(
            Config::parse("colour = red"),
            Err(CliError::Usage(_))
        ));
        assert!(matches!(Config::parse("seed 7"), Err(CliError::Usage(_))));
        assert!(matches!(
            Config::parse("scan_t = 3..1").unwrap().list("scan_t"),
            Err(CliError::Usage(_))
        ));
    }
}
