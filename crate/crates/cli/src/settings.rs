//! Flag values merged over an optional `key=value` config file.

use std::collections::BTreeMap;
use std::str::FromStr;

use clap::parser::ValueSource;
use clap::ArgMatches;

use crate::CliError;

#[derive(Debug, Default)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

/// Config-file spellings accepted on top of the flag names.
const ALIASES: &[(&str, &str)] = &[("n", "ns"), ("b", "B")];

fn canonical(key: &str) -> &str {
    ALIASES
        .iter()
        .find(|(a, _)| *a == key)
        .map_or(key, |(_, c)| c)
}

/// Parse a flat config file: one `key = value` per line, `#` comments.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value", i + 1)))?;
        let k = k.trim().trim_start_matches("--");
        out.insert(canonical(k).to_string(), v.trim().to_string());
    }
    Ok(out)
}

impl Settings {
    /// Merge the config file named by `--config` (if any) with the flags
    /// given on the command line. Flags win.
    pub fn from_matches(m: &ArgMatches, known: &[&str]) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        if let Some(path) = m.get_one::<String>("config") {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read config {path}: {e}")))?;
            for (k, v) in parse_config(&text)? {
                if k == "config" || !known.contains(&k.as_str()) {
                    return Err(CliError::Usage(format!("unknown config key {k:?}")));
                }
                values.insert(k, v);
            }
        }
        for id in m.ids() {
            let id = id.as_str();
            if id == "config" || m.value_source(id) != Some(ValueSource::CommandLine) {
                continue;
            }
            let v = if let Ok(Some(flag)) = m.try_get_one::<bool>(id) {
                flag.to_string()
            } else if let Some(v) = m.get_one::<String>(id) {
                v.clone()
            } else {
                continue;
            };
            values.insert(id.to_string(), v);
        }
        Ok(Self { values })
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        self.raw(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| CliError::Usage(format!("--{key} {v:?}: {e}")))
            })
            .transpose()
    }

    pub fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        self.raw(key)
            .map(|v| {
                v.split(',')
                    .map(|p| {
                        p.trim()
                            .parse::<T>()
                            .map_err(|e| CliError::Usage(format!("--{key} {p:?}: {e}")))
                    })
                    .collect()
            })
            .transpose()
    }

    pub fn flag(&self, key: &str) -> Result<bool, CliError> {
        Ok(self.get::<bool>(key)?.unwrap_or(false))
    }
}

/// `inf` or a number.
pub fn parse_order(s: &str) -> Result<f64, CliError> {
    match s.trim() {
        "inf" | "Inf" | "infinity" => Ok(f64::INFINITY),
        v => v
            .parse()
            .map_err(|_| CliError::Usage(format!("--p {v:?}: expected a number or inf"))),
    }
}
