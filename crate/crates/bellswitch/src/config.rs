//! Run configuration: a command, a seed, command parameters and an output sink.
//!
//! A TOML file supplies a base configuration; command-line flags override
//! any key they set.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::angle::{parse_angle, parse_angles, parse_grid};
use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Bcst,
    Cqd,
    Cqsdc,
    Cqkd,
    Cqka,
    Attack,
    Sweep,
    Verify,
}

const DIALOGUE_OPTIONS: [&str; 7] = ["initial", "threshold", "decoys", "withhold", "attack", "basis", "fraction"];

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Bcst => "bcst",
            Command::Cqd => "cqd",
            Command::Cqsdc => "cqsdc",
            Command::Cqkd => "cqkd",
            Command::Cqka => "cqka",
            Command::Attack => "attack",
            Command::Sweep => "sweep",
            Command::Verify => "verify",
        }
    }

    /// Parameter keys the command accepts.
    pub fn parameters(self) -> Vec<&'static str> {
        let own: &[&str] = match self {
            Command::Bcst => &["n", "disclose", "bell-info", "controllers", "pairing", "kinds", "outcomes"],
            Command::Cqd => &["alice", "bob", "n"],
            Command::Cqsdc => &["message", "n"],
            Command::Cqkd => &["bits"],
            Command::Cqka => &["ka", "kb", "n"],
            Command::Attack => &[
                "mode",
                "trials",
                "basis",
                "fraction",
                "symbols",
                "runs",
                "n",
                "samples",
                "informed",
                "initial",
                "access",
                "threshold",
            ],
            Command::Sweep => &["channel", "eta-grid", "theta1", "theta2", "phi1", "phi2", "analytic", "figure"],
            Command::Verify => &["grid"],
        };
        let mut keys = own.to_vec();
        if matches!(self, Command::Cqd | Command::Cqsdc | Command::Cqkd | Command::Cqka) {
            keys.extend(DIALOGUE_OPTIONS);
        }
        keys
    }

    pub fn formats(self) -> &'static [Format] {
        match self {
            Command::Sweep => &[Format::Csv, Format::Json],
            _ => &[Format::Text, Format::Json, Format::Csv],
        }
    }

    pub fn default_format(self) -> Format {
        match self {
            Command::Sweep => Format::Csv,
            Command::Verify | Command::Attack => Format::Json,
            _ => Format::Text,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    /// Standard output when absent.
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub seed: u64,
    pub parameters: BTreeMap<String, String>,
    pub output: Output,
}

/// A configuration source before merging; every field optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub command: Option<Command>,
    pub seed: Option<u64>,
    #[serde(default, deserialize_with = "scalar_map")]
    pub parameters: BTreeMap<String, String>,
    #[serde(default)]
    pub output: Output,
}

fn scalar_text(v: &toml::Value) -> std::result::Result<String, String> {
    Ok(match v {
        toml::Value::String(s) => s.clone(),
        toml::Value::Integer(i) => i.to_string(),
        toml::Value::Float(f) => f.to_string(),
        toml::Value::Boolean(b) => b.to_string(),
        toml::Value::Array(items) => {
            items.iter().map(scalar_text).collect::<std::result::Result<Vec<_>, _>>()?.join(",")
        }
        other => return Err(format!("unsupported parameter value {other}")),
    })
}

fn scalar_map<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<BTreeMap<String, String>, D::Error> {
    let table = toml::Table::deserialize(d)?;
    table.iter().map(|(k, v)| scalar_text(v).map(|s| (k.clone(), s)).map_err(serde::de::Error::custom)).collect()
}

impl PartialConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::config(e.to_string()))
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Applies `flags` on top of `self`: any key present in `flags` wins.
    pub fn merge(mut self, flags: PartialConfig) -> Self {
        self.command = flags.command.or(self.command);
        self.seed = flags.seed.or(self.seed);
        self.parameters.extend(flags.parameters);
        self.output.path = flags.output.path.or(self.output.path);
        self.output.format = flags.output.format.or(self.output.format);
        self
    }

    pub fn finish(self) -> Result<RunConfig> {
        let command = self.command.ok_or_else(|| CliError::config("no command given"))?;
        let config =
            RunConfig { command, seed: self.seed.unwrap_or(0), parameters: self.parameters, output: self.output };
        config.validate()?;
        Ok(config)
    }
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self { command, seed: 0, parameters: BTreeMap::new(), output: Output::default() }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.into(), value.to_string());
        self
    }

    /// Keys and output format must fit the command.
    pub fn validate(&self) -> Result<()> {
        let allowed = self.command.parameters();
        if let Some(bad) = self.parameters.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(CliError::config(format!(
                "{} does not take parameter {bad:?} (accepts: {})",
                self.command.name(),
                allowed.join(", ")
            )));
        }
        let format = self.format();
        if !self.command.formats().contains(&format) {
            return Err(CliError::config(format!("{} cannot write {format:?} output", self.command.name())));
        }
        Ok(())
    }

    pub fn format(&self) -> Format {
        self.output.format.unwrap_or(self.command.default_format())
    }

    pub fn params(&self) -> Params<'_> {
        Params(&self.parameters)
    }
}

/// Typed access to the parameter map; malformed values are config errors.
#[derive(Debug, Clone, Copy)]
pub struct Params<'a>(&'a BTreeMap<String, String>);

impl<'a> Params<'a> {
    pub fn get(&self, key: &str) -> Option<&'a str> {
        self.0.get(key).map(|s| s.trim())
    }

    fn parsed<T>(&self, key: &str, parse: impl FnOnce(&str) -> Option<T>) -> Result<Option<T>> {
        match self.get(key) {
            None => Ok(None),
            Some(raw) => parse(raw).map(Some).ok_or_else(|| CliError::config(format!("malformed {key} = {raw:?}"))),
        }
    }

    pub fn usize(&self, key: &str, default: usize) -> Result<usize> {
        Ok(self.parsed(key, |s| s.parse().ok())?.unwrap_or(default))
    }

    pub fn f64(&self, key: &str, default: f64) -> Result<f64> {
        Ok(self.parsed(key, |s| s.parse::<f64>().ok().filter(|v| v.is_finite()))?.unwrap_or(default))
    }

    pub fn bool(&self, key: &str) -> Result<bool> {
        Ok(self.parsed(key, |s| s.parse().ok())?.unwrap_or(false))
    }

    pub fn angle(&self, key: &str) -> Result<Option<f64>> {
        self.parsed(key, |s| parse_angle(s).ok())
    }

    pub fn angles(&self, key: &str) -> Result<Option<Vec<f64>>> {
        self.parsed(key, |s| parse_angles(s).ok())
    }

    pub fn grid(&self, key: &str) -> Result<Option<Vec<f64>>> {
        self.parsed(key, |s| parse_grid(s).ok())
    }

    /// A string of `0`/`1` characters.
    pub fn bits(&self, key: &str) -> Result<Option<Vec<bool>>> {
        self.parsed(key, |s| {
            s.chars()
                .map(|c| match c {
                    '0' => Some(false),
                    '1' => Some(true),
                    _ => None,
                })
                .collect()
        })
    }

    /// One of `choices`, or `default` when absent.
    pub fn choice(&self, key: &str, choices: &[&'static str], default: &'static str) -> Result<&'static str> {
        match self.get(key) {
            None => Ok(default),
            Some(raw) => choices
                .iter()
                .copied()
                .find(|c| c.eq_ignore_ascii_case(raw))
                .ok_or_else(|| CliError::config(format!("{key} must be one of {}, got {raw:?}", choices.join("|")))),
        }
    }

    /// Comma-separated list parsed item by item.
    pub fn list<T>(&self, key: &str, parse: impl Fn(&str) -> Option<T>) -> Result<Option<Vec<T>>> {
        self.parsed(key, |s| s.split(',').map(|item| parse(item.trim())).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_scalars_become_strings() {
        let cfg = PartialConfig::from_toml(
            r#"
            command = "sweep"
            seed = 7
            [parameters]
            channel = "pd"
            theta2 = 0.5236
            theta1 = ["0", "pi/4"]
            [output]
            format = "json"
            "#,
        )
        .unwrap()
        .finish()
        .unwrap();
        assert_eq!(cfg.command, Command::Sweep);
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.parameters["theta2"], "0.5236");
        assert_eq!(cfg.parameters["theta1"], "0,pi/4");
        assert_eq!(cfg.format(), Format::Json);
    }

    #[test]
    fn flags_win() {
        let file =
            PartialConfig::from_toml("command = \"bcst\"\nseed = 3\n[parameters]\nn = 4\ndisclose = \"none\"").unwrap();
        let mut flags = PartialConfig { seed: Some(9), ..Default::default() };
        flags.parameters.insert("n".into(), "2".into());
        let cfg = file.merge(flags).finish().unwrap();
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.parameters["n"], "2");
        assert_eq!(cfg.parameters["disclose"], "none");
    }

    #[test]
    fn schema_violations() {
        assert!(PartialConfig::from_toml("command = \"teleport\"").is_err());
        assert!(PartialConfig::from_toml("command = \"bcst\"\ncolour = 1").is_err());
        assert!(PartialConfig::default().finish().is_err());
        assert!(RunConfig::new(Command::Verify).with("channel", "ad").validate().is_err());
        let mut sweep = RunConfig::new(Command::Sweep);
        sweep.output.format = Some(Format::Text);
        assert!(sweep.validate().is_err());
        assert_eq!(RunConfig::new(Command::Bcst).seed, 0);
    }

    #[test]
    fn typed_params() {
        let cfg = RunConfig::new(Command::Cqd).with("alice", "0110").with("n", "x").with("initial", "psi-");
        let p = cfg.params();
        assert_eq!(p.bits("alice").unwrap(), Some(vec![false, true, true, false]));
        assert!(p.usize("n", 1).is_err());
        assert_eq!(p.usize("decoys", 5).unwrap(), 5);
        assert_eq!(p.choice("initial", &["phi+", "psi-"], "phi+").unwrap(), "psi-");
        assert!(p.choice("initial", &["phi+"], "phi+").is_err());
    }
}
