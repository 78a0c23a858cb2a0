//! Flag parsing. Every command flag maps to the parameter of the same name,
//! so a flag and a `[parameters]` entry in the config file are interchangeable.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::commands;
use crate::config::{Command, Format, Output, PartialConfig};
use crate::error::{Result, Status};

#[derive(Debug, Parser)]
#[command(name = "bellswitch", version, about = "Bell-state controlled teleportation and dialogue simulator")]
pub struct Cli {
    /// TOML run configuration; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for every random choice (default 0).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Option<Sub>,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(untagged)]
pub enum Sub {
    /// Bidirectional controlled teleportation.
    Bcst(BcstArgs),
    /// Controlled dialogue: both parties exchange messages.
    Cqd(CqdArgs),
    /// One-way secure direct communication.
    Cqsdc(CqsdcArgs),
    /// Key distribution over the one-way variant.
    Cqkd(CqkdArgs),
    /// Key agreement over the dialogue.
    Cqka(CqkaArgs),
    /// Eavesdropping and collusion statistics.
    Attack(AttackArgs),
    /// Noisy teleportation fidelity over a parameter grid.
    Sweep(SweepArgs),
    /// Check the closed-form fidelities against the Kraus pipeline.
    Verify(VerifyArgs),
}

impl Sub {
    fn command(&self) -> Command {
        match self {
            Sub::Bcst(_) => Command::Bcst,
            Sub::Cqd(_) => Command::Cqd,
            Sub::Cqsdc(_) => Command::Cqsdc,
            Sub::Cqkd(_) => Command::Cqkd,
            Sub::Cqka(_) => Command::Cqka,
            Sub::Attack(_) => Command::Attack,
            Sub::Sweep(_) => Command::Sweep,
            Sub::Verify(_) => Command::Verify,
        }
    }
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct BcstArgs {
    /// Pairs per direction.
    #[arg(long)]
    n: Option<String>,
    /// both, a2b, b2a or none.
    #[arg(long)]
    disclose: Option<String>,
    /// full, withheld, or four probabilities over psi+,psi-,phi+,phi-.
    #[arg(long)]
    bell_info: Option<String>,
    #[arg(long)]
    controllers: Option<String>,
    /// received or uniform.
    #[arg(long)]
    pairing: Option<String>,
    /// 2n comma-separated Bell kinds.
    #[arg(long)]
    kinds: Option<String>,
    /// 2n comma-separated sender outcomes such as 01.
    #[arg(long)]
    outcomes: Option<String>,
}

#[derive(Debug, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct DialogueArgs {
    /// Bell kind Charlie prepares (default phi+).
    #[arg(long)]
    initial: Option<String>,
    /// Decoy error rate above which the run aborts.
    #[arg(long)]
    threshold: Option<String>,
    /// Decoys per leg (default: one per symbol).
    #[arg(long)]
    decoys: Option<String>,
    /// Charlie keeps the permutation secret.
    #[arg(long)]
    #[serde(skip_serializing_if = "is_false")]
    withhold: bool,
    /// none or intercept-resend.
    #[arg(long)]
    attack: Option<String>,
    /// random-zx or fixed-z.
    #[arg(long)]
    basis: Option<String>,
    /// Fraction of qubits Eve measures.
    #[arg(long)]
    fraction: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct CqdArgs {
    /// Alice's message bits, e.g. 0110.
    #[arg(long)]
    alice: Option<String>,
    #[arg(long)]
    bob: Option<String>,
    /// Random symbols per party when no message is given.
    #[arg(long)]
    n: Option<String>,
    #[command(flatten)]
    #[serde(flatten)]
    dialogue: DialogueArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct CqsdcArgs {
    #[arg(long)]
    message: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[command(flatten)]
    #[serde(flatten)]
    dialogue: DialogueArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct CqkdArgs {
    /// Key length in bits (even).
    #[arg(long)]
    bits: Option<String>,
    #[command(flatten)]
    #[serde(flatten)]
    dialogue: DialogueArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct CqkaArgs {
    #[arg(long)]
    ka: Option<String>,
    #[arg(long)]
    kb: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[command(flatten)]
    #[serde(flatten)]
    dialogue: DialogueArgs,
}

#[derive(Debug, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct AttackArgs {
    /// detection, abort, collusion, marginal, information or disclosure.
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    basis: Option<String>,
    #[arg(long)]
    fraction: Option<String>,
    #[arg(long)]
    symbols: Option<String>,
    #[arg(long)]
    runs: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    samples: Option<String>,
    /// Colluders also receive Charlie's records.
    #[arg(long)]
    #[serde(skip_serializing_if = "is_false")]
    informed: bool,
    #[arg(long)]
    initial: Option<String>,
    /// travel or both.
    #[arg(long)]
    access: Option<String>,
    #[arg(long)]
    threshold: Option<String>,
    /// Announced Bell-kind distribution for the disclosure mode.
    #[arg(long)]
    distribution: Option<String>,
}

#[derive(Debug, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct SweepArgs {
    /// ad, pd or both.
    #[arg(long)]
    channel: Option<String>,
    /// start:stop:step or a comma-separated list.
    #[arg(long)]
    eta_grid: Option<String>,
    /// Comma-separated angles; radians or forms like pi/6.
    #[arg(long, allow_hyphen_values = true)]
    theta1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    theta2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    phi1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    phi2: Option<String>,
    /// printed or corrected closed form in the f_analytic column.
    #[arg(long)]
    analytic: Option<String>,
    /// fig1, fig2 or fig3 dataset.
    #[arg(long)]
    figure: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    /// default or coarse.
    #[arg(long)]
    grid: Option<String>,
}

fn flag_parameters(sub: &Sub) -> BTreeMap<String, String> {
    let value = serde_json::to_value(sub).expect("flag structs serialize");
    let mut out = BTreeMap::new();
    if let serde_json::Value::Object(map) = value {
        for (k, v) in map {
            match v {
                serde_json::Value::Null => {}
                serde_json::Value::String(s) => {
                    out.insert(k, s);
                }
                other => {
                    out.insert(k, other.to_string());
                }
            }
        }
    }
    out
}

impl Cli {
    pub fn into_config(self) -> Result<crate::RunConfig> {
        let base = match &self.config {
            Some(path) => PartialConfig::load(path)?,
            None => PartialConfig::default(),
        };
        let flags = PartialConfig {
            command: self.command.as_ref().map(Sub::command),
            seed: self.seed,
            parameters: self.command.as_ref().map(flag_parameters).unwrap_or_default(),
            output: Output { path: self.out, format: self.format },
        };
        base.merge(flags).finish()
    }
}

/// Parses `args`, runs the command and maps the result to an exit code.
pub fn main_with<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { Status::ConfigError.into() } else { Status::Ok.into() };
        }
    };
    match cli.into_config().and_then(|c| commands::run(&c)) {
        Ok(status) => status.into(),
        Err(e) => {
            eprintln!("bellswitch: {e}");
            Status::ConfigError.into()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(args: &[&str]) -> Result<crate::RunConfig> {
        Cli::try_parse_from(std::iter::once("bellswitch").chain(args.iter().copied())).expect("parses").into_config()
    }

    #[test]
    fn flags_become_parameters() {
        let c = config(&["sweep", "--channel", "pd", "--theta2", "0.5236", "--eta-grid", "0:1:0.5"]).unwrap();
        assert_eq!(c.command, Command::Sweep);
        assert_eq!(c.parameters.len(), 3);
        assert_eq!(c.parameters["eta-grid"], "0:1:0.5");
        let c = config(&["cqd", "--withhold", "--initial", "psi-", "--seed", "4"]).unwrap();
        assert_eq!(c.parameters["withhold"], "true");
        assert_eq!(c.parameters["initial"], "psi-");
        assert_eq!(c.seed, 4);
        let c = config(&["bcst", "--bell-info", "withheld"]).unwrap();
        assert_eq!(c.parameters["bell-info"], "withheld");
    }

    #[test]
    fn negative_angles_are_values() {
        let c = config(&["sweep", "--theta1", "-pi/4"]).unwrap();
        assert_eq!(c.parameters["theta1"], "-pi/4");
    }

    #[test]
    fn command_required() {
        assert!(config(&[]).is_err());
    }
}
