//! Command-line flags and the equivalent JSON configuration.

use std::path::{Path, PathBuf};

use catrand::Tolerances;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "catrand", version, about = "Seeded experiments on catalytic quantum randomness")]
pub struct Cli {
    /// Master seed; trial `t` draws from stream `t` of this seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file (a directory for `fig3`); stdout if absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Omit the timestamp from output headers.
    #[arg(long, global = true)]
    pub deterministic: bool,
    /// JSON file of tolerance overrides.
    #[arg(long, global = true)]
    pub tol_file: Option<PathBuf>,
    /// JSON experiment configuration; replaces the subcommand.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum Command {
    /// Optimal quantum dephasing residuals on random states.
    Dephase(DephaseArgs),
    /// Dephasing by the uniform mixture of clock powers.
    ClassicalDephase(DephaseArgs),
    /// Majorization-driven state transitions.
    Transition(TransitionArgs),
    /// One ancilla dephasing several systems in turn.
    Chain(ChainArgs),
    /// Universal dephasing machine with a noisy ancilla.
    Machine(MachineArgs),
    /// Stroboscopic recurrence of the dephasing unitary.
    Recur(RecurArgs),
    /// Continuous-time distance to the pinched state over one period.
    Fig3(Fig3Args),
    /// One transmission through the entanglement-keyed private channel.
    Pqc(PqcArgs),
    /// Expander dephasing against its convergence bound.
    Expander(ExpanderArgs),
    /// Measured dephasing error and dimension lower bounds.
    Bounds(BoundsArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Dephase(_) => "dephase",
            Command::ClassicalDephase(_) => "classical-dephase",
            Command::Transition(_) => "transition",
            Command::Chain(_) => "chain",
            Command::Machine(_) => "machine",
            Command::Recur(_) => "recur",
            Command::Fig3(_) => "fig3",
            Command::Pqc(_) => "pqc",
            Command::Expander(_) => "expander",
            Command::Bounds(_) => "bounds",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisChoice {
    Computational,
    Fourier,
    Random,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DephaseArgs {
    #[arg(long, default_value_t = 4)]
    pub d: usize,
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
    #[arg(long, value_enum, default_value_t = BasisChoice::Computational)]
    pub basis: BasisChoice,
}

impl Default for DephaseArgs {
    fn default() -> Self {
        Self { d: 4, trials: 50, basis: BasisChoice::Computational }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeChoice {
    Quantum,
    Classical,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TransitionArgs {
    #[arg(long, default_value_t = 4)]
    pub d: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, value_enum, default_value_t = ModeChoice::Quantum)]
    pub mode: ModeChoice,
}

impl Default for TransitionArgs {
    fn default() -> Self {
        Self { d: 4, trials: 100, mode: ModeChoice::Quantum }
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChainArgs {
    /// Dimension of each system.
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, default_value_t = 3)]
    pub systems: usize,
}

impl Default for ChainArgs {
    fn default() -> Self {
        Self { d: 2, systems: 3 }
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MachineArgs {
    #[arg(long, default_value_t = 4)]
    pub d: usize,
    #[arg(long, default_value_t = 20)]
    pub steps: usize,
}

impl Default for MachineArgs {
    fn default() -> Self {
        Self { d: 4, steps: 20 }
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RecurArgs {
    #[arg(long, default_value_t = 5)]
    pub m: usize,
    /// Largest power; defaults to `2m`.
    #[arg(long)]
    pub kmax: Option<usize>,
}

impl Default for RecurArgs {
    fn default() -> Self {
        Self { m: 5, kmax: None }
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Fig3Args {
    #[arg(long, value_delimiter = ',', default_values_t = vec![3, 5, 7])]
    pub m: Vec<usize>,
    #[arg(long, default_value_t = 64)]
    pub samples: usize,
}

impl Default for Fig3Args {
    fn default() -> Self {
        Self { m: vec![3, 5, 7], samples: 64 }
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PqcArgs {
    /// Pauli error as four bits `abcd`: `X^a Z^b` on the first qubit,
    /// `X^c Z^d` on the second.
    #[arg(long, default_value = "0000")]
    pub error: String,
    /// Parity-check rounds.
    #[arg(long, default_value_t = 8)]
    pub rounds: usize,
}

impl Default for PqcArgs {
    fn default() -> Self {
        Self { error: "0000".into(), rounds: 8 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StateChoice {
    Coherent,
    Random,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExpanderArgs {
    #[arg(long, default_value_t = 3)]
    pub e: usize,
    #[arg(long, default_value_t = 20)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = StateChoice::Coherent)]
    pub state: StateChoice,
}

impl Default for ExpanderArgs {
    fn default() -> Self {
        Self { e: 3, k: 20, state: StateChoice::Coherent }
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundsArgs {
    #[arg(long, default_value_t = 9)]
    pub d: usize,
    /// Keep only the first `m` clock powers of the classical mixture.
    #[arg(long)]
    pub truncate: Option<usize>,
}

impl Default for BoundsArgs {
    fn default() -> Self {
        Self { d: 9, truncate: None }
    }
}

/// A complete run, as read from `--config`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: Command,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub deterministic: bool,
    #[serde(default)]
    pub tolerances: Option<Tolerances>,
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path, what: &str) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {what} {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("invalid {what} {}: {e}", path.display())))
}

impl ExperimentConfig {
    /// Merges flags and an optional config file; flags given on the command
    /// line take precedence over the file.
    pub fn resolve(cli: Cli) -> Result<Self, CliError> {
        let mut config = match (&cli.config, cli.command) {
            (Some(_), Some(_)) => {
                return Err(CliError::Usage("give either a subcommand or --config, not both".into()))
            }
            (None, None) => return Err(CliError::Usage("a subcommand or --config is required".into())),
            (Some(path), None) => read_json::<ExperimentConfig>(path, "config")?,
            (None, Some(command)) => {
                ExperimentConfig { command, seed: 0, out: None, deterministic: false, tolerances: None }
            }
        };
        if let Some(seed) = cli.seed {
            config.seed = seed;
        }
        if cli.out.is_some() {
            config.out = cli.out;
        }
        config.deterministic |= cli.deterministic;
        if let Some(path) = &cli.tol_file {
            config.tolerances = Some(read_json(path, "tolerance file")?);
        }
        Ok(config)
    }
}
