//! `ruin`: exact winning/ruin probabilities from the command line.

mod commands;
mod report;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ruin_core::kernel::DEFAULT_MAX_STEPS;

#[derive(Debug, Parser)]
#[command(name = "ruin", version, about = "Absorption probabilities via Siegmund duality")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Input document (gambler spec, chain, or kernel; JSON)
    #[arg(long, global = true)]
    input: Option<PathBuf>,

    /// Write the report here instead of standard output
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Decimal places shown next to exact fractions
    #[arg(long = "digits", global = true, default_value_t = 6)]
    digits: usize,

    /// Monte Carlo trials per start state
    #[arg(long, global = true, default_value_t = 100_000)]
    trials: u64,

    /// Master seed for Monte Carlo
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Step budget per trial before it is reported as censored
    #[arg(long = "max-steps", global = true, default_value_t = DEFAULT_MAX_STEPS)]
    max_steps: u64,

    /// Largest power checked by `verify`
    #[arg(long = "max-power", global = true, default_value_t = 5)]
    max_power: u64,

    /// Add the first-step-analysis column (`ruin`)
    #[arg(long = "with-oracle", global = true)]
    with_oracle: bool,

    /// Add the duality-pipeline column (`ruin`)
    #[arg(long = "with-duality", global = true)]
    with_duality: bool,

    /// Add a Monte Carlo column (`compare`)
    #[arg(long = "with-simulation", global = true)]
    with_simulation: bool,

    /// Restrict the report to these states (repeatable), e.g. `--state 2,1` or `--state 4`
    #[arg(long = "state", global = true)]
    states: Vec<String>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Debug, Clone, Copy, Subcommand, PartialEq, Eq)]
pub enum Command {
    /// Closed-form winning probabilities of a gambler spec
    Ruin,
    /// Siegmund dual of a kernel under an order (adds a coffin state)
    Dual,
    /// Antidual kernel C·P_Zᵀ·C⁻¹ of an absorbing chain
    Antidual,
    /// Check the duality relation for powers 0..=max-power
    Verify,
    /// Monte Carlo estimates of winning probabilities
    Simulate,
    /// Closed form, duality pipeline and oracle side by side
    Compare,
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum Format {
    Table,
    Records,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub input: PathBuf,
    pub output: Option<PathBuf>,
    pub decimal_digits: usize,
    pub seed: u64,
    pub trials: u64,
    pub max_steps: u64,
    pub max_power: u64,
    pub with_oracle: bool,
    pub with_duality: bool,
    pub with_simulation: bool,
    pub states: Vec<String>,
    pub format: Format,
}

/// Process exit status.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Input(String),
    Inconsistent(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Input(_) => 2,
            Failure::Inconsistent(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Input(m) | Failure::Inconsistent(m) => m,
        }
    }
}

impl Cli {
    fn into_config(self) -> Result<RunConfig, Failure> {
        let input = self
            .input
            .ok_or_else(|| Failure::Usage("--input PATH is required".into()))?;
        if self.digits < 1 {
            return Err(Failure::Usage("--digits must be at least 1".into()));
        }
        let simulating = self.command == Command::Simulate || self.with_simulation;
        if simulating && self.trials < 1 {
            return Err(Failure::Usage("--trials must be at least 1".into()));
        }
        Ok(RunConfig {
            command: self.command,
            input,
            output: self.output,
            decimal_digits: self.digits,
            seed: self.seed,
            trials: self.trials,
            max_steps: self.max_steps,
            max_power: self.max_power,
            with_oracle: self.with_oracle,
            with_duality: self.with_duality,
            with_simulation: self.with_simulation,
            states: self.states,
            format: self.format,
        })
    }
}

fn run(config: &RunConfig) -> Result<(), Failure> {
    let text = fs::read_to_string(&config.input).map_err(|e| {
        Failure::Input(format!("cannot read {}: {e}", config.input.display()))
    })?;
    let (body, verdict) = commands::execute(config, &text)?;
    match &config.output {
        Some(path) => fs::write(path, &body)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{body}"),
    }
    verdict
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = cli.into_config().and_then(|config| run(&config));
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
