//! Command-line front end. The binary only parses arguments and maps errors
//! to exit codes; everything else lives here so it can be driven in-process.

mod output;
mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pseudo::check_theta;

pub use output::{format_f64, render, to_csv, to_json};
pub use report::{
    cmd_clone, cmd_delete, cmd_dilate, cmd_discriminate, cmd_spectrum, cmd_sweep, run, Report,
};

pub const DEFAULT_SEED: u64 = 42;

#[derive(Parser, Debug)]
#[command(
    name = "pseudo-sim",
    version,
    about = "Pseudo-unitary deleting/cloning machines, dilation and discrimination reports"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Eigenvalues of H(θ), metric checks and pseudo-unitarity residuals
    Spectrum(CommonArgs),
    /// Deleting machine on |α_i⟩|α_i⟩, with dilated success probabilities
    Delete(CommonArgs),
    /// Cloning machine on |α_i⟩|+⟩, with dilated success probabilities
    Clone(CommonArgs),
    /// Helstrom error for n = 1..copies clone-amplified copies
    Discriminate(CommonArgs),
    /// Dilation diagnostics for both machines
    Dilate(CommonArgs),
    /// CSV-style table over a θ grid
    Sweep(SweepArgs),
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub theta: f64,
    /// Prior probability of the first state
    #[arg(long, default_value_t = 0.5)]
    pub p1: f64,
    #[arg(long, default_value_t = 5)]
    pub copies: u32,
    /// Monte Carlo trials; 0 reports analytic values only
    #[arg(long, default_value_t = 0)]
    pub trials: u64,
    #[arg(long, env = "PSEUDO_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value_t = -2.0, allow_negative_numbers = true)]
    pub theta_min: f64,
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub theta_max: f64,
    #[arg(long, default_value_t = 41)]
    pub steps: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Spectrum,
    Delete,
    Clone,
    Discriminate,
    Dilate,
    Sweep,
}

/// Validated run parameters.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: CommandKind,
    pub theta: f64,
    pub p1: f64,
    pub copies: u32,
    pub trials: u64,
    pub seed: u64,
    pub output_format: Format,
    pub output_path: Option<PathBuf>,
    pub theta_min: f64,
    pub theta_max: f64,
    pub steps: usize,
}

impl RunConfig {
    pub fn new(command: CommandKind) -> Self {
        RunConfig {
            command,
            theta: 1.0,
            p1: 0.5,
            copies: 5,
            trials: 0,
            seed: DEFAULT_SEED,
            output_format: Format::Json,
            output_path: None,
            theta_min: -2.0,
            theta_max: 2.0,
            steps: 41,
        }
    }

    fn from_common(command: CommandKind, a: CommonArgs) -> Self {
        RunConfig {
            theta: a.theta,
            p1: a.p1,
            copies: a.copies,
            trials: a.trials,
            seed: a.seed,
            output_format: a.format,
            output_path: a.out,
            ..RunConfig::new(command)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.command == CommandKind::Sweep {
            check_theta(self.theta_min)?;
            check_theta(self.theta_max)?;
            if self.theta_min > self.theta_max {
                return Err(Error::InvalidArgument(
                    "--theta-min must not exceed --theta-max".into(),
                ));
            }
            if self.steps == 0 {
                return Err(Error::InvalidArgument("--steps must be at least 1".into()));
            }
        } else {
            check_theta(self.theta)?;
        }
        if !(0.0..=1.0).contains(&self.p1) {
            return Err(Error::InvalidArgument(format!(
                "--p1 = {} outside [0, 1]",
                self.p1
            )));
        }
        if self.copies == 0 {
            return Err(Error::InvalidArgument("--copies must be at least 1".into()));
        }
        Ok(())
    }
}

impl From<Cli> for RunConfig {
    fn from(cli: Cli) -> Self {
        match cli.command {
            Command::Spectrum(a) => RunConfig::from_common(CommandKind::Spectrum, a),
            Command::Delete(a) => RunConfig::from_common(CommandKind::Delete, a),
            Command::Clone(a) => RunConfig::from_common(CommandKind::Clone, a),
            Command::Discriminate(a) => RunConfig::from_common(CommandKind::Discriminate, a),
            Command::Dilate(a) => RunConfig::from_common(CommandKind::Dilate, a),
            Command::Sweep(s) => RunConfig {
                theta_min: s.theta_min,
                theta_max: s.theta_max,
                steps: s.steps,
                ..RunConfig::from_common(CommandKind::Sweep, s.common)
            },
        }
    }
}

/// Exit status for a failed run: 2 for bad arguments, 1 for numerical
/// failures.
pub fn exit_code(err: &Error) -> i32 {
    if err.is_usage() {
        2
    } else {
        1
    }
}
