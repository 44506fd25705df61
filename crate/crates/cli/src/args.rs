use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use hopf3::exactalg::Rational;
use serde::Serialize;

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "hopf3", version, args_conflicts_with_subcommands = true, about = "Lyapunov constants and limit-cycle bounds for 3D Hopf singularities")]
pub struct Cli {
    /// Run every command line of FILE concurrently (one invocation per line,
    /// without the leading `hopf3`; `#` starts a comment).
    #[arg(long, value_name = "FILE")]
    pub batch: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Lyapunov constants L1..Ln.
    Compute(RunArgs),
    /// Rank of the linear parts of L1..Ln in the perturbation parameters.
    Rank(RunArgs),
    /// Rank plus the analysis of the lowest nonlinear forms.
    HigherOrder(RunArgs),
    /// Full pipeline with a checked report.
    Cyclicity(RunArgs),
    /// Checks that L1..Ln vanish at the unperturbed system.
    VerifyCenter(RunArgs),
    /// Numerical sign and order check of the first nonzero constant.
    Oracle(OracleArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Compute(_) => "compute",
            Command::Rank(_) => "rank",
            Command::HigherOrder(_) => "higher-order",
            Command::Cyclicity(_) => "cyclicity",
            Command::VerifyCenter(_) => "verify-center",
            Command::Oracle(_) => "oracle",
        }
    }

    pub fn run_args(&self) -> &RunArgs {
        match self {
            Command::Compute(a)
            | Command::Rank(a)
            | Command::HigherOrder(a)
            | Command::Cyclicity(a)
            | Command::VerifyCenter(a) => a,
            Command::Oracle(o) => &o.run,
        }
    }
}

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct RunArgs {
    /// Catalog system name.
    #[arg(long, conflicts_with = "file")]
    pub system: Option<String>,
    /// System file (JSON).
    #[arg(long, value_name = "PATH")]
    pub file: Option<PathBuf>,
    /// Parameter values as NAME=RATIONAL; repeat or separate with commas.
    #[arg(long = "set", value_name = "NAME=VALUE", value_delimiter = ',')]
    pub set: Vec<String>,
    /// Center condition label; unset parameters come from its sample.
    #[arg(long)]
    pub condition: Option<String>,
    /// Number of constants.
    #[arg(long = "n", value_name = "N")]
    pub n: Option<usize>,
    /// Jet degree of the perturbation parameters.
    #[arg(long, value_name = "D")]
    pub jet: Option<u32>,
    /// Perturbation parameters fixed at zero.
    #[arg(long = "pin", value_delimiter = ',')]
    pub pin: Vec<String>,
    /// Add the quadratic perturbation (default for rank, higher-order and cyclicity).
    #[arg(long, conflicts_with = "no_perturb")]
    pub perturb: bool,
    /// Use the system's own parameters instead of the quadratic perturbation.
    #[arg(long)]
    pub no_perturb: bool,
    /// Pivot parameters for the rank stage.
    #[arg(long, value_delimiter = ',')]
    pub pivots: Vec<String>,
    /// Scaling-weights file (JSON) enabling the weighted-scaling stage.
    #[arg(long, value_name = "PATH")]
    pub weights: Option<PathBuf>,
    /// Named workflow setting system, pins, plan, N and D.
    #[arg(long)]
    pub preset: Option<String>,
    /// JSON report path.
    #[arg(long, value_name = "PATH")]
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OracleArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Initial radii as rationals.
    #[arg(long = "rho", value_delimiter = ',', default_values_t = ["1/50".to_string(), "1/25".to_string(), "2/25".to_string()])]
    pub rho: Vec<String>,
    /// Integrator tolerance 10^-DIGITS.
    #[arg(long, default_value_t = 12)]
    pub tol_digits: i32,
    /// Returns discarded before measuring.
    #[arg(long, default_value_t = 20)]
    pub settle_turns: usize,
    /// CSV path for the raw displacement samples.
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
}

/// Parses an exact rational, rejecting decimal and exponent notation.
pub fn parse_exact(flag: &'static str, text: &str) -> Result<Rational, CliError> {
    let t = text.trim();
    t.parse().map_err(|_| {
        let float_like = t.bytes().any(|b| b.is_ascii_digit()) && t.parse::<f64>().is_ok();
        if float_like {
            CliError::DecimalInput(t.to_string())
        } else {
            CliError::BadValue { flag, value: t.to_string() }
        }
    })
}

/// Parses `NAME=VALUE` pairs.
pub fn parse_sets(sets: &[String]) -> Result<Vec<(String, Rational)>, CliError> {
    sets.iter()
        .map(|s| {
            let (name, value) =
                s.split_once('=').ok_or_else(|| CliError::BadValue { flag: "set", value: s.clone() })?;
            let name = name.trim();
            if name.is_empty() {
                return Err(CliError::BadValue { flag: "set", value: s.clone() });
            }
            Ok((name.to_string(), parse_exact("set", value)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn decimals_are_rejected() {
        for bad in ["0.5", "1e-3", "-2.", "3E2"] {
            assert!(matches!(parse_exact("set", bad), Err(CliError::DecimalInput(_))), "{bad}");
        }
        assert_eq!(parse_exact("set", "-2/3").unwrap(), Rational::new(-2, 3).unwrap());
        assert!(matches!(parse_exact("set", "abc"), Err(CliError::BadValue { .. })));
    }

    #[test]
    fn sets_split_on_equals() {
        let v = parse_sets(&["c=-1".into(), "b = 2/3".into()]).unwrap();
        assert_eq!(v[0], ("c".to_string(), Rational::from_integer(-1)));
        assert_eq!(v[1].0, "b");
        assert!(parse_sets(&["c".into()]).is_err());
    }
}
