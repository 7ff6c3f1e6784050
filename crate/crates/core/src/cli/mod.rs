//! Command-line front end.
//!
//! Exit status: 0 when the requested evaluation completed (whatever its
//! verdict), 1 for usage or configuration errors, 2 for numerical failures.

pub mod commands;
pub mod config;
pub mod report;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::analysis::AnalysisError;
use crate::green::GreenError;
use crate::solver::SolverError;
use crate::specfun::SpecFnError;

pub use commands::{BoundArgs, BoundKindArg, EigenArgs, MlPlotArgs, SolveArgs, ThetaArgs, VerifyArgs};
pub use config::{Config, OutputConfig, OutputFormat, ProblemArgs};

#[derive(Debug, Parser)]
#[command(
    name = "fracbvp",
    version,
    about = "Lyapunov-type bounds and solvers for fractional boundary value problems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate Lyapunov or Hartman-Wintner type inequalities
    Bound(BoundArgs),
    /// Existence constants θ, θ* and the hypotheses (A), (B)
    Theta(ThetaArgs),
    /// Dirichlet eigenvalues from the zeros of E_{α,γ}(−λ)
    Eigen(EigenArgs),
    /// Solve the integral equation by Picard iteration
    Solve(SolveArgs),
    /// Tabulate the Mittag-Leffler function E_{α,β}(z)
    MlPlot(MlPlotArgs),
    /// Recompute the published constants and list disagreements
    VerifyPaper(VerifyArgs),
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::InvalidSpec(_)
            | AnalysisError::Parse { .. }
            | AnalysisError::Green(GreenError::InvalidParameters(_))
            | AnalysisError::QChangesSign { .. }
            | AnalysisError::NotLinear(_)
            | AnalysisError::InvalidArgument(_) => CliError::Usage(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::Analysis(inner) => inner.into(),
            SolverError::InvalidOption(_) => CliError::Usage(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<SpecFnError> for CliError {
    fn from(e: SpecFnError) -> Self {
        match e {
            SpecFnError::InvalidArgument(_) => CliError::Usage(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

/// Text produced by a subcommand.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn err(&mut self, line: impl AsRef<str>) {
        self.stderr.push_str(line.as_ref());
        self.stderr.push('\n');
    }
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Bound(a) => commands::bound(a),
        Command::Theta(a) => commands::theta(a),
        Command::Eigen(a) => commands::eigen(a),
        Command::Solve(a) => commands::solve(a),
        Command::MlPlot(a) => commands::ml_plot(a),
        Command::VerifyPaper(a) => commands::verify_paper(a),
    }
}

/// Parses `args` (program name first), runs the subcommand and prints its
/// output. Returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let (code, outcome) = match execute(&cli) {
        Ok(o) => (0, o),
        Err(e) => (
            e.exit_code(),
            Outcome {
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
            },
        ),
    };
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    code
}
