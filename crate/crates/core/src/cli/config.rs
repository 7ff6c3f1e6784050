//! JSON problem configuration and its command-line overrides.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use super::CliError;
use crate::analysis::ProblemSpec;
use crate::quadrature::QuadratureConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub format: OutputFormat,
    pub path: Option<PathBuf>,
}

/// Problem description as read from a config file.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub alpha: Option<f64>,
    pub gamma: Option<f64>,
    pub q: Option<String>,
    pub f: Option<String>,
    pub r1: Option<f64>,
    pub r2: Option<f64>,
    pub omega: Option<f64>,
    pub norm_u: Option<f64>,
    pub quadrature: Option<QuadratureConfig>,
    pub output: Option<OutputConfig>,
}

/// Flags shared by the problem-based subcommands. Flags win over the file.
#[derive(Debug, Clone, Default, Args)]
pub struct ProblemArgs {
    /// JSON config file
    #[arg(long, short = 'c')]
    pub config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    /// Order α in (1, 2]
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Type γ in [α, 2]
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Coefficient q(t)
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<String>,
    /// Nonlinearity f(u)
    #[arg(long, allow_hyphen_values = true)]
    pub f: Option<String>,
    #[arg(long)]
    pub r1: Option<f64>,
    #[arg(long)]
    pub r2: Option<f64>,
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long)]
    pub norm_u: Option<f64>,
    /// Quadrature tolerance
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_depth: Option<u32>,
    /// Output file (written atomically)
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("invalid config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// File contents (if any) with every flag that was given applied on top.
    pub fn resolve(args: &ProblemArgs) -> Result<Self, CliError> {
        let mut cfg = match &args.config {
            Some(p) => Self::load(p)?,
            None => Config::default(),
        };
        macro_rules! take {
            ($($field:ident),*) => {
                $(if let Some(v) = &args.$field { cfg.$field = Some(v.clone()); })*
            };
        }
        take!(a, b, alpha, gamma, q, f, r1, r2, omega, norm_u);
        if args.tol.is_some() || args.max_depth.is_some() {
            let mut quad = cfg.quadrature.unwrap_or_default();
            if let Some(t) = args.tol {
                quad.tol = t;
            }
            if let Some(d) = args.max_depth {
                quad.max_depth = d;
            }
            cfg.quadrature = Some(quad);
        }
        if args.output.is_some() || args.format.is_some() {
            let mut out = cfg.output.take().unwrap_or_default();
            if let Some(p) = &args.output {
                out.path = Some(p.clone());
            }
            if let Some(f) = args.format {
                out.format = f;
            }
            cfg.output = Some(out);
        }
        Ok(cfg)
    }

    /// `a = 0`, `b = 1` and `f(u) = u` unless given; `alpha`, `gamma`, `q` are required.
    pub fn problem(&self) -> Result<ProblemSpec, CliError> {
        let alpha = require(self.alpha, "alpha")?;
        let gamma = require(self.gamma, "gamma")?;
        let q = self.q.as_deref().ok_or_else(|| missing("q"))?;
        let f = self.f.as_deref().unwrap_or("u");
        ProblemSpec::parse(self.a.unwrap_or(0.0), self.b.unwrap_or(1.0), alpha, gamma, q, f)
            .map_err(|e| CliError::Usage(e.to_string()))
    }

    pub fn quadrature(&self) -> Result<QuadratureConfig, CliError> {
        let q = self.quadrature.unwrap_or_default();
        if !(q.tol > 0.0) || q.max_depth == 0 {
            return Err(CliError::Usage(
                "field `quadrature`: tol must be positive and max_depth at least 1".into(),
            ));
        }
        Ok(q)
    }

    pub fn output(&self) -> OutputConfig {
        self.output.clone().unwrap_or_default()
    }

    pub fn window(&self) -> Option<(f64, f64)> {
        self.r1.zip(self.r2)
    }
}

pub(crate) fn missing(field: &str) -> CliError {
    CliError::Usage(format!("missing field `{field}`"))
}

pub(crate) fn require(v: Option<f64>, field: &str) -> Result<f64, CliError> {
    v.ok_or_else(|| missing(field))
}
