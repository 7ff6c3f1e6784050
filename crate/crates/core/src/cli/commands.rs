//! One function per subcommand. Each returns the text for stdout and stderr
//! and leaves process handling to the caller.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;

use super::config::{require, Config, OutputFormat, ProblemArgs};
use super::report::{json, number, table, write_atomic, Csv};
use super::verify::{paper_report, Status};
use super::{CliError, Outcome};
use crate::analysis::{
    corollary_bound, eigen_lower_bound_hw, eigen_lower_bound_lyapunov, eigen_reports, existence_check,
    hartman_wintner_check, lyapunov_check_linear, lyapunov_check_nonlinear, nonexistence_check, theta_pair,
    BoundReport, ExistenceReport, NonexistenceReport, ThetaPair,
};
use crate::expr::Node;
use crate::solver::{picard_solve, residual_certify, PicardOptions, SolutionGrid, SolverError};
use crate::specfun::{ml_roots, ml_series, DEFAULT_MAX_TERMS, DEFAULT_N_SCAN};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundKindArg {
    /// Linear inequality, needs f(u) = u
    Lyapunov,
    /// Nonlinear inequality, needs omega
    Nonlinear,
    /// Hartman-Wintner-type inequality, needs norm_u unless f(u) = u
    Hw,
    EigenLyapunov,
    EigenHw,
}

#[derive(Debug, Clone, Args)]
pub struct BoundArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Inequalities to evaluate (comma separated)
    #[arg(long, value_enum, value_delimiter = ',', default_value = "lyapunov")]
    pub kind: Vec<BoundKindArg>,
    /// Eigenvalue for the eigen kinds (defaults to a constant q)
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct ThetaArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Also test the nonexistence condition f(u) < θ|u| on [-U, U]
    #[arg(long, value_name = "U")]
    pub nonexistence: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct EigenArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, default_value_t = 3)]
    pub k_max: usize,
    #[arg(long, default_value_t = 100.0)]
    pub lambda_max: f64,
    /// Intervals of the E(−λ) curve written to the output file
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, default_value_t = 300)]
    pub n_grid: usize,
    #[arg(long, default_value_t = 1.5)]
    pub grid_power: f64,
    /// Constant initial guess (defaults to r1 when given, else 0)
    #[arg(long)]
    pub u0: Option<f64>,
    #[arg(long, default_value_t = 1e-12)]
    pub picard_tol: f64,
    #[arg(long, default_value_t = 500)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 1e8)]
    pub ceiling: f64,
    /// Skip the independent residual check
    #[arg(long)]
    pub no_certify: bool,
}

#[derive(Debug, Clone, Args)]
pub struct MlPlotArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub beta: f64,
    #[arg(long, default_value_t = -50.0, allow_hyphen_values = true)]
    pub z_min: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub z_max: f64,
    #[arg(long, default_value_t = 500)]
    pub points: usize,
    /// Target accuracy; points exceeding it are reported on stderr
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: OutputFormat,
}

fn write_or_print(path: Option<&PathBuf>, contents: &str, out: &mut Outcome) -> Result<(), CliError> {
    match path {
        Some(p) => {
            write_atomic(p, contents)?;
            out.err(format!("wrote {}", p.display()));
        }
        None => out.stdout.push_str(contents),
    }
    Ok(())
}

fn is_constant(node: &Node) -> bool {
    match node {
        Node::Const(_) => true,
        Node::Var => false,
        Node::Neg(x) | Node::Call(_, x) => is_constant(x),
        Node::Binary(_, x, y) => is_constant(x) && is_constant(y),
    }
}

fn bound_rows(reports: &[BoundReport]) -> Vec<Vec<String>> {
    reports
        .iter()
        .map(|r| {
            vec![
                serde_json::to_value(r.kind)
                    .unwrap()
                    .as_str()
                    .unwrap_or_default()
                    .to_string(),
                format!("{:.12e}", r.lhs),
                format!("{:.12e}", r.rhs),
                serde_json::to_value(r.verdict)
                    .unwrap()
                    .as_str()
                    .unwrap_or_default()
                    .to_string(),
            ]
        })
        .collect()
}

pub fn bound(args: &BoundArgs) -> Result<Outcome, CliError> {
    let cfg = Config::resolve(&args.problem)?;
    let spec = cfg.problem()?;
    let quad = cfg.quadrature()?;
    let mut reports = Vec::new();
    for kind in &args.kind {
        let report = match kind {
            BoundKindArg::Lyapunov => lyapunov_check_linear(&spec, &quad)?,
            BoundKindArg::Nonlinear => lyapunov_check_nonlinear(&spec, require(cfg.omega, "omega")?, &quad)?,
            BoundKindArg::Hw => {
                let norm_u = match cfg.norm_u {
                    Some(n) => n,
                    None if spec.is_linear() => 1.0,
                    None => require(None, "norm_u")?,
                };
                hartman_wintner_check(&spec, norm_u, &quad)?
            }
            BoundKindArg::EigenLyapunov | BoundKindArg::EigenHw => {
                let lambda = match args.lambda {
                    Some(l) => l,
                    None if is_constant(spec.q_expr().root()) => spec.q(spec.a())?,
                    None => require(None, "lambda")?,
                };
                let [lyap, hw] = eigen_reports(spec.alpha(), spec.gamma(), spec.b() - spec.a(), lambda)?;
                if *kind == BoundKindArg::EigenLyapunov {
                    lyap
                } else {
                    hw
                }
            }
        };
        reports.push(report);
    }
    let mut out = Outcome {
        stdout: table(&["kind", "lhs", "rhs", "verdict"], &bound_rows(&reports)),
        ..Outcome::default()
    };
    let output = cfg.output();
    if let Some(path) = &output.path {
        let text = match output.format {
            OutputFormat::Json => json(&reports)?,
            OutputFormat::Csv => {
                let mut csv = Csv::new(&["kind", "lhs", "rhs", "verdict"]);
                for (r, row) in reports.iter().zip(bound_rows(&reports)) {
                    csv.push(vec![row[0].clone(), number(r.lhs), number(r.rhs), row[3].clone()]);
                }
                csv.render()
            }
        };
        write_or_print(Some(path), &text, &mut out)?;
    }
    Ok(out)
}

#[derive(Debug, Serialize)]
struct ThetaOutput {
    theta: ThetaPair,
    existence: Option<ExistenceReport>,
    corollary_bound: Option<f64>,
    nonexistence: Option<NonexistenceReport>,
}

pub fn theta(args: &ThetaArgs) -> Result<Outcome, CliError> {
    let cfg = Config::resolve(&args.problem)?;
    let spec = cfg.problem()?;
    let quad = cfg.quadrature()?;
    let tp = theta_pair(&spec, &quad)?;
    let mut rows = vec![
        vec!["theta".into(), number(tp.theta), number(tp.theta_error)],
        vec![
            "theta_star".into(),
            number(tp.theta_star),
            number(tp.theta_star_error),
        ],
        vec!["r".into(), number(tp.r), String::new()],
    ];
    let mut result = ThetaOutput {
        theta: tp,
        existence: None,
        corollary_bound: None,
        nonexistence: None,
    };
    if let Some((r1, r2)) = cfg.window() {
        let ex = existence_check(&spec, r1, r2, &tp)?;
        rows.push(vec![
            "margin (A)".into(),
            number(ex.margin_a),
            format!("worst u = {}", ex.worst_u_a),
        ]);
        rows.push(vec![
            "margin (B)".into(),
            number(ex.margin_b),
            format!("worst u = {}", ex.worst_u_b),
        ]);
        rows.push(vec![
            "existence".into(),
            serde_json::to_value(ex.verdict).unwrap()["status"]
                .as_str()
                .unwrap_or_default()
                .into(),
            format!("grid resolution {:e}", ex.resolution),
        ]);
        let cb = corollary_bound(&spec, r1, r2)?;
        rows.push(vec!["corollary bound".into(), number(cb), String::new()]);
        result.existence = Some(ex);
        result.corollary_bound = Some(cb);
    }
    if let Some(u) = args.nonexistence {
        let ne = nonexistence_check(&spec, (-u.abs(), u.abs()), &tp)?;
        rows.push(vec![
            "nonexistence".into(),
            serde_json::to_value(ne.verdict).unwrap()["status"]
                .as_str()
                .unwrap_or_default()
                .into(),
            format!("worst margin {:e} at u = {}", ne.worst_margin, ne.worst_u),
        ]);
        result.nonexistence = Some(ne);
    }
    let mut out = Outcome {
        stdout: table(&["quantity", "value", "note"], &rows),
        ..Outcome::default()
    };
    let output = cfg.output();
    if let Some(path) = &output.path {
        let text = match output.format {
            OutputFormat::Json => json(&result)?,
            OutputFormat::Csv => {
                let mut csv = Csv::new(&["quantity", "value"]);
                for (name, v) in [("theta", tp.theta), ("theta_star", tp.theta_star), ("r", tp.r)] {
                    csv.push(vec![name.into(), number(v)]);
                }
                if let Some(cb) = result.corollary_bound {
                    csv.push(vec!["corollary_bound".into(), number(cb)]);
                }
                csv.render()
            }
        };
        write_or_print(Some(path), &text, &mut out)?;
    }
    Ok(out)
}

#[derive(Debug, Serialize)]
struct EigenOutput {
    alpha: f64,
    gamma: f64,
    roots: Vec<f64>,
    lower_bound_lyapunov: f64,
    lower_bound_hw: f64,
    curve: Vec<(f64, f64)>,
}

pub fn eigen(args: &EigenArgs) -> Result<Outcome, CliError> {
    let cfg = Config::resolve(&args.problem)?;
    let (alpha, gamma) = (require(cfg.alpha, "alpha")?, require(cfg.gamma, "gamma")?);
    if !(args.lambda_max > 0.0) || args.samples == 0 {
        return Err(CliError::Usage(
            "lambda_max must be positive and samples at least 1".into(),
        ));
    }
    let list = ml_roots(alpha, gamma, args.lambda_max, DEFAULT_N_SCAN, 1e-12)?;
    let bl = eigen_lower_bound_lyapunov(alpha, gamma)?;
    let bh = eigen_lower_bound_hw(alpha, gamma, 1.0)?;
    let roots: Vec<f64> = list.lambdas().into_iter().take(args.k_max).collect();
    let rows: Vec<Vec<String>> = roots
        .iter()
        .enumerate()
        .map(|(i, l)| {
            vec![
                (i + 1).to_string(),
                format!("{l:.12}"),
                format!("{bl:.12}"),
                format!("{bh:.12}"),
            ]
        })
        .collect();
    let mut out = Outcome {
        stdout: table(&["k", "lambda", "lyapunov bound", "hw bound"], &rows),
        ..Outcome::default()
    };
    if roots.len() < args.k_max {
        out.err(format!(
            "found {} of {} eigenvalues in (0, {}]",
            roots.len(),
            args.k_max,
            args.lambda_max
        ));
    }
    for w in &list.warnings {
        out.err(format!("warning: {w:?}"));
    }
    let output = cfg.output();
    if let Some(path) = &output.path {
        let mut curve = Vec::with_capacity(args.samples + 1);
        let mut worst = 0.0f64;
        for i in 0..=args.samples {
            let lambda = args.lambda_max * i as f64 / args.samples as f64;
            let v = ml_series(alpha, gamma, -lambda, 1e-15, DEFAULT_MAX_TERMS)?;
            worst = worst.max(v.error_bound());
            curve.push((lambda, v.value));
        }
        if worst > 1e-8 {
            out.err(format!("warning: curve error bound reaches {worst:e}"));
        }
        let text = match output.format {
            OutputFormat::Json => json(&EigenOutput {
                alpha,
                gamma,
                roots: roots.clone(),
                lower_bound_lyapunov: bl,
                lower_bound_hw: bh,
                curve,
            })?,
            OutputFormat::Csv => {
                let mut csv = Csv::new(&["lambda", "ml_value"]);
                for (l, v) in curve {
                    csv.push_numbers(&[l, v]);
                }
                csv.render()
            }
        };
        write_or_print(Some(path), &text, &mut out)?;
    }
    Ok(out)
}

#[derive(Debug, Serialize)]
struct SolveSummary {
    iterations: usize,
    converged: bool,
    residual_sup: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    residual_certified: Option<f64>,
    norm: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    window: Option<(f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    norm_in_window: Option<bool>,
}

#[derive(Debug, Serialize)]
struct SolveOutput<'a> {
    summary: &'a SolveSummary,
    t: &'a [f64],
    u: &'a [f64],
}

fn solution_text(
    sol: &SolutionGrid,
    summary: &SolveSummary,
    format: OutputFormat,
) -> Result<String, CliError> {
    match format {
        OutputFormat::Csv => {
            let mut csv = Csv::new(&["t", "u"]);
            for (&t, &u) in sol.grid.iter().zip(&sol.values) {
                csv.push_numbers(&[t, u]);
            }
            Ok(csv.render())
        }
        OutputFormat::Json => json(&SolveOutput {
            summary,
            t: &sol.grid,
            u: &sol.values,
        }),
    }
}

pub fn solve(args: &SolveArgs) -> Result<Outcome, CliError> {
    let cfg = Config::resolve(&args.problem)?;
    let spec = cfg.problem()?;
    let window = cfg.window();
    let opts = PicardOptions {
        n_grid: args.n_grid,
        grid_power: args.grid_power,
        u0: args.u0.or(cfg.r1).unwrap_or(0.0),
        tol: args.picard_tol,
        max_iter: args.max_iter,
        ceiling: args.ceiling,
    };
    let output = cfg.output();
    let mut out = Outcome::default();
    let sol = match picard_solve(&spec, &opts) {
        Ok(sol) => sol,
        Err(SolverError::Diverged { last }) => {
            let summary = SolveSummary {
                iterations: last.iterations,
                converged: false,
                residual_sup: last.residual_sup,
                residual_certified: None,
                norm: last.norm,
                window,
                norm_in_window: None,
            };
            let text = solution_text(&last, &summary, output.format)?;
            let path = output
                .path
                .clone()
                .unwrap_or_else(|| PathBuf::from("diverged.csv"));
            write_atomic(&path, &text)?;
            return Err(CliError::Numerical(format!(
                "Picard iteration diverged after {} sweeps (sup norm {:e}); last iterate written to {}",
                last.iterations,
                last.norm,
                path.display()
            )));
        }
        Err(e) => return Err(e.into()),
    };
    let certified = if args.no_certify {
        None
    } else {
        Some(residual_certify(&spec, &sol)?)
    };
    let summary = SolveSummary {
        iterations: sol.iterations,
        converged: sol.converged,
        residual_sup: sol.residual_sup,
        residual_certified: certified,
        norm: sol.norm,
        window,
        norm_in_window: window.map(|(lo, hi)| sol.norm >= lo && sol.norm <= hi),
    };
    let text = solution_text(&sol, &summary, output.format)?;
    let summary_text = json(&summary)?;
    match &output.path {
        Some(p) => {
            write_or_print(Some(p), &text, &mut out)?;
            out.stdout.push_str(&summary_text);
        }
        None => {
            out.stdout.push_str(&text);
            out.err(summary_text.trim_end());
        }
    }
    if !sol.converged {
        out.err(format!(
            "warning: no convergence within {} sweeps",
            sol.iterations
        ));
    }
    Ok(out)
}

pub fn ml_plot(args: &MlPlotArgs) -> Result<Outcome, CliError> {
    if args.points == 0 || !(args.z_min <= args.z_max) || !(args.tol > 0.0) {
        return Err(CliError::Usage(
            "need points >= 1, z_min <= z_max and tol > 0".into(),
        ));
    }
    let mut rows = Vec::with_capacity(args.points + 1);
    let mut out = Outcome::default();
    let mut worst = 0.0f64;
    for i in 0..=args.points {
        let z = args.z_min + (args.z_max - args.z_min) * i as f64 / args.points as f64;
        let v = ml_series(args.alpha, args.beta, z, args.tol, DEFAULT_MAX_TERMS)?;
        worst = worst.max(v.error_bound());
        rows.push((z, v.value, v.error_bound()));
    }
    if worst > args.tol {
        out.err(format!(
            "warning: error bound reaches {worst:e}, above tol {:e}",
            args.tol
        ));
    }
    let text = match args.format {
        OutputFormat::Csv => {
            let mut csv = Csv::new(&["z", "value", "error_bound"]);
            for (z, v, e) in rows {
                csv.push_numbers(&[z, v, e]);
            }
            csv.render()
        }
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Point {
                z: f64,
                value: f64,
                error_bound: f64,
            }
            let pts: Vec<Point> = rows
                .into_iter()
                .map(|(z, value, error_bound)| Point {
                    z,
                    value,
                    error_bound,
                })
                .collect();
            json(&pts)?
        }
    };
    write_or_print(args.output.as_ref(), &text, &mut out)?;
    Ok(out)
}

pub fn verify_paper(args: &VerifyArgs) -> Result<Outcome, CliError> {
    let report = paper_report().map_err(|e| CliError::Numerical(e.to_string()))?;
    let rows: Vec<Vec<String>> = report
        .rows
        .iter()
        .map(|r| {
            vec![
                r.quantity.clone(),
                r.paper.clone(),
                r.computed.clone(),
                r.status.to_string(),
            ]
        })
        .collect();
    let mut out = Outcome {
        stdout: table(&["quantity", "paper", "computed", "status"], &rows),
        ..Outcome::default()
    };
    out.stdout.push_str("\ndiscrepancy ledger\n");
    for r in report
        .rows
        .iter()
        .filter(|r| r.status != Status::Ok && !r.note.is_empty())
    {
        out.stdout
            .push_str(&format!("- [{}] {}: {}\n", r.status, r.quantity, r.note));
    }
    if let Some(path) = &args.output {
        let text = match args.format {
            OutputFormat::Json => json(&report)?,
            OutputFormat::Csv => {
                let mut csv = Csv::new(&["quantity", "paper", "computed", "status"]);
                for row in rows {
                    csv.push(
                        row.into_iter()
                            .map(|c| if c.contains(',') { format!("\"{c}\"") } else { c })
                            .collect(),
                    );
                }
                csv.render()
            }
        };
        write_or_print(Some(path), &text, &mut out)?;
    }
    Ok(out)
}
