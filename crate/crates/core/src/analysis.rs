//! Necessary conditions, existence constants and eigenvalue bounds for
//! `D^(α,γ) u + q(t) f(u) = 0`, `u(a) = u(b) = 0`.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::expr::{EvalError, Expr, ParseError, Variable};
use crate::green::{pow_nonneg, GreenError, GreenKernel, Minorant};
use crate::quadrature::{bisect, integrate, QuadError, QuadResult, QuadratureConfig};
use crate::specfun::gamma;

/// Width of the neutral zone for strict inequalities, relative to `max(1, |rhs|)`.
pub const TIE_TOLERANCE: f64 = 1e-12;
/// Grid size used to sample hypotheses on `f`.
pub const HYPOTHESIS_GRID: usize = 10_000;
const SIGN_SCAN: usize = 2_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("invalid problem: {0}")]
    InvalidSpec(String),
    #[error("cannot parse {field}: {source}")]
    Parse {
        field: &'static str,
        #[source]
        source: ParseError,
    },
    #[error("{field} cannot be evaluated: {source}")]
    Eval {
        field: &'static str,
        #[source]
        source: EvalError,
    },
    #[error(transparent)]
    Green(#[from] GreenError),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error("q changes sign (q({t}) = {value}); the existence constants need q >= 0")]
    QChangesSign { t: f64, value: f64 },
    #[error("the weighted integral of q vanishes")]
    ZeroIntegral,
    #[error("this check needs f(u) = u, got f(u) = {0}")]
    NotLinear(String),
    #[error("f({u}) = {value} must be positive")]
    NonPositiveF { u: f64, value: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// The data `(a, b, α, γ, q, f)` of one boundary value problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    kernel: GreenKernel,
    q: Expr,
    f: Expr,
}

impl ProblemSpec {
    pub fn new(a: f64, b: f64, alpha: f64, gamma: f64, q: Expr, f: Expr) -> Result<Self, AnalysisError> {
        if q.variable() != Variable::T {
            return Err(AnalysisError::InvalidSpec("q must be an expression in t".into()));
        }
        if f.variable() != Variable::U {
            return Err(AnalysisError::InvalidSpec("f must be an expression in u".into()));
        }
        let kernel = GreenKernel::new(a, b, alpha, gamma)?;
        let spec = ProblemSpec { kernel, q, f };
        for i in 0..=64 {
            spec.q(a + (b - a) * i as f64 / 64.0)?;
        }
        Ok(spec)
    }

    /// Parses `q` in `t` and `f` in `u`.
    pub fn parse(a: f64, b: f64, alpha: f64, gamma: f64, q: &str, f: &str) -> Result<Self, AnalysisError> {
        let q = Expr::parse(q, Variable::T).map_err(|source| AnalysisError::Parse { field: "q", source })?;
        let f = Expr::parse(f, Variable::U).map_err(|source| AnalysisError::Parse { field: "f", source })?;
        Self::new(a, b, alpha, gamma, q, f)
    }

    /// A linear problem `D^(α,γ) u + q u = 0`.
    pub fn linear(a: f64, b: f64, alpha: f64, gamma: f64, q: &str) -> Result<Self, AnalysisError> {
        Self::parse(a, b, alpha, gamma, q, "u")
    }

    pub fn kernel(&self) -> &GreenKernel {
        &self.kernel
    }

    pub fn a(&self) -> f64 {
        self.kernel.a()
    }

    pub fn b(&self) -> f64 {
        self.kernel.b()
    }

    pub fn alpha(&self) -> f64 {
        self.kernel.alpha()
    }

    pub fn gamma(&self) -> f64 {
        self.kernel.gamma()
    }

    pub fn q_expr(&self) -> &Expr {
        &self.q
    }

    pub fn f_expr(&self) -> &Expr {
        &self.f
    }

    pub fn q(&self, t: f64) -> Result<f64, AnalysisError> {
        self.q
            .eval(t)
            .map_err(|source| AnalysisError::Eval { field: "q", source })
    }

    pub fn f(&self, u: f64) -> Result<f64, AnalysisError> {
        self.f
            .eval(u)
            .map_err(|source| AnalysisError::Eval { field: "f", source })
    }

    pub fn is_linear(&self) -> bool {
        self.f.is_identity()
    }

    fn q_quad(&self, t: f64) -> Result<f64, QuadError> {
        self.q
            .eval(t)
            .map_err(|e| QuadError::Integrand(format!("q: {e}")))
    }

    /// Points where `q` changes sign, located by scanning and bisection.
    pub fn q_sign_changes(&self) -> Result<Vec<f64>, AnalysisError> {
        let (a, b) = (self.a(), self.b());
        let mut roots = Vec::new();
        let mut prev_t = a;
        let mut prev = self.q(a)?;
        for i in 1..=SIGN_SCAN {
            let t = a + (b - a) * i as f64 / SIGN_SCAN as f64;
            let v = self.q(t)?;
            if (prev < 0.0 && v > 0.0) || (prev > 0.0 && v < 0.0) {
                let q = |x: f64| self.q.eval(x).unwrap_or(f64::NAN);
                if let Some(r) = bisect(q, prev_t, t, 1e-14 * (b - a).max(1.0)) {
                    roots.push(r);
                }
            }
            if v != 0.0 {
                prev = v;
                prev_t = t;
            }
        }
        Ok(roots)
    }

    /// Fails if `q` is negative somewhere on the sign scan.
    pub fn require_nonnegative_q(&self) -> Result<(), AnalysisError> {
        let (a, b) = (self.a(), self.b());
        for i in 0..=SIGN_SCAN {
            let t = a + (b - a) * i as f64 / SIGN_SCAN as f64;
            let value = self.q(t)?;
            if value < 0.0 {
                return Err(AnalysisError::QChangesSign { t, value });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    LyapunovLinear,
    LyapunovNonlinear,
    HartmanWintner,
    EigenLyapunov,
    EigenHw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// `lhs > rhs`: a nontrivial solution is not ruled out.
    NecessaryConditionHolds,
    /// `lhs ≤ rhs`: no nontrivial solution exists.
    NontrivialSolutionExcluded,
    /// `lhs` and `rhs` agree within the neutral zone.
    IndeterminateAtTolerance,
}

impl Verdict {
    pub fn compare(lhs: f64, rhs: f64) -> Verdict {
        if (lhs - rhs).abs() <= TIE_TOLERANCE * rhs.abs().max(1.0) {
            Verdict::IndeterminateAtTolerance
        } else if lhs > rhs {
            Verdict::NecessaryConditionHolds
        } else {
            Verdict::NontrivialSolutionExcluded
        }
    }
}

/// Both sides of a necessary condition `lhs > rhs` and the resulting verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub lhs: f64,
    pub rhs: f64,
    pub verdict: Verdict,
    pub details: BTreeMap<String, f64>,
}

impl BoundReport {
    fn new(kind: BoundKind, lhs: f64, rhs: f64) -> Self {
        BoundReport {
            kind,
            lhs,
            rhs,
            verdict: Verdict::compare(lhs, rhs),
            details: BTreeMap::new(),
        }
    }

    fn with(mut self, key: &str, value: f64) -> Self {
        self.details.insert(key.to_string(), value);
        self
    }
}

/// `1 / max_s G(s,s)`, the right-hand side of the linear Lyapunov inequality.
pub fn lyapunov_bound(spec: &ProblemSpec) -> f64 {
    lyapunov_bound_for(spec.kernel())
}

pub fn lyapunov_bound_for(kernel: &GreenKernel) -> f64 {
    1.0 / kernel.diag_max().value
}

/// `∫_a^b |q|`, with sign changes of `q` as breakpoints.
pub fn abs_q_integral(spec: &ProblemSpec, cfg: &QuadratureConfig) -> Result<QuadResult, AnalysisError> {
    let breaks = spec.q_sign_changes()?;
    let (a, b) = (spec.a(), spec.b());
    Ok(integrate(
        |s| Ok(spec.q_quad(s)?.abs()),
        a,
        b,
        &breaks,
        &[a, b],
        cfg,
    )?)
}

/// Linear Lyapunov-type inequality `∫|q| > 1/max G(s,s)`.
pub fn lyapunov_check_linear(
    spec: &ProblemSpec,
    cfg: &QuadratureConfig,
) -> Result<BoundReport, AnalysisError> {
    if !spec.is_linear() {
        return Err(AnalysisError::NotLinear(spec.f_expr().to_string()));
    }
    let lhs = abs_q_integral(spec, cfg)?;
    let m = spec.kernel().diag_max();
    Ok(
        BoundReport::new(BoundKind::LyapunovLinear, lhs.value, 1.0 / m.value)
            .with("quadrature_error", lhs.error_estimate)
            .with("s_star", m.s_star)
            .with("diag_max", m.value),
    )
}

/// Nonlinear inequality `∫|q| > (1/max G(s,s)) · ω/f(ω)` with `ω = max u`.
pub fn lyapunov_check_nonlinear(
    spec: &ProblemSpec,
    omega: f64,
    cfg: &QuadratureConfig,
) -> Result<BoundReport, AnalysisError> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(AnalysisError::InvalidArgument(format!(
            "omega must be positive, got {omega}"
        )));
    }
    let f_omega = spec.f(omega)?;
    if !(f_omega > 0.0) {
        return Err(AnalysisError::NonPositiveF {
            u: omega,
            value: f_omega,
        });
    }
    let lhs = abs_q_integral(spec, cfg)?;
    let bound = lyapunov_bound(spec);
    Ok(
        BoundReport::new(BoundKind::LyapunovNonlinear, lhs.value, bound * omega / f_omega)
            .with("quadrature_error", lhs.error_estimate)
            .with("omega", omega)
            .with("f_omega", f_omega)
            .with("lyapunov_bound", bound),
    )
}

/// `(s−a)^(γ−1) (b−s)^(α−1)`.
pub fn hw_weight(kernel: &GreenKernel, s: f64) -> f64 {
    pow_nonneg(s - kernel.a(), kernel.gamma() - 1.0) * pow_nonneg(kernel.b() - s, kernel.alpha() - 1.0)
}

/// `max_s hw_weight = Γ(α)(b−a)^(γ−1) max_s G(s,s)`.
pub fn hw_weight_max(kernel: &GreenKernel) -> f64 {
    (kernel.b() - kernel.a()).powf(kernel.gamma() - 1.0) / kernel.inv_gamma_alpha() * kernel.diag_max().value
}

/// Hartman-Wintner-type inequality
/// `∫ (s−a)^(γ−1)(b−s)^(α−1) q⁺(s) ds > Γ(α)(b−a)^(γ−1) ‖u‖/f(‖u‖)`.
pub fn hartman_wintner_check(
    spec: &ProblemSpec,
    norm_u: f64,
    cfg: &QuadratureConfig,
) -> Result<BoundReport, AnalysisError> {
    if !(norm_u > 0.0) || !norm_u.is_finite() {
        return Err(AnalysisError::InvalidArgument(format!(
            "norm_u must be positive, got {norm_u}"
        )));
    }
    let f_norm = spec.f(norm_u)?;
    if !(f_norm > 0.0) {
        return Err(AnalysisError::NonPositiveF {
            u: norm_u,
            value: f_norm,
        });
    }
    let k = spec.kernel();
    let (a, b) = (k.a(), k.b());
    let breaks = spec.q_sign_changes()?;
    let lhs = integrate(
        |s| Ok(hw_weight(k, s) * spec.q_quad(s)?.max(0.0)),
        a,
        b,
        &breaks,
        &[a, b],
        cfg,
    )?;
    let scale = (b - a).powf(k.gamma() - 1.0) / k.inv_gamma_alpha();
    Ok(
        BoundReport::new(BoundKind::HartmanWintner, lhs.value, scale * norm_u / f_norm)
            .with("quadrature_error", lhs.error_estimate)
            .with("norm_u", norm_u)
            .with("f_norm_u", f_norm),
    )
}

/// Lower bound on `|λ|` for `D^(α,γ) u + λu = 0` on `[0, 1]`:
/// `(γ+α−2)^(γ+α−2) Γ(α) / ((α−1)^(α−1) (γ−1)^(γ−1))`.
pub fn eigen_lower_bound_lyapunov(alpha: f64, gamma_type: f64) -> Result<f64, AnalysisError> {
    Ok(lyapunov_bound_for(&GreenKernel::new(
        0.0, 1.0, alpha, gamma_type,
    )?))
}

/// `Γ(γ+α)/Γ(γ) · length^(−α)`.
pub fn eigen_lower_bound_hw(alpha: f64, gamma_type: f64, length: f64) -> Result<f64, AnalysisError> {
    GreenKernel::new(0.0, 1.0, alpha, gamma_type)?;
    if !(length > 0.0) || !length.is_finite() {
        return Err(AnalysisError::InvalidArgument(format!(
            "length must be positive, got {length}"
        )));
    }
    let g = |x: f64| gamma(x).map_err(|e| AnalysisError::InvalidArgument(e.to_string()));
    Ok(g(gamma_type + alpha)? / g(gamma_type)? * length.powf(-alpha))
}

/// The eigenvalue bounds as reports for a given `λ` (with `q ≡ λ` on `[a, b]`).
pub fn eigen_reports(
    alpha: f64,
    gamma_type: f64,
    length: f64,
    lambda: f64,
) -> Result<[BoundReport; 2], AnalysisError> {
    let lyap = eigen_lower_bound_lyapunov(alpha, gamma_type)? * length.powf(-alpha);
    let hw = eigen_lower_bound_hw(alpha, gamma_type, length)?;
    Ok([
        BoundReport::new(BoundKind::EigenLyapunov, lambda.abs(), lyap).with("length", length),
        BoundReport::new(BoundKind::EigenHw, lambda, hw).with("length", length),
    ])
}

/// `θ = (∫ G(s,s) q)^(−1)` and `θ* = (∫_{(3a+b)/4}^{(3b+a)/4} G(s,s) φ(s) q)^(−1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaPair {
    pub theta: f64,
    pub theta_star: f64,
    pub theta_error: f64,
    pub theta_star_error: f64,
    /// Crossing point of the minorant branches.
    pub r: f64,
}

pub fn theta_pair(spec: &ProblemSpec, cfg: &QuadratureConfig) -> Result<ThetaPair, AnalysisError> {
    spec.require_nonnegative_q()?;
    let k = spec.kernel();
    let (a, b) = (k.a(), k.b());
    let check = |s: f64| -> Result<f64, QuadError> {
        let v = spec.q_quad(s)?;
        if v < 0.0 {
            Err(QuadError::Integrand(format!("q({s}) = {v} is negative")))
        } else {
            Ok(v)
        }
    };
    let inner = integrate(|s| Ok(k.diagonal(s) * check(s)?), a, b, &[], &[a, b], cfg)?;
    if !(inner.value > 0.0) {
        return Err(AnalysisError::ZeroIntegral);
    }
    let minorant: Minorant = k.minorant()?;
    let (lo, hi) = k.quarter_window();
    let inner_star = integrate(
        |s| Ok(minorant.weighted(s) * check(s)?),
        lo,
        hi,
        &[minorant.r],
        &[],
        cfg,
    )?;
    if !(inner_star.value > 0.0) {
        return Err(AnalysisError::ZeroIntegral);
    }
    Ok(ThetaPair {
        theta: 1.0 / inner.value,
        theta_star: 1.0 / inner_star.value,
        theta_error: inner.error_estimate / inner.value.powi(2),
        theta_star_error: inner_star.error_estimate / inner_star.value.powi(2),
        r: minorant.r,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum ExistenceVerdict {
    /// A positive solution with `r1 ≤ ‖u‖ ≤ r2` exists.
    HypothesesSatisfied,
    /// `f(u) < θ* r1` at `u`.
    HypothesisAFails { u: f64 },
    /// `f(u) > θ r2` at `u`.
    HypothesisBFails { u: f64 },
}

/// Outcome of sampling `f(u) ≥ θ* r1` on `[0, r1]` and `f(u) ≤ θ r2` on `[0, r2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExistenceReport {
    pub verdict: ExistenceVerdict,
    /// `min (f(u) − θ* r1)` over the grid; negative means (A) fails.
    pub margin_a: f64,
    pub worst_u_a: f64,
    /// `min (θ r2 − f(u))` over the grid; negative means (B) fails.
    pub margin_b: f64,
    pub worst_u_b: f64,
    /// Grid spacing on `[0, r2]`.
    pub resolution: f64,
}

pub fn existence_check(
    spec: &ProblemSpec,
    r1: f64,
    r2: f64,
    tp: &ThetaPair,
) -> Result<ExistenceReport, AnalysisError> {
    if !(r1 > 0.0 && r1 < r2 && r2.is_finite()) {
        return Err(AnalysisError::InvalidArgument(format!(
            "need 0 < r1 < r2, got r1={r1}, r2={r2}"
        )));
    }
    let n = HYPOTHESIS_GRID;
    let (mut margin_a, mut worst_u_a) = (f64::INFINITY, 0.0);
    for i in 0..=n {
        let u = r1 * i as f64 / n as f64;
        let m = spec.f(u)? - tp.theta_star * r1;
        if m < margin_a {
            margin_a = m;
            worst_u_a = u;
        }
    }
    let (mut margin_b, mut worst_u_b) = (f64::INFINITY, 0.0);
    for i in 0..=n {
        let u = r2 * i as f64 / n as f64;
        let m = tp.theta * r2 - spec.f(u)?;
        if m < margin_b {
            margin_b = m;
            worst_u_b = u;
        }
    }
    let verdict = if margin_a < 0.0 {
        ExistenceVerdict::HypothesisAFails { u: worst_u_a }
    } else if margin_b < 0.0 {
        ExistenceVerdict::HypothesisBFails { u: worst_u_b }
    } else {
        ExistenceVerdict::HypothesesSatisfied
    };
    Ok(ExistenceReport {
        verdict,
        margin_a,
        worst_u_a,
        margin_b,
        worst_u_b,
        resolution: r2 / n as f64,
    })
}

/// `r1 / f(r2)` times the Lyapunov bound: the lower bound on `∫ q` implied
/// when both existence hypotheses hold for a concave nondecreasing `f`.
pub fn corollary_bound(spec: &ProblemSpec, r1: f64, r2: f64) -> Result<f64, AnalysisError> {
    let f_r2 = spec.f(r2)?;
    if !(f_r2 > 0.0) {
        return Err(AnalysisError::NonPositiveF { u: r2, value: f_r2 });
    }
    Ok(lyapunov_bound(spec) * r1 / f_r2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum NonexistenceVerdict {
    NoNontrivialSolution,
    ConditionFails { u: f64 },
    IndeterminateAtTolerance { u: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NonexistenceReport {
    pub verdict: NonexistenceVerdict,
    /// `max (f(u) − θ|u|)` over the nonzero grid points; must be negative.
    pub worst_margin: f64,
    pub worst_u: f64,
}

/// Samples `f(u) < θ|u|` on `u_range`, skipping `u = 0`.
pub fn nonexistence_check(
    spec: &ProblemSpec,
    u_range: (f64, f64),
    tp: &ThetaPair,
) -> Result<NonexistenceReport, AnalysisError> {
    let (lo, hi) = u_range;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(AnalysisError::InvalidArgument(format!(
            "bad u range [{lo}, {hi}]"
        )));
    }
    let n = HYPOTHESIS_GRID;
    let (mut worst, mut worst_u) = (f64::NEG_INFINITY, lo);
    for i in 0..=n {
        let u = lo + (hi - lo) * i as f64 / n as f64;
        if u == 0.0 {
            continue;
        }
        let m = spec.f(u)? - tp.theta * u.abs();
        if m > worst {
            worst = m;
            worst_u = u;
        }
    }
    let zone = TIE_TOLERANCE * (tp.theta * worst_u.abs()).max(1.0);
    let verdict = if worst.abs() <= zone {
        NonexistenceVerdict::IndeterminateAtTolerance { u: worst_u }
    } else if worst < 0.0 {
        NonexistenceVerdict::NoNontrivialSolution
    } else {
        NonexistenceVerdict::ConditionFails { u: worst_u }
    };
    Ok(NonexistenceReport {
        verdict,
        worst_margin: worst,
        worst_u,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn spec_validation() {
        assert!(ProblemSpec::parse(0.0, 1.0, 1.5, 1.5, "u", "u").is_err());
        assert!(ProblemSpec::parse(0.0, 1.0, 1.5, 1.5, "t", "t").is_err());
        assert!(ProblemSpec::parse(1.0, 0.0, 1.5, 1.5, "t", "u").is_err());
        assert!(matches!(
            ProblemSpec::parse(0.0, 1.0, 1.5, 1.5, "1/t", "u"),
            Err(AnalysisError::Eval { field: "q", .. })
        ));
    }

    #[test]
    fn classical_and_riemann_liouville_reductions() {
        let s = ProblemSpec::linear(0.0, 2.0, 2.0, 2.0, "1").unwrap();
        assert!(rel(lyapunov_bound(&s), 2.0) < 1e-14);
        let al = 1.4;
        let s = ProblemSpec::linear(1.0, 3.0, al, al, "1").unwrap();
        let expected = gamma(al).unwrap() * 4f64.powf(al - 1.0) / 2f64.powf(al - 1.0);
        assert!(rel(lyapunov_bound(&s), expected) < 1e-13);
    }

    #[test]
    fn zero_coefficient_is_excluded() {
        let s = ProblemSpec::linear(0.0, 1.0, 1.5, 1.8, "0").unwrap();
        let r = lyapunov_check_linear(&s, &cfg()).unwrap();
        assert_eq!(r.lhs, 0.0);
        assert_eq!(r.verdict, Verdict::NontrivialSolutionExcluded);
    }

    #[test]
    fn constant_coefficient_threshold() {
        for (c, verdict) in [
            ("3.9", Verdict::NontrivialSolutionExcluded),
            ("4", Verdict::IndeterminateAtTolerance),
            ("4.1", Verdict::NecessaryConditionHolds),
        ] {
            let s = ProblemSpec::linear(0.0, 1.0, 2.0, 2.0, c).unwrap();
            assert_eq!(
                lyapunov_check_linear(&s, &cfg()).unwrap().verdict,
                verdict,
                "q={c}"
            );
        }
        let s = ProblemSpec::linear(0.0, 1.0, 2.0, 2.0, &format!("{}", PI * PI)).unwrap();
        assert_eq!(
            lyapunov_check_linear(&s, &cfg()).unwrap().verdict,
            Verdict::NecessaryConditionHolds
        );
    }

    #[test]
    fn linear_check_rejects_nonlinear_f() {
        let s = ProblemSpec::parse(0.0, 1.0, 1.5, 1.5, "1", "cosh(u)").unwrap();
        assert!(matches!(
            lyapunov_check_linear(&s, &cfg()),
            Err(AnalysisError::NotLinear(_))
        ));
    }

    #[test]
    fn sign_changing_q_is_integrated_piecewise() {
        let s = ProblemSpec::linear(0.0, 1.0, 1.5, 1.5, "t - 0.3").unwrap();
        let v = abs_q_integral(&s, &cfg()).unwrap().value;
        assert!((v - (0.09 / 2.0 + 0.49 / 2.0)).abs() < 1e-12);
        assert!(matches!(
            theta_pair(&s, &cfg()),
            Err(AnalysisError::QChangesSign { .. })
        ));
    }

    #[test]
    fn nonlinear_reduces_to_linear_for_identity() {
        let s = ProblemSpec::linear(0.0, 1.0, 1.75, 2.0, "t^2 + 1").unwrap();
        let lin = lyapunov_check_linear(&s, &cfg()).unwrap();
        let non = lyapunov_check_nonlinear(&s, 0.37, &cfg()).unwrap();
        assert!(rel(lin.rhs, non.rhs) < 1e-15);
        assert_eq!(lin.lhs, non.lhs);
    }

    #[test]
    fn nonlinear_rhs_for_cosh() {
        let s = ProblemSpec::parse(0.0, 1.0, 1.75, 2.0, "t^2", "cosh(u)").unwrap();
        let r = lyapunov_check_nonlinear(&s, 0.125, &cfg()).unwrap();
        assert!(rel(r.rhs, lyapunov_bound(&s) * 0.125 / 0.125f64.cosh()) < 1e-15);
        assert!(lyapunov_check_nonlinear(&s, -1.0, &cfg()).is_err());
        let z = ProblemSpec::parse(0.0, 1.0, 1.75, 2.0, "t^2", "u - 1").unwrap();
        assert!(matches!(
            lyapunov_check_nonlinear(&z, 1.0, &cfg()),
            Err(AnalysisError::NonPositiveF { .. })
        ));
    }

    #[test]
    fn classical_hartman_wintner() {
        let (a, b, c) = (0.5, 2.0, 3.0);
        let s = ProblemSpec::linear(a, b, 2.0, 2.0, "3").unwrap();
        let r = hartman_wintner_check(&s, 1.0, &cfg()).unwrap();
        assert!(rel(r.lhs, c * (b - a).powi(3) / 6.0) < 1e-12);
        assert!(rel(r.rhs, b - a) < 1e-14);
        let neg = ProblemSpec::linear(a, b, 1.5, 1.7, "-1 - t^2").unwrap();
        let r = hartman_wintner_check(&neg, 1.0, &cfg()).unwrap();
        assert_eq!(r.lhs, 0.0);
        assert_eq!(r.verdict, Verdict::NontrivialSolutionExcluded);
    }

    #[test]
    fn theta_matches_beta_reduction() {
        for p in [0.0, 0.5, 1.0, 2.0] {
            let (al, ga) = (1.75, 2.0);
            let s = ProblemSpec::linear(0.0, 1.0, al, ga, &format!("t^{p}")).unwrap();
            let tp = theta_pair(&s, &cfg()).unwrap();
            let oracle = gamma(ga + p + al).unwrap() / gamma(ga + p).unwrap();
            assert!(rel(tp.theta, oracle) < 1e-10, "p={p}: {} vs {oracle}", tp.theta);
        }
    }

    #[test]
    fn eigen_bounds() {
        assert!(rel(eigen_lower_bound_lyapunov(2.0, 2.0).unwrap(), 4.0) < 1e-14);
        assert!(rel(eigen_lower_bound_hw(2.0, 2.0, 1.0).unwrap(), 6.0) < 1e-14);
        let al = 1.3;
        assert!(
            rel(
                eigen_lower_bound_lyapunov(al, al).unwrap(),
                gamma(al).unwrap() * 4f64.powf(al - 1.0)
            ) < 1e-13
        );
        let expected = 1.75f64.powf(1.75) / 0.75f64.powf(0.75) * gamma(1.75).unwrap();
        assert!(rel(eigen_lower_bound_lyapunov(1.75, 2.0).unwrap(), expected) < 1e-13);
        let one = eigen_lower_bound_hw(1.6, 1.9, 1.0).unwrap();
        let two = eigen_lower_bound_hw(1.6, 1.9, 2.0).unwrap();
        assert!(rel(one / two, 2f64.powf(1.6)) < 1e-14);
        assert!(
            rel(
                eigen_lower_bound_hw(1.5, 1.5, 1.0).unwrap(),
                2.0 / gamma(1.5).unwrap()
            ) < 1e-14
        );
    }

    #[test]
    fn existence_with_zero_f_fails_a() {
        let s = ProblemSpec::parse(0.0, 1.0, 1.5, 1.5, "1", "0").unwrap();
        let tp = theta_pair(&s, &cfg()).unwrap();
        let r = existence_check(&s, 0.1, 0.2, &tp).unwrap();
        assert!(matches!(r.verdict, ExistenceVerdict::HypothesisAFails { .. }));
        assert!(existence_check(&s, 0.2, 0.1, &tp).is_err());
    }

    #[test]
    fn nonexistence_cases() {
        let s = ProblemSpec::parse(0.0, 1.0, 1.5, 1.5, "1", "u/2").unwrap();
        let tp = theta_pair(&s, &cfg()).unwrap();
        assert!(tp.theta > 0.5);
        let r = nonexistence_check(&s, (0.0, 5.0), &tp).unwrap();
        assert_eq!(r.verdict, NonexistenceVerdict::NoNontrivialSolution);
        let c = ProblemSpec::parse(0.0, 1.0, 1.5, 1.5, "1", "cosh(u)").unwrap();
        let r = nonexistence_check(&c, (0.0, 0.1), &tp).unwrap();
        assert!(matches!(r.verdict, NonexistenceVerdict::ConditionFails { .. }));
    }

    #[test]
    fn hw_weight_maximum() {
        let k = GreenKernel::new(0.5, 2.5, 1.6, 1.85).unwrap();
        let max = hw_weight_max(&k);
        let direct = hw_weight(&k, k.s_star());
        assert!(rel(max, direct) < 1e-13);
        for i in 0..=1000 {
            let s = 0.5 + 2.0 * i as f64 / 1000.0;
            assert!(hw_weight(&k, s) <= max * (1.0 + 1e-12));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn bound_times_maximum_is_one(
            a in -2.0f64..2.0, len in 0.1f64..4.0, al in 1.01f64..2.0, dg in 0.0f64..1.0
        ) {
            let ga = al + (2.0 - al) * dg;
            let s = ProblemSpec::linear(a, a + len, al, ga, "1").unwrap();
            prop_assert!((lyapunov_bound(&s) * s.kernel().diag_max().value - 1.0).abs() < 1e-12);
        }

        #[test]
        fn scaling_q_up_never_excludes(c in 1.0f64..5.0, base in 0.1f64..10.0, al in 1.05f64..2.0) {
            let lo = ProblemSpec::linear(0.0, 1.0, al, al, &format!("{base}*(1+t)")).unwrap();
            let hi = ProblemSpec::linear(0.0, 1.0, al, al, &format!("{}*{base}*(1+t)", c)).unwrap();
            let v_lo = lyapunov_check_linear(&lo, &cfg()).unwrap().verdict;
            let v_hi = lyapunov_check_linear(&hi, &cfg()).unwrap().verdict;
            prop_assert!(!(v_lo == Verdict::NecessaryConditionHolds && v_hi == Verdict::NontrivialSolutionExcluded));
        }
    }
}
