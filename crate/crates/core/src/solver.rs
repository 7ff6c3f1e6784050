//! Fixed-point solutions of `u = ∫ G(t,s) q(s) f(u(s)) ds` and Dirichlet
//! eigenpairs `D^(α,γ) u + λu = 0` on `[0, 1]`.

use serde::Serialize;
use thiserror::Error;

use crate::analysis::{AnalysisError, ProblemSpec};
use crate::fracops::{apply_hilfer_series, eval_series, FracError, PowerTerm};
use crate::green::pow_nonneg;
use crate::quadrature::{composite_rule, integrate_pair, QuadError};
use crate::specfun::{ml_roots, ml_series, RootList, ScanWarning, SpecFnError, DEFAULT_MAX_TERMS};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error(transparent)]
    SpecialFunction(#[from] SpecFnError),
    #[error(transparent)]
    Operator(#[from] FracError),
    #[error("Picard iteration diverged after {} sweeps (sup norm {:e})", .last.iterations, .last.norm)]
    Diverged { last: Box<SolutionGrid> },
    #[error("invalid option: {0}")]
    InvalidOption(String),
}

/// Sampled solution together with its fixed-point diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolutionGrid {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub iterations: usize,
    /// `sup_i |u_i − (T_h u)_i|` for the discrete operator `T_h`.
    pub residual_sup: f64,
    pub converged: bool,
    /// `sup_i |u_i|`.
    pub norm: f64,
}

impl SolutionGrid {
    /// Wraps externally computed samples (no iteration history).
    pub fn from_samples(grid: Vec<f64>, values: Vec<f64>) -> Result<Self, SolverError> {
        if grid.len() < 2 || grid.len() != values.len() || grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(SolverError::InvalidOption(
                "samples need a strictly increasing grid of matching length".into(),
            ));
        }
        let norm = sup_abs(&values);
        Ok(SolutionGrid {
            grid,
            values,
            iterations: 0,
            residual_sup: f64::NAN,
            converged: false,
            norm,
        })
    }

    /// Interpolant `((t−a)/(b−a))^(γ−1) · w(t)` with `w` piecewise linear
    /// through `u_i / ((t_i−a)/(b−a))^(γ−1)`, which respects the boundary
    /// behaviour at `a`.
    pub fn interpolant(&self, gamma_type: f64) -> impl Fn(f64) -> f64 + '_ {
        let a = self.grid[0];
        let b = self.grid[self.grid.len() - 1];
        let p = gamma_type - 1.0;
        let weight = move |t: f64| pow_nonneg((t - a) / (b - a), p);
        let mut w: Vec<f64> = self
            .grid
            .iter()
            .zip(&self.values)
            .map(|(&t, &u)| if t > a { u / weight(t) } else { 0.0 })
            .collect();
        w[0] = w[1];
        move |t: f64| {
            let n = self.grid.len();
            let t = t.clamp(a, b);
            let i = (self.grid.partition_point(|&g| g <= t).max(1) - 1).min(n - 2);
            let (x0, x1) = (self.grid[i], self.grid[i + 1]);
            let s = (t - x0) / (x1 - x0);
            weight(t) * (w[i] * (1.0 - s) + w[i + 1] * s)
        }
    }
}

fn sup_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PicardOptions {
    /// Number of grid intervals.
    pub n_grid: usize,
    /// Grid points `a + (b−a)(i/n)^grid_power`.
    pub grid_power: f64,
    /// Constant initial guess on the interior.
    pub u0: f64,
    /// Stop when successive iterates differ by at most `tol` in sup norm.
    pub tol: f64,
    pub max_iter: usize,
    /// Sup norm beyond which the iteration counts as divergent.
    pub ceiling: f64,
}

impl Default for PicardOptions {
    fn default() -> Self {
        PicardOptions {
            n_grid: 300,
            grid_power: 1.5,
            u0: 0.0,
            tol: 1e-12,
            max_iter: 500,
            ceiling: 1e8,
        }
    }
}

/// Product-integration discretization of `T`:
/// `(T u)(t_i) = [x_i^(γ−1) Σ_j B_j f(u_j) − Σ_j W_ij f(u_j)] / Γ(α)` where
/// `B_j = ∫ (b−s)^(α−1) q φ_j`, `W_ij = ∫_a^(t_i) (t_i−s)^(α−1) q φ_j` and
/// `φ_j` are the hat functions of the grid.
#[derive(Debug, Clone)]
pub struct NystromOperator {
    grid: Vec<f64>,
    x_pow: Vec<f64>,
    boundary: Vec<f64>,
    rows: Vec<Vec<f64>>,
    inv_gamma_alpha: f64,
}

impl NystromOperator {
    pub fn new(spec: &ProblemSpec, n_grid: usize, grid_power: f64) -> Result<Self, SolverError> {
        if n_grid < 4 {
            return Err(SolverError::InvalidOption(format!(
                "n_grid must be at least 4, got {n_grid}"
            )));
        }
        if !(grid_power >= 1.0) {
            return Err(SolverError::InvalidOption(format!(
                "grid_power must be >= 1, got {grid_power}"
            )));
        }
        let (a, b) = (spec.a(), spec.b());
        let am1 = spec.alpha() - 1.0;
        let grid: Vec<f64> = (0..=n_grid)
            .map(|i| match i {
                0 => a,
                i if i == n_grid => b,
                i => a + (b - a) * (i as f64 / n_grid as f64).powf(grid_power),
            })
            .collect();

        // q at the nodes of each cell, graded towards a on the first cell
        struct Cell {
            nodes: Vec<(f64, f64)>,
            q: Vec<f64>,
        }
        let mut cells = Vec::with_capacity(n_grid);
        for k in 0..n_grid {
            let sing: &[f64] = if k == 0 { &[a] } else { &[] };
            let nodes = composite_rule(grid[k], grid[k + 1], &[], sing, 0);
            let q = nodes
                .iter()
                .map(|&(s, _)| spec.q(s))
                .collect::<Result<Vec<_>, _>>()?;
            cells.push(Cell { nodes, q });
        }

        // weights of the two hats living on cell k for the kernel (t−s)^(α−1)
        let cell_weights = |k: usize, t: f64| -> Result<(f64, f64), SolverError> {
            let (x0, x1) = (grid[k], grid[k + 1]);
            let h = x1 - x0;
            let mut acc = (0.0, 0.0);
            let mut add = |s: f64, w: f64, qv: f64| {
                let kern = pow_nonneg(t - s, am1) * qv * w;
                let r = (s - x0) / h;
                acc.0 += kern * (1.0 - r);
                acc.1 += kern * r;
            };
            if (t - x1).abs() <= 0.0 {
                // kernel singular at the right end of this cell
                let sing: Vec<f64> = if k == 0 { vec![x0, x1] } else { vec![x1] };
                for (s, w) in composite_rule(x0, x1, &[], &sing, 0) {
                    add(s, w, spec.q(s)?);
                }
            } else {
                let c = &cells[k];
                for (&(s, w), &qv) in c.nodes.iter().zip(&c.q) {
                    add(s, w, qv);
                }
            }
            Ok(acc)
        };

        let row_for = |i: usize| -> Result<Vec<f64>, SolverError> {
            let t = grid[i];
            let mut row = vec![0.0; n_grid + 1];
            for k in 0..i {
                let (w0, w1) = cell_weights(k, t)?;
                row[k] += w0;
                row[k + 1] += w1;
            }
            Ok(row)
        };
        let rows = (0..=n_grid).map(row_for).collect::<Result<Vec<_>, _>>()?;
        let boundary = rows[n_grid].clone();
        let x_pow = grid
            .iter()
            .map(|&t| pow_nonneg((t - a) / (b - a), spec.gamma() - 1.0))
            .collect();
        Ok(NystromOperator {
            grid,
            x_pow,
            boundary,
            rows,
            inv_gamma_alpha: spec.kernel().inv_gamma_alpha(),
        })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    /// `(T_h)` applied to nodal values `g_j = f(u_j)`; exact zeros at both ends.
    pub fn apply(&self, g: &[f64]) -> Vec<f64> {
        let n = self.grid.len();
        let bg: f64 = self.boundary.iter().zip(g).map(|(w, v)| w * v).sum();
        let mut out: Vec<f64> = (0..n)
            .map(|i| {
                let wg: f64 = self.rows[i].iter().zip(g).map(|(w, v)| w * v).sum();
                (self.x_pow[i] * bg - wg) * self.inv_gamma_alpha
            })
            .collect();
        out[0] = 0.0;
        out[n - 1] = 0.0;
        out
    }

    /// Largest |eigenvalue| of the linear map `g ↦ T_h g` by power iteration.
    pub fn spectral_radius(&self, iterations: usize) -> f64 {
        let n = self.grid.len();
        let mut v: Vec<f64> = (0..n).map(|i| 1.0 + (i % 7) as f64 * 0.1).collect();
        let mut rho = 0.0;
        for _ in 0..iterations {
            let w = self.apply(&v);
            let norm = sup_abs(&w);
            if norm == 0.0 {
                return 0.0;
            }
            rho = norm / sup_abs(&v);
            v = w.into_iter().map(|x| x / norm).collect();
        }
        rho
    }
}

/// Successive approximation `u_{k+1} = T_h u_k`.
///
/// Hitting `max_iter` is reported through `converged = false`; a sup norm
/// beyond `ceiling` (or a non-finite iterate) returns [`SolverError::Diverged`]
/// carrying the last iterate.
pub fn picard_solve(spec: &ProblemSpec, opts: &PicardOptions) -> Result<SolutionGrid, SolverError> {
    if !(opts.tol > 0.0) || opts.max_iter == 0 || !(opts.ceiling > 0.0) || !opts.u0.is_finite() {
        return Err(SolverError::InvalidOption(
            "need tol > 0, max_iter > 0, ceiling > 0 and a finite u0".into(),
        ));
    }
    let op = NystromOperator::new(spec, opts.n_grid, opts.grid_power)?;
    picard_with(spec, &op, opts)
}

/// [`picard_solve`] with a prebuilt operator.
pub fn picard_with(
    spec: &ProblemSpec,
    op: &NystromOperator,
    opts: &PicardOptions,
) -> Result<SolutionGrid, SolverError> {
    let n = op.grid.len();
    let f_of = |u: &[f64]| -> Result<Vec<f64>, SolverError> {
        u.iter().map(|&x| spec.f(x).map_err(SolverError::from)).collect()
    };
    let mut u = vec![opts.u0; n];
    u[0] = 0.0;
    u[n - 1] = 0.0;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iter {
        let next = op.apply(&f_of(&u)?);
        iterations += 1;
        let diff = u.iter().zip(&next).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        u = next;
        let norm = sup_abs(&u);
        if !norm.is_finite() || norm > opts.ceiling {
            return Err(SolverError::Diverged {
                last: Box::new(SolutionGrid {
                    grid: op.grid.clone(),
                    values: u,
                    iterations,
                    residual_sup: f64::INFINITY,
                    converged: false,
                    norm,
                }),
            });
        }
        if diff <= opts.tol {
            converged = true;
            break;
        }
    }
    let image = op.apply(&f_of(&u)?);
    let residual_sup = u
        .iter()
        .zip(&image)
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    let norm = sup_abs(&u);
    Ok(SolutionGrid {
        grid: op.grid.clone(),
        values: u,
        iterations,
        residual_sup,
        converged,
        norm,
    })
}

/// `sup |ũ(t) − (T ũ)(t)|` over the grid points and cell midpoints, where `ũ`
/// is [`SolutionGrid::interpolant`] and `T ũ` is integrated directly against
/// the Green kernel with graded quadrature (breakpoints at every node).
pub fn residual_certify(spec: &ProblemSpec, sol: &SolutionGrid) -> Result<f64, SolverError> {
    let (a, b) = (spec.a(), spec.b());
    if (sol.grid[0] - a).abs() > 1e-12 * (b - a) || (sol.grid[sol.grid.len() - 1] - b).abs() > 1e-12 * (b - a)
    {
        return Err(SolverError::InvalidOption(
            "solution grid does not span [a, b]".into(),
        ));
    }
    let u = sol.interpolant(spec.gamma());
    let k = spec.kernel();
    let mut points = Vec::with_capacity(2 * sol.grid.len());
    for w in sol.grid.windows(2) {
        points.push(w[0]);
        points.push(0.5 * (w[0] + w[1]));
    }
    points.push(b);
    let breaks = &sol.grid[1..sol.grid.len() - 1];
    // q·f(ũ) does not depend on t
    let src = |s: f64| -> Result<f64, QuadError> {
        let qv = spec.q(s).map_err(|e| QuadError::Integrand(e.to_string()))?;
        let fv = spec.f(u(s)).map_err(|e| QuadError::Integrand(e.to_string()))?;
        Ok(qv * fv)
    };
    let mut worst = 0.0f64;
    for &t in &points {
        let image = integrate_pair(|s| Ok(k.eval(t, s) * src(s)?), a, b, breaks, &[a, t, b], 0)?;
        worst = worst.max((image.value - u(t)).abs());
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenOptions {
    /// Target accuracy for the roots and the series truncation.
    pub tol: f64,
    /// Upper end of the λ scan.
    pub lambda_max: f64,
    pub n_scan: usize,
    /// Residuals are measured on `[delta, 1]`.
    pub delta: f64,
    /// Lower limit on the series length.
    pub min_terms: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions {
            tol: 1e-10,
            lambda_max: 120.0,
            n_scan: 4000,
            delta: 1e-3,
            min_terms: 60,
        }
    }
}

/// `λ` with eigenfunction `u(t) = c·t^(γ−1) E_{α,γ}(−λ t^α)` on `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenPair {
    pub lambda: f64,
    /// Power series of `u`, already scaled to sup norm 1.
    pub terms: Vec<PowerTerm>,
    pub series_length: usize,
    /// Scale `c` applied to `t^(γ−1) E_{α,γ}(−λ t^α)`.
    pub scale: f64,
    /// `sup_{[δ,1]} |D^(α,γ) u + λ u|` from the termwise derivative.
    pub derivative_residual: f64,
    pub value_at_zero: f64,
    pub value_at_one: f64,
}

impl EigenPair {
    pub fn eval(&self, t: f64) -> f64 {
        eval_series(&self.terms, t)
    }

    /// The eigenfunction on `n + 1` uniform points of `[0, 1]`.
    pub fn sample(&self, n: usize) -> SolutionGrid {
        let grid: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
        let values: Vec<f64> = grid.iter().map(|&t| self.eval(t)).collect();
        let norm = sup_abs(&values);
        SolutionGrid {
            grid,
            values,
            iterations: 0,
            residual_sup: f64::NAN,
            converged: true,
            norm,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenReport {
    pub pairs: Vec<EigenPair>,
    pub roots: RootList,
    /// Set when fewer than the requested number of eigenpairs were found.
    pub notice: Option<String>,
}

/// Terms `c·(−λ)^k t^(γ−1+αk)/Γ(αk+γ)` for `k < n`.
pub fn eigen_series(
    alpha: f64,
    gamma_type: f64,
    lambda: f64,
    n: usize,
    scale: f64,
) -> Result<Vec<PowerTerm>, SolverError> {
    (0..n)
        .map(|k| {
            let nu = gamma_type + alpha * k as f64;
            let c = scale * (-lambda).powi(k as i32) * crate::specfun::recip_gamma(nu);
            Ok(PowerTerm::new(c, nu, 0.0)?)
        })
        .collect()
}

/// The first `k_max` Dirichlet eigenpairs on `[0, 1]`.
pub fn eigen_solve(
    alpha: f64,
    gamma_type: f64,
    k_max: usize,
    opts: &EigenOptions,
) -> Result<EigenReport, SolverError> {
    if !(opts.tol > 0.0) || !(opts.delta > 0.0 && opts.delta < 1.0) {
        return Err(SolverError::InvalidOption(
            "need tol > 0 and 0 < delta < 1".into(),
        ));
    }
    let roots = ml_roots(
        alpha,
        gamma_type,
        opts.lambda_max,
        opts.n_scan,
        opts.tol.min(1e-12),
    )?;
    let mut pairs = Vec::new();
    for &lambda in roots.lambdas().iter().take(k_max) {
        pairs.push(eigenpair(alpha, gamma_type, lambda, opts)?);
    }
    let notice = (pairs.len() < k_max).then(|| {
        let precision = roots
            .warnings
            .iter()
            .any(|w| matches!(w, ScanWarning::PrecisionLoss { .. }));
        format!(
            "found {} of {} eigenvalues in (0, {}]{}",
            pairs.len(),
            k_max,
            opts.lambda_max,
            if precision {
                "; the scan lost precision, increase accuracy or narrow the range"
            } else {
                ""
            }
        )
    });
    Ok(EigenReport { pairs, roots, notice })
}

/// Builds the eigenpair for a known root `lambda`.
pub fn eigenpair(
    alpha: f64,
    gamma_type: f64,
    lambda: f64,
    opts: &EigenOptions,
) -> Result<EigenPair, SolverError> {
    let tail = ml_series(alpha, gamma_type, -lambda, opts.tol / 10.0, DEFAULT_MAX_TERMS)?;
    let n = tail.terms_used.max(opts.min_terms) + 1;
    let raw = eigen_series(alpha, gamma_type, lambda, n, 1.0)?;
    let samples = 2000;
    let (mut peak, mut peak_val) = (0.0f64, 0.0);
    for i in 0..=samples {
        let v = eval_series(&raw, i as f64 / samples as f64);
        if v.abs() > peak {
            peak = v.abs();
            peak_val = v;
        }
    }
    let scale = 1.0 / peak_val;
    let terms = eigen_series(alpha, gamma_type, lambda, n, scale)?;
    let image = apply_hilfer_series(&terms, alpha, gamma_type)?;
    let mut residual = 0.0f64;
    for i in 0..=samples {
        let t = opts.delta + (1.0 - opts.delta) * i as f64 / samples as f64;
        residual = residual.max((eval_series(&image, t) + lambda * eval_series(&terms, t)).abs());
    }
    Ok(EigenPair {
        lambda,
        series_length: terms.len(),
        value_at_zero: eval_series(&terms, 0.0),
        value_at_one: eval_series(&terms, 1.0),
        terms,
        scale,
        derivative_residual: residual,
    })
}

/// `u(t) = c1·t^(γ−2) E_{α,γ−1}(−λt^α) + c2·t^(γ−1) E_{α,γ}(−λt^α)`.
///
/// The condition `u(0) = 0` forces `c1 = 0`; the first branch is kept so the
/// structure of the general solution can be inspected.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeneralSolution {
    pub alpha: f64,
    pub gamma: f64,
    pub lambda: f64,
    pub c1: f64,
    pub c2: f64,
}

impl GeneralSolution {
    /// The Dirichlet solution at the left end: `c1 = 0`.
    pub fn dirichlet(alpha: f64, gamma_type: f64, lambda: f64, c2: f64) -> Self {
        GeneralSolution {
            alpha,
            gamma: gamma_type,
            lambda,
            c1: 0.0,
            c2,
        }
    }

    /// Power series of the two branches, `n` terms each.
    pub fn branches(&self, n: usize) -> Result<(Vec<PowerTerm>, Vec<PowerTerm>), SolverError> {
        let first = (0..n)
            .map(|k| {
                let nu = self.gamma - 1.0 + self.alpha * k as f64;
                let c = self.c1 * (-self.lambda).powi(k as i32) * crate::specfun::recip_gamma(nu);
                Ok(PowerTerm::new(c, nu, 0.0)?)
            })
            .collect::<Result<Vec<_>, SolverError>>()?;
        let second = eigen_series(self.alpha, self.gamma, self.lambda, n, self.c2)?;
        Ok((first, second))
    }

    /// `u(0)`: infinite for `c1 ≠ 0, γ < 2`, `c1/Γ(1)` for `γ = 2`, else 0.
    pub fn value_at_zero(&self) -> f64 {
        if self.c1 == 0.0 {
            0.0
        } else if self.gamma < 2.0 {
            f64::INFINITY.copysign(self.c1)
        } else {
            self.c1
        }
    }

    pub fn eval(&self, t: f64, n: usize) -> Result<f64, SolverError> {
        let (first, second) = self.branches(n)?;
        Ok(eval_series(&first, t) + eval_series(&second, t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::eigen_lower_bound_lyapunov;
    use crate::specfun::gamma;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn zero_coefficient_gives_zero_in_one_sweep() {
        let spec = ProblemSpec::parse(0.0, 1.0, 1.75, 2.0, "0", "cosh(u)").unwrap();
        let sol = picard_solve(&spec, &PicardOptions::default()).unwrap();
        assert_eq!(sol.iterations, 1);
        assert!(sol.converged);
        assert!(sol.values.iter().all(|&v| v == 0.0));
        assert_eq!(residual_certify(&spec, &sol).unwrap(), 0.0);
    }

    #[test]
    fn classical_constant_load() {
        // −u'' = 1: u = t(1−t)/2
        let spec = ProblemSpec::parse(0.0, 1.0, 2.0, 2.0, "1", "1").unwrap();
        let sol = picard_solve(&spec, &PicardOptions::default()).unwrap();
        for (&t, &u) in sol.grid.iter().zip(&sol.values) {
            assert!((u - t * (1.0 - t) / 2.0).abs() < 1e-13, "t={t}");
        }
    }

    #[test]
    fn riemann_liouville_constant_load() {
        // D^α u = −1 with u(0)=u(1)=0: u = (t^(α−1) − t^α)/Γ(α+1)
        let al = 1.5;
        let spec = ProblemSpec::parse(0.0, 1.0, al, al, "1", "1").unwrap();
        let sol = picard_solve(&spec, &PicardOptions::default()).unwrap();
        let g = gamma(al + 1.0).unwrap();
        for (&t, &u) in sol.grid.iter().zip(&sol.values) {
            let exact = (t.powf(al - 1.0) - t.powf(al)) / g;
            assert!((u - exact).abs() < 1e-12, "t={t}: {u} vs {exact}");
        }
    }

    #[test]
    fn subcritical_linear_problem_contracts_to_zero() {
        let al = 1.6;
        let lam = 0.8 * eigen_lower_bound_lyapunov(al, al).unwrap();
        let spec = ProblemSpec::linear(0.0, 1.0, al, al, &format!("{lam}")).unwrap();
        let op = NystromOperator::new(&spec, 120, 1.5).unwrap();
        assert!(op.spectral_radius(200) < 1.0);
        let opts = PicardOptions {
            n_grid: 120,
            u0: 0.01,
            max_iter: 2000,
            ..PicardOptions::default()
        };
        let sol = picard_with(&spec, &op, &opts).unwrap();
        assert!(sol.converged);
        assert!(sol.norm < 1e-10);
    }

    #[test]
    fn divergence_is_reported_with_last_iterate() {
        let spec = ProblemSpec::parse(0.0, 1.0, 2.0, 2.0, "50", "u").unwrap();
        let opts = PicardOptions {
            u0: 1.0,
            ceiling: 1e3,
            ..PicardOptions::default()
        };
        match picard_solve(&spec, &opts) {
            Err(SolverError::Diverged { last }) => assert!(last.norm > 1e3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn iteration_budget_is_not_an_error() {
        let spec = ProblemSpec::parse(0.0, 1.0, 2.0, 2.0, "9", "u").unwrap();
        let opts = PicardOptions {
            u0: 0.1,
            max_iter: 3,
            ..PicardOptions::default()
        };
        let sol = picard_solve(&spec, &opts).unwrap();
        assert!(!sol.converged);
        assert_eq!(sol.iterations, 3);
    }

    #[test]
    fn classical_eigenpairs() {
        let report = eigen_solve(2.0, 2.0, 3, &EigenOptions::default()).unwrap();
        assert!(report.notice.is_none());
        for (k, pair) in report.pairs.iter().enumerate() {
            let lam = (PI * (k + 1) as f64).powi(2);
            assert!((pair.lambda - lam).abs() < 1e-9);
            // sin(kπt) up to sign, sup norm 1
            for i in 0..=50 {
                let t = i as f64 / 50.0;
                let s = (PI * (k + 1) as f64 * t).sin();
                assert!((pair.eval(t).abs() - s.abs()).abs() < 1e-8, "k={k} t={t}");
            }
            assert!(pair.value_at_one.abs() < 1e-8);
            assert_eq!(pair.value_at_zero, 0.0);
        }
    }

    #[test]
    fn missing_eigenvalues_are_noticed() {
        let opts = EigenOptions {
            lambda_max: 20.0,
            ..EigenOptions::default()
        };
        let report = eigen_solve(2.0, 2.0, 3, &opts).unwrap();
        assert_eq!(report.pairs.len(), 1);
        assert!(report.notice.is_some());
    }

    #[test]
    fn dormant_branch() {
        let g = GeneralSolution::dirichlet(1.75, 2.0, 9.0, 1.0);
        assert_eq!(g.value_at_zero(), 0.0);
        let with_c1 = GeneralSolution { c1: 0.5, ..g };
        assert_eq!(with_c1.value_at_zero(), 0.5);
        let rl = GeneralSolution {
            gamma: 1.75,
            alpha: 1.75,
            ..with_c1
        };
        assert!(rl.value_at_zero().is_infinite());
        // both branches solve the equation for γ = 2
        let (first, _) = with_c1.branches(80).unwrap();
        let image = apply_hilfer_series(&first, 1.75, 2.0).unwrap();
        for t in [0.1, 0.5, 0.9] {
            assert!((eval_series(&image, t) + 9.0 * eval_series(&first, t)).abs() < 1e-10);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn iterates_stay_in_the_cone(al in 1.1f64..2.0, c in 0.1f64..3.0, u0 in 0.0f64..0.5) {
            let spec = ProblemSpec::parse(0.0, 1.0, al, al, &format!("{c}*(1+t)"), "exp(-1/(u+1))").unwrap();
            let op = NystromOperator::new(&spec, 60, 1.5).unwrap();
            let mut u = vec![u0; op.grid().len()];
            for _ in 0..5 {
                let g: Vec<f64> = u.iter().map(|&x| spec.f(x).unwrap()).collect();
                u = op.apply(&g);
                prop_assert!(u.iter().all(|&x| x >= 0.0));
                prop_assert!(u[0] == 0.0 && u[u.len() - 1] == 0.0);
            }
        }

        #[test]
        fn monotone_start(al in 1.1f64..2.0, c in 0.1f64..3.0) {
            let spec = ProblemSpec::parse(0.0, 1.0, al, al, &format!("{c}"), "1 + u").unwrap();
            let op = NystromOperator::new(&spec, 60, 1.5).unwrap();
            let u0 = vec![0.0; op.grid().len()];
            let f = |u: &[f64]| u.iter().map(|&x| spec.f(x).unwrap()).collect::<Vec<_>>();
            let u1 = op.apply(&f(&u0));
            let u2 = op.apply(&f(&u1));
            for i in 0..u0.len() {
                prop_assert!(u1[i] >= u0[i] - 1e-15 && u2[i] >= u1[i] - 1e-15);
            }
        }
    }
}
