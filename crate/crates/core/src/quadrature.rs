//! Composite Gauss-Legendre quadrature on graded meshes, plus the two
//! derivative-free 1-D solvers used throughout (golden section, bisection).

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

const GL_POINTS: usize = 20;
// Geometric grading towards an algebraic endpoint singularity.
const GRADING_RATIO: f64 = 0.15;
const GRADING_LEVELS: i32 = 36;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("quadrature did not reach tolerance {tol:e} (estimate {estimate:e}) at depth {depth}")]
    NotConverged { estimate: f64, tol: f64, depth: u32 },
    #[error("integrand is not finite at x={x}")]
    NonFinite { x: f64 },
    #[error("integrand failed: {0}")]
    Integrand(String),
    #[error("invalid interval [{lo}, {hi}]")]
    BadInterval { lo: f64, hi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureConfig {
    /// Accept when successive refinements agree to `tol·max(1, |I|)`.
    pub tol: f64,
    /// Each level halves every panel.
    pub max_depth: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            tol: 1e-10,
            max_depth: 8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub depth: u32,
}

struct Rule {
    nodes: [f64; GL_POINTS],
    weights: [f64; GL_POINTS],
}

fn legendre_rule() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_POINTS;
        let mut nodes = [0.0; GL_POINTS];
        let mut weights = [0.0; GL_POINTS];
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let k = k as f64;
                    let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Rule { nodes, weights }
    })
}

fn push_panel(out: &mut Vec<(f64, f64)>, lo: f64, hi: f64) {
    let rule = legendre_rule();
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    for (x, w) in rule.nodes.iter().zip(rule.weights.iter()) {
        out.push((mid + half * x, half * w));
    }
}

// Cells narrower than this would put Gauss nodes onto the singular point itself.
fn min_cell(point: f64) -> f64 {
    1e-13 * point.abs()
}

fn push_graded(out: &mut Vec<(f64, f64)>, lo: f64, hi: f64, grade_lo: bool, grade_hi: bool) {
    match (grade_lo, grade_hi) {
        (false, false) => push_panel(out, lo, hi),
        (true, true) => {
            let mid = 0.5 * (lo + hi);
            push_graded(out, lo, mid, true, false);
            push_graded(out, mid, hi, false, true);
        }
        (true, false) => {
            let h = hi - lo;
            let floor = min_cell(lo);
            let mut left = lo;
            for k in (1..=GRADING_LEVELS).rev() {
                if h * GRADING_RATIO.powi(k) < floor {
                    continue;
                }
                let right = lo + h * GRADING_RATIO.powi(k);
                push_panel(out, left, right);
                left = right;
            }
            push_panel(out, left, hi);
        }
        (false, true) => {
            let h = hi - lo;
            let floor = min_cell(hi);
            let mut right = hi;
            for k in (1..=GRADING_LEVELS).rev() {
                if h * GRADING_RATIO.powi(k) < floor {
                    continue;
                }
                let left = hi - h * GRADING_RATIO.powi(k);
                push_panel(out, left, right);
                right = left;
            }
            push_panel(out, lo, right);
        }
    }
}

fn is_near(x: f64, points: &[f64], scale: f64) -> bool {
    points.iter().any(|&p| (x - p).abs() <= 1e-14 * scale)
}

/// Nodes and weights of a composite rule on `[lo, hi]`.
///
/// The interval is split at `breakpoints` and at `singular` points, each
/// piece is halved `depth` times, and pieces touching a singular point are
/// refined geometrically towards it. Grading stops at cells of relative width
/// 1e-13 around a nonzero point, so integrable blow-ups (negative exponents)
/// are only resolved to full accuracy at the origin.
pub fn composite_rule(
    lo: f64,
    hi: f64,
    breakpoints: &[f64],
    singular: &[f64],
    depth: u32,
) -> Vec<(f64, f64)> {
    let scale = (hi - lo).abs().max(lo.abs()).max(hi.abs()).max(1.0);
    let mut edges: Vec<f64> = vec![lo, hi];
    edges.extend(
        breakpoints
            .iter()
            .chain(singular.iter())
            .copied()
            .filter(|&x| x > lo && x < hi),
    );
    edges.sort_by(|a, b| a.total_cmp(b));
    edges.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * scale);

    let pieces = 1usize << depth;
    let mut out = Vec::new();
    for w in edges.windows(2) {
        let (c0, c1) = (w[0], w[1]);
        let sing_lo = is_near(c0, singular, scale);
        let sing_hi = is_near(c1, singular, scale);
        let step = (c1 - c0) / pieces as f64;
        for j in 0..pieces {
            let p0 = if j == 0 { c0 } else { c0 + step * j as f64 };
            let p1 = if j + 1 == pieces {
                c1
            } else {
                c0 + step * (j + 1) as f64
            };
            push_graded(&mut out, p0, p1, sing_lo && j == 0, sing_hi && j + 1 == pieces);
        }
    }
    out
}

fn apply<F>(f: &mut F, rule: &[(f64, f64)]) -> Result<f64, QuadError>
where
    F: FnMut(f64) -> Result<f64, QuadError>,
{
    let mut sum = 0.0;
    for &(x, w) in rule {
        let v = f(x)?;
        if !v.is_finite() {
            return Err(QuadError::NonFinite { x });
        }
        sum += w * v;
    }
    Ok(sum)
}

/// ∫_lo^hi f with automatic refinement until two successive depths agree.
pub fn integrate<F>(
    mut f: F,
    lo: f64,
    hi: f64,
    breakpoints: &[f64],
    singular: &[f64],
    cfg: &QuadratureConfig,
) -> Result<QuadResult, QuadError>
where
    F: FnMut(f64) -> Result<f64, QuadError>,
{
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(QuadError::BadInterval { lo, hi });
    }
    if lo == hi {
        return Ok(QuadResult {
            value: 0.0,
            error_estimate: 0.0,
            depth: 0,
        });
    }
    let mut prev = apply(&mut f, &composite_rule(lo, hi, breakpoints, singular, 0))?;
    let mut estimate = f64::INFINITY;
    for depth in 1..=cfg.max_depth {
        let cur = apply(&mut f, &composite_rule(lo, hi, breakpoints, singular, depth))?;
        estimate = (cur - prev).abs();
        if estimate <= cfg.tol * cur.abs().max(1.0) {
            return Ok(QuadResult {
                value: cur,
                error_estimate: estimate,
                depth,
            });
        }
        prev = cur;
    }
    Err(QuadError::NotConverged {
        estimate,
        tol: cfg.tol,
        depth: cfg.max_depth,
    })
}

/// Fixed two-level evaluation: the value at `depth + 1` and its difference
/// from the value at `depth`, with no tolerance test.
pub fn integrate_pair<F>(
    mut f: F,
    lo: f64,
    hi: f64,
    breakpoints: &[f64],
    singular: &[f64],
    depth: u32,
) -> Result<QuadResult, QuadError>
where
    F: FnMut(f64) -> Result<f64, QuadError>,
{
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(QuadError::BadInterval { lo, hi });
    }
    let coarse = apply(&mut f, &composite_rule(lo, hi, breakpoints, singular, depth))?;
    let fine = apply(&mut f, &composite_rule(lo, hi, breakpoints, singular, depth + 1))?;
    Ok(QuadResult {
        value: fine,
        error_estimate: (fine - coarse).abs(),
        depth: depth + 1,
    })
}

/// [`integrate`] for integrands that cannot fail.
pub fn integrate_fn(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    breakpoints: &[f64],
    singular: &[f64],
    cfg: &QuadratureConfig,
) -> Result<QuadResult, QuadError> {
    integrate(|x| Ok(f(x)), lo, hi, breakpoints, singular, cfg)
}

/// Maximizer of a unimodal function on `[lo, hi]` by golden-section search.
pub fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..300 {
        if hi - lo <= tol {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    let x = 0.5 * (lo + hi);
    let fx = f(x);
    [(x1, f1), (x2, f2), (x, fx)]
        .into_iter()
        .fold((x, fx), |best, c| if c.1 > best.1 { c } else { best })
}

/// Root of `f` in `[lo, hi]` by bisection; `None` without a sign change.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Option<f64> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Some(lo);
    }
    if f_hi == 0.0 {
        return Some(hi);
    }
    if (f_lo < 0.0) == (f_hi < 0.0) || f_lo.is_nan() || f_hi.is_nan() {
        return None;
    }
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if (fm < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_integrates_polynomials_exactly() {
        let rule = composite_rule(-1.0, 1.0, &[], &[], 0);
        assert_eq!(rule.len(), GL_POINTS);
        let total: f64 = rule.iter().map(|(_, w)| w).sum();
        assert!((total - 2.0).abs() < 1e-14);
        let x38: f64 = rule.iter().map(|(x, w)| w * x.powi(38)).sum();
        assert!((x38 - 2.0 / 39.0).abs() < 1e-14);
    }

    #[test]
    fn endpoint_singularity_is_absorbed() {
        let cfg = QuadratureConfig::default();
        let r = integrate_fn(|x| x.powf(-0.5), 0.0, 1.0, &[], &[0.0], &cfg).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12, "{r:?}");
        // Beta(3/4, 3/2), algebraic behaviour at both ends
        let r = integrate_fn(
            |x| x.powf(-0.25) * (1.0 - x).powf(0.5),
            0.0,
            1.0,
            &[],
            &[0.0, 1.0],
            &cfg,
        )
        .unwrap();
        assert!((r.value - 0.958_512_187_788_473_8).abs() < 1e-11, "{r:?}");
    }

    #[test]
    fn kinks_at_breakpoints() {
        let cfg = QuadratureConfig::default();
        let r = integrate_fn(|x| (x - 0.3).abs(), 0.0, 1.0, &[0.3], &[], &cfg).unwrap();
        assert!((r.value - 0.29).abs() < 1e-14);
    }

    #[test]
    fn non_finite_integrand_is_reported() {
        let cfg = QuadratureConfig::default();
        let err = integrate_fn(|_| f64::NAN, 0.0, 1.0, &[], &[], &cfg).unwrap_err();
        assert!(matches!(err, QuadError::NonFinite { .. }));
    }

    #[test]
    fn golden_and_bisect() {
        let (x, fx) = golden_max(|s| s * (1.0 - s), 0.0, 1.0, 1e-12);
        assert!((x - 0.5).abs() < 1e-6 && (fx - 0.25).abs() < 1e-12);
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-10).is_none());
    }
}
