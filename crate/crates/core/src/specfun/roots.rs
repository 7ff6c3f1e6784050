use serde::Serialize;

use super::mittag_leffler::{ml_series, DEFAULT_MAX_TERMS};
use super::SpecFnError;

/// Default number of uniform scan intervals.
pub const DEFAULT_N_SCAN: usize = 2000;

// Magnitude below which two same-sign neighbours count as a possible double root.
const NEAR_ZERO: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Root {
    pub lambda: f64,
    /// Width of the final sign-change bracket around `lambda`.
    pub bracket_width: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScanWarning {
    /// Adjacent samples both nearly vanish without a sign change.
    PossibleTangency { lo: f64, hi: f64 },
    /// From `lambda` on, rounding error exceeds the sampled magnitude.
    PrecisionLoss { lambda: f64, rounding_bound: f64 },
}

/// Positive real roots of λ ↦ E_{α,γ}(−λ) located by a sign-change scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootList {
    pub roots: Vec<Root>,
    pub scan_range: (f64, f64),
    pub warnings: Vec<ScanWarning>,
}

impl RootList {
    pub fn lambdas(&self) -> Vec<f64> {
        self.roots.iter().map(|r| r.lambda).collect()
    }

    pub fn first(&self) -> Option<f64> {
        self.roots.first().map(|r| r.lambda)
    }
}

/// Checks `1 < α ≤ γ ≤ 2`, the regime of the Dirichlet eigenproblem.
pub fn check_order_and_type(alpha: f64, gamma: f64) -> Result<(), SpecFnError> {
    if alpha > 1.0 && alpha <= gamma && gamma <= 2.0 {
        Ok(())
    } else {
        Err(SpecFnError::InvalidArgument(format!(
            "need 1 < alpha <= gamma <= 2, got alpha={alpha}, gamma={gamma}"
        )))
    }
}

struct Sample {
    value: f64,
    rounding: f64,
}

fn sample(alpha: f64, gamma: f64, lambda: f64) -> Result<Sample, SpecFnError> {
    let v = ml_series(alpha, gamma, -lambda, 1e-17, DEFAULT_MAX_TERMS)?;
    Ok(Sample {
        value: v.value,
        rounding: v.rounding_bound,
    })
}

/// Roots of E_{α,γ}(−λ) in `(0, lambda_max]`.
///
/// The interval is sampled on `n_scan` uniform steps; every sign change is
/// refined by bisection until the bracket is narrower than `tol`. Same-sign
/// neighbours that both nearly vanish are reported as possible tangencies,
/// and the scan notes where cancellation makes signs untrustworthy.
pub fn ml_roots(
    alpha: f64,
    gamma: f64,
    lambda_max: f64,
    n_scan: usize,
    tol: f64,
) -> Result<RootList, SpecFnError> {
    check_order_and_type(alpha, gamma)?;
    if !(lambda_max > 0.0) || !lambda_max.is_finite() {
        return Err(SpecFnError::InvalidArgument(format!(
            "lambda_max must be positive, got {lambda_max}"
        )));
    }
    if n_scan < 2 {
        return Err(SpecFnError::InvalidArgument("n_scan must be at least 2".into()));
    }
    if !(tol > 0.0) {
        return Err(SpecFnError::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }

    let step = lambda_max / n_scan as f64;
    let mut roots = Vec::new();
    let mut warnings = Vec::new();
    let mut precision_flagged = false;

    let mut lo = 0.0;
    let mut prev = sample(alpha, gamma, 0.0)?;
    for i in 1..=n_scan {
        let hi = if i == n_scan { lambda_max } else { step * i as f64 };
        let cur = sample(alpha, gamma, hi)?;
        if !precision_flagged && cur.rounding >= cur.value.abs() {
            precision_flagged = true;
            warnings.push(ScanWarning::PrecisionLoss {
                lambda: hi,
                rounding_bound: cur.rounding,
            });
        }
        if cur.value == 0.0 {
            roots.push(Root {
                lambda: hi,
                bracket_width: 0.0,
            });
        } else if prev.value != 0.0 && (prev.value < 0.0) != (cur.value < 0.0) {
            roots.push(bisect(alpha, gamma, lo, hi, prev.value, tol)?);
        } else if prev.value.abs().max(cur.value.abs()) <= NEAR_ZERO.max(100.0 * cur.rounding) {
            warnings.push(ScanWarning::PossibleTangency { lo, hi });
        }
        lo = hi;
        prev = cur;
    }

    Ok(RootList {
        roots,
        scan_range: (0.0, lambda_max),
        warnings,
    })
}

fn bisect(
    alpha: f64,
    gamma: f64,
    mut lo: f64,
    mut hi: f64,
    f_lo: f64,
    tol: f64,
) -> Result<Root, SpecFnError> {
    let lo_negative = f_lo < 0.0;
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = sample(alpha, gamma, mid)?.value;
        if v == 0.0 {
            return Ok(Root {
                lambda: mid,
                bracket_width: 0.0,
            });
        }
        if (v < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Root {
        lambda: 0.5 * (lo + hi),
        bracket_width: hi - lo,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn classical_string_eigenvalues() {
        let list = ml_roots(2.0, 2.0, 120.0, 2000, 1e-12).unwrap();
        let got = list.lambdas();
        assert_eq!(got.len(), 3, "{list:?}");
        for (k, lam) in got.iter().enumerate() {
            let expected = (PI * (k + 1) as f64).powi(2);
            assert!((lam - expected).abs() < 1e-9, "{lam} vs {expected}");
        }
        assert!(list.roots.iter().all(|r| r.bracket_width <= 1e-12));
        assert!(list.warnings.is_empty());
    }

    #[test]
    fn figure_regime_has_roots() {
        let list = ml_roots(1.75, 2.0, 40.0, 2000, 1e-12).unwrap();
        assert!(!list.roots.is_empty());
        assert!(list.lambdas().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn parameter_checks() {
        assert!(ml_roots(0.9, 2.0, 10.0, 100, 1e-10).is_err());
        assert!(ml_roots(1.8, 1.5, 10.0, 100, 1e-10).is_err());
        assert!(ml_roots(1.5, 2.0, -1.0, 100, 1e-10).is_err());
        assert!(ml_roots(1.5, 2.0, 10.0, 1, 1e-10).is_err());
    }

    #[test]
    fn deep_scan_flags_precision_loss() {
        let list = ml_roots(1.5, 1.5, 3000.0, 200, 1e-8).unwrap();
        assert!(list
            .warnings
            .iter()
            .any(|w| matches!(w, ScanWarning::PrecisionLoss { .. })));
    }
}
