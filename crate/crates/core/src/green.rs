//! Green's function of the Dirichlet problem for `D^(α,γ) u + h = 0` on `[a, b]`.
//!
//! ```text
//! G(t,s) = [((t−a)/(b−a))^(γ−1) (b−s)^(α−1) − (t−s)^(α−1)·1{s≤t}] / Γ(α)
//! ```
//!
//! `G₊` and `G₋` denote the bracket without the `1/Γ(α)` factor on `s ≤ t`
//! and `t ≤ s` respectively.

use serde::Serialize;
use thiserror::Error;

use crate::quadrature::{bisect, golden_max};
use crate::specfun::gamma;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GreenError {
    #[error("invalid kernel parameters: {0}")]
    InvalidParameters(String),
    #[error("G+ at 3/4 and G- at 1/4 of the interval do not cross on ({lo}, {hi})")]
    NoCrossing { lo: f64, hi: f64 },
    #[error("the minorant is undefined at the endpoint s={0}")]
    Endpoint(f64),
    #[error("s={s} lies outside ({a}, {b})")]
    OutOfRange { s: f64, a: f64, b: f64 },
}

/// `x^p` with `x ≤ 0` mapped to exact zero (for `p > 0`).
pub(crate) fn pow_nonneg(x: f64, p: f64) -> f64 {
    if p == 0.0 {
        1.0
    } else if x <= 0.0 {
        0.0
    } else {
        x.powf(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GreenKernel {
    a: f64,
    b: f64,
    alpha: f64,
    gamma: f64,
    inv_gamma_alpha: f64,
}

/// Maximum of the diagonal `s ↦ G(s,s)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiagMax {
    /// Analytic maximizer `((γ−1)b + (α−1)a)/(γ+α−2)`.
    pub s_star: f64,
    /// `G(s_star, s_star)` by direct evaluation.
    pub value: f64,
    /// Maximizer found by golden-section search.
    pub golden_s: f64,
    pub golden_value: f64,
}

impl GreenKernel {
    pub fn new(a: f64, b: f64, alpha: f64, gamma_type: f64) -> Result<Self, GreenError> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(GreenError::InvalidParameters(format!(
                "need a < b, got a={a}, b={b}"
            )));
        }
        if !(alpha > 1.0 && alpha <= gamma_type && gamma_type <= 2.0) {
            return Err(GreenError::InvalidParameters(format!(
                "need 1 < alpha <= gamma <= 2, got alpha={alpha}, gamma={gamma_type}"
            )));
        }
        let g = gamma(alpha).map_err(|e| GreenError::InvalidParameters(e.to_string()))?;
        Ok(GreenKernel {
            a,
            b,
            alpha,
            gamma: gamma_type,
            inv_gamma_alpha: 1.0 / g,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn inv_gamma_alpha(&self) -> f64 {
        self.inv_gamma_alpha
    }

    /// `(3a+b)/4` and `(3b+a)/4`.
    pub fn quarter_window(&self) -> (f64, f64) {
        ((3.0 * self.a + self.b) / 4.0, (3.0 * self.b + self.a) / 4.0)
    }

    fn boundary_part(&self, t: f64, s: f64) -> f64 {
        pow_nonneg((t - self.a) / (self.b - self.a), self.gamma - 1.0)
            * pow_nonneg(self.b - s, self.alpha - 1.0)
    }

    /// Unnormalized branch for `s ≤ t`.
    pub fn g_plus(&self, t: f64, s: f64) -> f64 {
        self.boundary_part(t, s) - pow_nonneg(t - s, self.alpha - 1.0)
    }

    /// Unnormalized branch for `t ≤ s`.
    pub fn g_minus(&self, t: f64, s: f64) -> f64 {
        self.boundary_part(t, s)
    }

    pub fn eval(&self, t: f64, s: f64) -> f64 {
        let raw = if s <= t {
            self.g_plus(t, s)
        } else {
            self.g_minus(t, s)
        };
        raw * self.inv_gamma_alpha
    }

    /// `G(s, s)`.
    pub fn diagonal(&self, s: f64) -> f64 {
        self.boundary_part(s, s) * self.inv_gamma_alpha
    }

    /// The analytic maximizer of the diagonal.
    pub fn s_star(&self) -> f64 {
        ((self.gamma - 1.0) * self.b + (self.alpha - 1.0) * self.a) / (self.gamma + self.alpha - 2.0)
    }

    /// Closed form of `max G(s,s)` obtained by substituting `s_star`:
    /// `(α−1)^(α−1)(γ−1)^(γ−1)(b−a)^(α−1) / ((γ+α−2)^(γ+α−2) Γ(α))`.
    pub fn diag_max_closed_form(&self) -> f64 {
        let (al, ga) = (self.alpha, self.gamma);
        let sum = ga + al - 2.0;
        pow_nonneg(al - 1.0, al - 1.0) * pow_nonneg(ga - 1.0, ga - 1.0) * (self.b - self.a).powf(al - 1.0)
            / sum.powf(sum)
            * self.inv_gamma_alpha
    }

    /// The maximum exactly as the published closed form writes it, with the
    /// factor `((γ−1)b − (α−1)a)^(γ−1) / (b−a)^(γ−α)`. It agrees with
    /// [`Self::diag_max_closed_form`] only when `a = 0` or `γ = α`.
    pub fn diag_max_printed_form(&self) -> f64 {
        let (al, ga) = (self.alpha, self.gamma);
        let sum = ga + al - 2.0;
        pow_nonneg(al - 1.0, al - 1.0) / sum.powf(sum)
            * pow_nonneg((ga - 1.0) * self.b - (al - 1.0) * self.a, ga - 1.0)
            / (self.b - self.a).powf(ga - al)
            * self.inv_gamma_alpha
    }

    pub fn diag_max(&self) -> DiagMax {
        let s_star = self.s_star();
        let span = self.b - self.a;
        let (golden_s, golden_value) =
            golden_max(|s| self.diagonal(s), self.a, self.b, 1e-12 * span.max(1.0));
        DiagMax {
            s_star,
            value: self.diagonal(s_star),
            golden_s,
            golden_value,
        }
    }

    /// Solution `r` of `G₊((3b+a)/4, s) = G₋((3a+b)/4, s)` on the quarter window.
    pub fn crossing_r(&self) -> Result<f64, GreenError> {
        let (lo, hi) = self.quarter_window();
        let diff = |s: f64| self.g_plus(hi, s) - self.g_minus(lo, s);
        bisect(diff, lo, hi, 1e-13 * (self.b - self.a).max(1.0))
            .filter(|r| *r > lo && *r < hi)
            .ok_or(GreenError::NoCrossing { lo, hi })
    }

    pub fn minorant(&self) -> Result<Minorant, GreenError> {
        Ok(Minorant {
            kernel: *self,
            r: self.crossing_r()?,
        })
    }
}

/// The lower bound `min_{t ∈ [(3a+b)/4, (3b+a)/4]} G(t,s) ≥ φ(s) G(s,s)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Minorant {
    kernel: GreenKernel,
    pub r: f64,
}

impl Minorant {
    pub fn kernel(&self) -> &GreenKernel {
        &self.kernel
    }

    /// `φ(s)`: `G₊(hi,s)/G₊(s,s)` for `s ≤ r`, `G₋(lo,s)/G₋(s,s)` for `s ≥ r`.
    pub fn phi(&self, s: f64) -> Result<f64, GreenError> {
        let k = &self.kernel;
        if s == k.a || s == k.b {
            return Err(GreenError::Endpoint(s));
        }
        if !(s > k.a && s < k.b) {
            return Err(GreenError::OutOfRange { s, a: k.a, b: k.b });
        }
        Ok(self.numerator(s) / k.boundary_part(s, s))
    }

    fn numerator(&self, s: f64) -> f64 {
        let k = &self.kernel;
        let (lo, hi) = k.quarter_window();
        if s <= self.r {
            k.g_plus(hi, s)
        } else {
            k.g_minus(lo, s)
        }
    }

    /// `φ(s)·G(s,s)`, which is finite up to the endpoints.
    pub fn weighted(&self, s: f64) -> f64 {
        self.numerator(s) * self.kernel.inv_gamma_alpha
    }
}
