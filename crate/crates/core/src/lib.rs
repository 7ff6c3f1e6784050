//! Dirichlet boundary value problems for the generalized Hilfer derivative
//!
//! ```text
//! D^(α,γ) u(t) + q(t) f(u(t)) = 0,   a < t < b,   u(a) = u(b) = 0,
//! ```
//!
//! with `1 < α ≤ γ ≤ 2`. The crate builds the Green kernel of the problem,
//! evaluates Lyapunov and Hartman-Wintner type necessary conditions, the
//! constants of the cone existence theorem, Dirichlet eigenvalues through the
//! zeros of the Mittag-Leffler function, and solves the equivalent integral
//! equation by Picard iteration.
//!
//! ```
//! use fracbvp::analysis::{lyapunov_bound, ProblemSpec};
//!
//! let spec = ProblemSpec::linear(0.0, 1.0, 2.0, 2.0, "9.87").unwrap();
//! assert!((lyapunov_bound(&spec) - 4.0).abs() < 1e-12);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod expr;
pub mod fracops;
pub mod green;
pub mod quadrature;
pub mod solver;
pub mod specfun;
