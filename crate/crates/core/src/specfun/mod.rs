//! Gamma, Beta and the two-parameter Mittag-Leffler function on the real line.

mod dd;
mod gamma;
mod mittag_leffler;
mod roots;

use thiserror::Error;

pub use gamma::{beta, gamma, gamma_ratio, ln_gamma, recip_gamma, GAMMA_MAX_ARG};
pub use mittag_leffler::{ml_eval, ml_series, MlValue, DEFAULT_MAX_TERMS};
pub use roots::{check_order_and_type, ml_roots, Root, RootList, ScanWarning, DEFAULT_N_SCAN};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecFnError {
    #[error("gamma has a pole at {0}")]
    GammaPole(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("Mittag-Leffler series at z={z} did not converge within {terms} terms")]
    NonConvergence { z: f64, terms: usize },
    #[error("Mittag-Leffler series at z={z} loses precision: rounding estimate {rounding_bound:e} exceeds tolerance {tol:e}")]
    PrecisionLoss { z: f64, rounding_bound: f64, tol: f64 },
}
