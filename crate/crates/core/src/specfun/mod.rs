//! Special functions backing every closed form in the library.
//!
//! | Function | Method |
//! |----------|--------|
//! | [`gamma`], [`ln_gamma`] | Lanczos approximation (g = 7, 9 coefficients) |
//! | [`gamma_p`], [`gamma_q`], [`gamma_pq`] | series / continued-fraction split at x = a + 1 |
//! | [`digamma`] | recurrence to x ≥ 12, then asymptotic series |
//! | [`lambert_w0`] | Halley iteration from a piecewise initial guess |
//! | [`erf`], [`erfc`] | regularized incomplete gamma at a = 1/2 |
//!
//! All functions are pure, deterministic, and total over their stated domains;
//! nothing is cached. Default accuracy ([`Accuracy`]) is 1e-12 absolute /
//! 1e-10 relative in `f64`, which the unit tests pin against independently
//! frozen high-precision values.
//!
//! Out of scope: complex arguments, negative-axis gamma, and the W₋₁ branch
//! (only the principal branch on [-1/e, ∞) is ever needed).

mod digamma;
mod erf;
mod gamma;
mod incgamma;
mod lambert;

pub use digamma::digamma;
pub use erf::{erf, erfc};
pub use gamma::{gamma, ln_gamma};
pub use incgamma::{gamma_p, gamma_pq, gamma_q};
pub use lambert::lambert_w0;

use crate::scalar::Real;
use std::fmt;

/// Error type for the special-function layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpecfunError {
    /// Argument outside the documented domain (non-finite or out of range).
    Domain(&'static str),
    /// An iteration exhausted its budget before reaching the target accuracy.
    NoConvergence(&'static str),
}

impl fmt::Display for SpecfunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecfunError::Domain(msg) => write!(f, "domain error: {msg}"),
            SpecfunError::NoConvergence(msg) => write!(f, "failed to converge: {msg}"),
        }
    }
}

impl std::error::Error for SpecfunError {}

/// Absolute/relative error targets for iterative evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Accuracy<R> {
    pub abs_tol: R,
    pub rel_tol: R,
}

impl<R: Real> Default for Accuracy<R> {
    fn default() -> Self {
        Accuracy {
            abs_tol: R::of(1e-12),
            rel_tol: R::of(1e-10),
        }
    }
}

impl<R: Real> Accuracy<R> {
    pub fn new(abs_tol: R, rel_tol: R) -> Result<Self, SpecfunError> {
        if !(abs_tol > R::zero() && abs_tol.is_finite() && rel_tol > R::zero() && rel_tol.is_finite())
        {
            return Err(SpecfunError::Domain("accuracy tolerances must be positive and finite"));
        }
        Ok(Accuracy { abs_tol, rel_tol })
    }

    /// Tolerance at magnitude `x`: max(abs_tol, rel_tol·|x|).
    pub fn tol_at(&self, x: R) -> R {
        self.abs_tol.max(self.rel_tol * x.abs())
    }
}
