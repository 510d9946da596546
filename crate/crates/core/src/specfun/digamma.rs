//! Digamma Ψ(x) on the positive axis.

use super::SpecfunError;
use crate::scalar::Real;

// Asymptotic series coefficients: -B_{2n}/(2n) for the expansion
// Ψ(x) ~ ln x - 1/(2x) - Σ B_{2n}/(2n x^{2n}); truncated at x^{-14},
// which is below 1e-16 once the recurrence has pushed x to ≥ 12.
const ASYMPTOTIC: [f64; 7] = [
    -1.0 / 12.0,
    1.0 / 120.0,
    -1.0 / 252.0,
    1.0 / 240.0,
    -1.0 / 132.0,
    691.0 / 32760.0,
    -1.0 / 12.0,
];

/// Ψ(x) = d/dx ln Γ(x) for x > 0.
pub fn digamma<R: Real>(x: R) -> Result<R, SpecfunError> {
    if !x.is_finite() || x <= R::zero() {
        return Err(SpecfunError::Domain("digamma requires finite x > 0"));
    }
    let mut shift = R::zero();
    let mut y = x;
    while y < R::of(12.0) {
        shift -= y.recip();
        y += R::one();
    }
    let inv2 = (y * y).recip();
    let mut series = R::zero();
    let mut pow = inv2;
    for &c in ASYMPTOTIC.iter() {
        series += R::of(c) * pow;
        pow *= inv2;
    }
    Ok(shift + y.ln() - (R::of(2.0) * y).recip() + series)
}
