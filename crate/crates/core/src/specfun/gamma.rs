//! Gamma function on the positive axis via the Lanczos approximation.

use super::SpecfunError;
use crate::scalar::Real;

// Lanczos g = 7, 9-term coefficient set; relative error < 1e-13 over the
// positive axis, comfortably inside the layer's 1e-10 relative target.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

// Lanczos partial-fraction sum A(z) at z = x - 1.
fn lanczos_sum<R: Real>(z: R) -> R {
    let mut acc = R::of(LANCZOS_COEFFS[0]);
    for (k, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += R::of(c) / (z + R::of(k as f64));
    }
    acc
}

fn check_domain<R: Real>(x: R) -> Result<(), SpecfunError> {
    if !x.is_finite() || x <= R::zero() {
        return Err(SpecfunError::Domain("gamma requires finite x > 0"));
    }
    Ok(())
}

/// Γ(x) for x > 0. Overflows to +∞ for x ≳ 171.6 in `f64`; use [`ln_gamma`] there.
pub fn gamma<R: Real>(x: R) -> Result<R, SpecfunError> {
    check_domain(x)?;
    // Recurrence keeps the Lanczos evaluation away from its small-argument edge.
    if x < R::of(0.5) {
        return Ok(gamma_core(x + R::one()) / x);
    }
    Ok(gamma_core(x))
}

/// ln Γ(x) for x > 0; finite across the whole positive axis.
pub fn ln_gamma<R: Real>(x: R) -> Result<R, SpecfunError> {
    check_domain(x)?;
    if x < R::of(0.5) {
        return Ok(ln_gamma_core(x + R::one()) - x.ln());
    }
    Ok(ln_gamma_core(x))
}

fn gamma_core<R: Real>(x: R) -> R {
    let z = x - R::one();
    let t = z + R::of(LANCZOS_G + 0.5);
    let sqrt_2pi = R::of((2.0 * std::f64::consts::PI).sqrt());
    sqrt_2pi * t.powf(z + R::of(0.5)) * (-t).exp() * lanczos_sum(z)
}

fn ln_gamma_core<R: Real>(x: R) -> R {
    let z = x - R::one();
    let t = z + R::of(LANCZOS_G + 0.5);
    let half_ln_2pi = R::of(0.5 * (2.0 * std::f64::consts::PI).ln());
    half_ln_2pi + (z + R::of(0.5)) * t.ln() - t + lanczos_sum(z).ln()
}
