//! Principal branch W₀ of the Lambert W function on [-1/e, ∞).

use super::SpecfunError;
use crate::scalar::Real;

const MAX_ITER: usize = 60;

/// W₀(x): the solution w ≥ -1 of w·e^w = x, for x ≥ -1/e.
///
/// Near the branch point the value comes from the convergent expansion in
/// p = √(2(ex+1)); elsewhere a piecewise initial guess is polished by Halley
/// iteration (cubic convergence). The achievable residual |W e^W − x| is
/// bounded by the conditioning of w·e^w: ~1e-12 absolute for |x| ≲ 1 and
/// ~1e-15 relative for large x.
pub fn lambert_w0<R: Real>(x: R) -> Result<R, SpecfunError> {
    if !x.is_finite() {
        return Err(SpecfunError::Domain("lambert_w0 requires finite x"));
    }
    let e = R::of(std::f64::consts::E);
    // u = e·x + 1 measures the distance to the branch point -1/e.
    let u = e * x + R::one();
    if u < R::zero() {
        // Tolerate rounding dust below the branch point, reject anything real.
        if u > -R::eps_n(8.0) {
            return Ok(-R::one());
        }
        return Err(SpecfunError::Domain("lambert_w0 requires x >= -1/e"));
    }
    let p = (R::of(2.0) * u).sqrt();
    if p < R::of(1e-2) {
        // Branch-point series through p^5; truncation error O(p^6) < 1e-13 here,
        // where Halley's denominator (∝ 1+w) would be too small to trust.
        return Ok(branch_series(p));
    }

    let mut w = if x < R::of(-0.25) {
        branch_series(p)
    } else if x < e {
        // ln(1+x) matches W to second order at 0 and is a serviceable seed
        // across the whole middle range.
        x.ln_1p()
    } else {
        let l1 = x.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    };

    let mut prev_dw = R::infinity();
    for _ in 0..MAX_ITER {
        let ew = w.exp();
        let f = w * ew - x;
        let w1 = w + R::one();
        let denom = ew * w1 - (w + R::of(2.0)) * f / (R::of(2.0) * w1);
        let dw = f / denom;
        w -= dw;
        let scale = R::one() + w.abs();
        if dw.abs() <= R::eps_n(4.0) * scale {
            return Ok(w);
        }
        // Moderately near the branch point the cancellation noise in f keeps
        // the increments rattling just above the tolerance; once they stop
        // shrinking while already deep inside the convergence basin, w sits
        // at the rounding floor and further iteration cannot improve it.
        if dw.abs() >= prev_dw && prev_dw <= R::eps_n(1e7) * scale {
            return Ok(w);
        }
        prev_dw = dw.abs();
    }
    Err(SpecfunError::NoConvergence("lambert_w0 Halley iteration"))
}

// W₀ expanded around the branch point: w = -1 + p - p²/3 + 11p³/72 - ...
fn branch_series<R: Real>(p: R) -> R {
    let c2 = R::of(-1.0 / 3.0);
    let c3 = R::of(11.0 / 72.0);
    let c4 = R::of(-43.0 / 540.0);
    let c5 = R::of(769.0 / 17280.0);
    -R::one() + p * (R::one() + p * (c2 + p * (c3 + p * (c4 + p * c5))))
}
