//! Error function via the regularized incomplete gamma at a = 1/2.

use super::{incgamma::gamma_pq, SpecfunError};
use crate::scalar::Real;

/// erf(x) = sign(x)·P(1/2, x²) for finite x.
pub fn erf<R: Real>(x: R) -> Result<R, SpecfunError> {
    if !x.is_finite() {
        return Err(SpecfunError::Domain("erf requires finite x"));
    }
    if x == R::zero() {
        return Ok(R::zero());
    }
    let (p, _) = gamma_pq(R::of(0.5), x * x)?;
    Ok(if x > R::zero() { p } else { -p })
}

/// erfc(x) = 1 − erf(x), computed without cancellation for x > 0.
pub fn erfc<R: Real>(x: R) -> Result<R, SpecfunError> {
    if !x.is_finite() {
        return Err(SpecfunError::Domain("erfc requires finite x"));
    }
    if x == R::zero() {
        return Ok(R::one());
    }
    let (p, q) = gamma_pq(R::of(0.5), x * x)?;
    Ok(if x > R::zero() { q } else { R::one() + p })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_and_oddness() {
        assert_eq!(erf(0.0f64).unwrap(), 0.0);
        let x = 0.7f64;
        assert_eq!(erf(-x).unwrap(), -erf(x).unwrap());
    }

    #[test]
    fn frozen_oracle_value() {
        // erf(1), frozen from an independent series evaluation.
        assert!((erf(1.0f64).unwrap() - 0.842_700_792_949_714_869_341).abs() < 1e-13);
    }

    #[test]
    fn bounded_and_monotone() {
        let mut prev = -1.0;
        for k in -40..=40 {
            let x = k as f64 * 0.2;
            let e = erf(x).unwrap();
            assert!((-1.0..1.0).contains(&e) || e.abs() < 1.0 + 1e-15);
            assert!(e >= prev);
            prev = e;
        }
    }

    #[test]
    fn complementarity() {
        for &x in &[-3.0f64, -0.9, -0.1, 0.1, 0.5, 1.0, 2.5, 6.0] {
            let sum = erf(x).unwrap() + erfc(x).unwrap();
            assert!((sum - 1.0).abs() < 1e-15, "erf+erfc at {x}");
        }
        // erfc stays meaningful deep in the tail where 1 - erf would be 0.
        assert!(erfc(10.0f64).unwrap() > 0.0);
        assert!(erfc(10.0f64).unwrap() < 1e-43);
    }

    #[test]
    fn rejects_non_finite() {
        assert!(erf(f64::NAN).is_err());
        assert!(erf(f64::INFINITY).is_err());
        assert!(erfc(f64::NEG_INFINITY).is_err());
    }
}
