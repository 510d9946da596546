//! Unit-mean power fading marks.
//!
//! [`FadingSpec`] selects between Nakagami-m power fading — a gamma law with
//! shape m and scale 1/m, so the mean is 1 by construction — and the
//! degenerate no-fading limit, the unit step at 1 that Nakagami approaches as
//! m → ∞. m = 1 is Rayleigh power fading, F(x) = 1 − e^{-x}. The shape is
//! restricted to m ≥ 0.5 (the physical range, and where gamma sampling is
//! well-conditioned).
//!
//! Specs are immutable `Copy` values, safe to share across threads; each
//! random stream handed to [`FadingSpec::sample`] is single-owner.
//!
//! Config files and the CLI spell specs as `nakagami:m=2` or `none`
//! ([`std::str::FromStr`] / [`std::fmt::Display`] round-trip).

use crate::scalar::{Real, SampleReal};
use crate::specfun::{gamma_pq, ln_gamma, SpecfunError};
use rand::Rng;
use std::fmt;
use std::str::FromStr;

/// Minimum admitted Nakagami shape.
pub const MIN_NAKAGAMI_M: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FadingSpec<R> {
    /// Gamma(m, 1/m) power fading.
    Nakagami { m: R },
    /// Deterministic mark f ≡ 1 (the m → ∞ limit).
    NoFading,
}

/// Errors from constructing or evaluating a fading spec.
#[derive(Debug, Clone, PartialEq)]
pub enum FadingError {
    /// Shape outside [0.5, ∞) or non-finite.
    Domain(&'static str),
    /// Moment order ν ≤ −m: E[f^ν] does not exist.
    DivergentMoment,
    /// The degenerate spec has no density.
    NoDensity,
    Specfun(SpecfunError),
}

impl fmt::Display for FadingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FadingError::Domain(msg) => write!(f, "domain error: {msg}"),
            FadingError::DivergentMoment => write!(f, "fading moment diverges (order <= -m)"),
            FadingError::NoDensity => write!(f, "degenerate fading has no density"),
            FadingError::Specfun(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for FadingError {}

impl From<SpecfunError> for FadingError {
    fn from(e: SpecfunError) -> Self {
        FadingError::Specfun(e)
    }
}

impl<R: Real> FadingSpec<R> {
    pub fn nakagami(m: R) -> Result<Self, FadingError> {
        if !m.is_finite() || m < R::of(MIN_NAKAGAMI_M) {
            return Err(FadingError::Domain("nakagami shape must be finite and >= 0.5"));
        }
        Ok(FadingSpec::Nakagami { m })
    }

    pub fn rayleigh() -> Self {
        FadingSpec::Nakagami { m: R::one() }
    }

    pub fn no_fading() -> Self {
        FadingSpec::NoFading
    }

    pub fn is_no_fading(&self) -> bool {
        matches!(self, FadingSpec::NoFading)
    }

    pub fn nakagami_m(&self) -> Option<R> {
        match self {
            FadingSpec::Nakagami { m } => Some(*m),
            FadingSpec::NoFading => None,
        }
    }

    /// F(x): right-continuous, 0 below the support, 1 in the limit.
    pub fn cdf(&self, x: R) -> R {
        match *self {
            FadingSpec::Nakagami { m } => {
                if x <= R::zero() {
                    R::zero()
                } else if !x.is_finite() {
                    R::one()
                } else {
                    let (p, _) = gamma_pq(m, m * x).expect("valid shape and argument");
                    p
                }
            }
            FadingSpec::NoFading => {
                if x >= R::one() {
                    R::one()
                } else {
                    R::zero()
                }
            }
        }
    }

    /// 1 − F(x) without cancellation in the upper tail.
    pub fn survival(&self, x: R) -> R {
        match *self {
            FadingSpec::Nakagami { m } => {
                if x <= R::zero() {
                    R::one()
                } else if !x.is_finite() {
                    R::zero()
                } else {
                    let (_, q) = gamma_pq(m, m * x).expect("valid shape and argument");
                    q
                }
            }
            FadingSpec::NoFading => {
                if x >= R::one() {
                    R::zero()
                } else {
                    R::one()
                }
            }
        }
    }

    /// Density m^m x^{m-1} e^{-mx} / Γ(m) for x > 0; zero for x ≤ 0.
    ///
    /// At x = 0 the density is c·lim: 0 for m > 1, 1 for m = 1, +∞ for m < 1
    /// (integrable). The degenerate spec has no density.
    pub fn pdf(&self, x: R) -> Result<R, FadingError> {
        match *self {
            FadingSpec::Nakagami { m } => {
                if x < R::zero() || x == R::zero() && m > R::one() {
                    return Ok(R::zero());
                }
                if x == R::zero() {
                    return Ok(if m == R::one() { R::one() } else { R::infinity() });
                }
                let ln_pdf = m * m.ln() + (m - R::one()) * x.ln() - m * x - ln_gamma(m)?;
                Ok(ln_pdf.exp())
            }
            FadingSpec::NoFading => Err(FadingError::NoDensity),
        }
    }

    /// Fractional moment E[f^ν] = Γ(m+ν) / (m^ν Γ(m)); requires ν > −m.
    pub fn moment(&self, nu: R) -> Result<R, FadingError> {
        if !nu.is_finite() {
            return Err(FadingError::Domain("moment order must be finite"));
        }
        match *self {
            FadingSpec::Nakagami { m } => {
                if nu <= -m {
                    return Err(FadingError::DivergentMoment);
                }
                Ok((ln_gamma(m + nu)? - ln_gamma(m)? - nu * m.ln()).exp())
            }
            FadingSpec::NoFading => Ok(R::one()),
        }
    }

    /// E[f] — identically 1 for every spec.
    pub fn mean(&self) -> R {
        R::one()
    }

    /// One draw from the mark distribution.
    pub fn sample<G: Rng + ?Sized>(&self, rng: &mut G) -> R
    where
        R: SampleReal,
    {
        match *self {
            FadingSpec::Nakagami { m } => R::gamma_draw(m, m.recip(), rng),
            FadingSpec::NoFading => R::one(),
        }
    }
}

impl<R: Real> fmt::Display for FadingSpec<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FadingSpec::Nakagami { m } => write!(f, "nakagami:m={m}"),
            FadingSpec::NoFading => write!(f, "none"),
        }
    }
}

impl<R: Real> FromStr for FadingSpec<R> {
    type Err = FadingError;

    fn from_str(s: &str) -> Result<Self, FadingError> {
        let s = s.trim();
        if s == "none" {
            return Ok(FadingSpec::NoFading);
        }
        if let Some(rest) = s.strip_prefix("nakagami:m=") {
            let m: f64 = rest
                .trim()
                .parse()
                .map_err(|_| FadingError::Domain("unparseable nakagami shape"))?;
            return FadingSpec::nakagami(R::of(m));
        }
        Err(FadingError::Domain("expected \"nakagami:m=<value>\" or \"none\""))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::child_rng;

    #[test]
    fn rayleigh_cdf_is_exponential() {
        let spec: FadingSpec<f64> = FadingSpec::rayleigh();
        for &x in &[0.1, 0.5, 1.0, 2.0, 7.0] {
            assert!((spec.cdf(x) - (1.0 - (-x).exp())).abs() < 1e-13, "at {x}");
        }
    }

    #[test]
    fn degenerate_is_unit_step() {
        let spec: FadingSpec<f64> = FadingSpec::no_fading();
        assert_eq!(spec.cdf(0.999), 0.0);
        assert_eq!(spec.cdf(1.001), 1.0);
        assert_eq!(spec.cdf(1.0), 1.0);
        assert_eq!(spec.survival(0.999), 1.0);
        assert_eq!(spec.survival(1.0), 0.0);
    }

    #[test]
    fn nakagami_cdf_frozen_oracle() {
        // F(0.8) for m = 3, frozen from independent quadrature of the density.
        let spec = FadingSpec::nakagami(3.0f64).unwrap();
        assert!((spec.cdf(0.8) - 0.430_291_253_342_489_478_804).abs() < 1e-12);
    }

    #[test]
    fn cdf_shape_properties() {
        for spec in [FadingSpec::nakagami(0.5f64).unwrap(), FadingSpec::nakagami(4.2).unwrap()]
        {
            assert_eq!(spec.cdf(-1.0), 0.0);
            let mut prev = 0.0;
            for k in 1..100 {
                let v = spec.cdf(0.1 * k as f64);
                assert!(v >= prev && (0.0..=1.0).contains(&v));
                prev = v;
            }
            assert!(spec.cdf(50.0) > 1.0 - 1e-9);
            // Complementarity holds exactly.
            assert_eq!(spec.cdf(1.3) + spec.survival(1.3), 1.0);
        }
    }

    #[test]
    fn pdf_matches_direct_substitution() {
        // m=2, x=0.5: 4·0.5·e^{-1} = 2/e.
        let spec = FadingSpec::nakagami(2.0f64).unwrap();
        assert!((spec.pdf(0.5).unwrap() - 2.0 * (-1.0f64).exp()).abs() < 1e-13);
        // m=1 is the unit exponential density.
        let ray: FadingSpec<f64> = FadingSpec::rayleigh();
        assert!((ray.pdf(1.7).unwrap() - (-1.7f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn pdf_integrates_to_one() {
        use crate::quad;
        for &m in &[0.5, 1.0, 2.0, 5.0] {
            let spec = FadingSpec::nakagami(m).unwrap();
            let total = quad::integrate_to_inf(
                |x: f64| spec.pdf(x).unwrap(),
                0.0,
                &quad::QuadConfig::default(),
            )
            .unwrap();
            assert!((total - 1.0).abs() < 1e-7, "m = {m}: {total}");
        }
    }

    #[test]
    fn pdf_is_cdf_derivative() {
        // Central finite difference on a grid, all supported shapes.
        for &m in &[0.5, 1.0, 2.0, 5.0] {
            let spec = FadingSpec::nakagami(m).unwrap();
            let h = 1e-5;
            for k in 1..30 {
                let x = 0.15 * k as f64;
                let fd = (spec.cdf(x + h) - spec.cdf(x - h)) / (2.0 * h);
                assert!((fd - spec.pdf(x).unwrap()).abs() < 1e-6, "m={m} x={x}");
            }
        }
    }

    #[test]
    fn degenerate_pdf_is_unsupported() {
        let spec: FadingSpec<f64> = FadingSpec::no_fading();
        assert!(matches!(spec.pdf(1.0), Err(FadingError::NoDensity)));
    }

    #[test]
    fn moments_closed_form() {
        // Unit mean for every spec.
        for spec in [
            FadingSpec::nakagami(0.5f64).unwrap(),
            FadingSpec::rayleigh(),
            FadingSpec::nakagami(7.0).unwrap(),
            FadingSpec::no_fading(),
        ] {
            assert!((spec.moment(1.0).unwrap() - 1.0).abs() < 1e-9);
        }
        let degen: FadingSpec<f64> = FadingSpec::no_fading();
        assert_eq!(degen.moment(7.3).unwrap(), 1.0);
        // E[f^{1/2}] for Rayleigh = Γ(3/2), frozen from independent quadrature.
        let ray: FadingSpec<f64> = FadingSpec::rayleigh();
        assert!((ray.moment(0.5).unwrap() - 0.886_226_925_452_758).abs() < 1e-12);
        // Fractional order against independent quadrature: m=2, ν=1.5.
        let spec = FadingSpec::nakagami(2.0f64).unwrap();
        assert!((spec.moment(1.5).unwrap() - 1.174_982_003_733_281_485_507).abs() < 1e-12);
    }

    #[test]
    fn divergent_moment_flagged() {
        let spec = FadingSpec::nakagami(2.0f64).unwrap();
        assert!(matches!(spec.moment(-2.0), Err(FadingError::DivergentMoment)));
        assert!(matches!(spec.moment(-2.5), Err(FadingError::DivergentMoment)));
        assert!(spec.moment(-1.9).is_ok());
    }

    #[test]
    fn large_m_approaches_step() {
        let spec = FadingSpec::nakagami(200.0f64).unwrap();
        assert!(spec.cdf(0.7) < 0.05);
        assert!(spec.cdf(1.3) > 0.95);
    }

    #[test]
    fn shape_domain_enforced() {
        assert!(FadingSpec::nakagami(0.49f64).is_err());
        assert!(FadingSpec::nakagami(f64::NAN).is_err());
        assert!(FadingSpec::nakagami(f64::INFINITY).is_err());
        assert!(FadingSpec::nakagami(0.5f64).is_ok());
    }

    #[test]
    fn sampling_degenerate_and_mean() {
        let mut rng = child_rng(7, 0);
        let degen: FadingSpec<f64> = FadingSpec::no_fading();
        for _ in 0..100 {
            assert_eq!(degen.sample(&mut rng), 1.0);
        }
        // Rayleigh sample mean near 1 (SE = 1/√n).
        let ray: FadingSpec<f64> = FadingSpec::rayleigh();
        let n = 200_000;
        let mean: f64 = (0..n).map(|_| ray.sample(&mut rng)).sum::<f64>() / n as f64;
        assert!((mean - 1.0).abs() < 0.01, "mean {mean}");
    }

    #[test]
    fn sampling_variance_matches_one_over_m() {
        let spec = FadingSpec::nakagami(4.0f64).unwrap();
        let mut rng = child_rng(11, 0);
        let n = 200_000usize;
        let draws: Vec<f64> = (0..n).map(|_| spec.sample(&mut rng)).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
        // Var = 1/m; SE of the sample variance ≈ Var·√(2/n).
        let se = 0.25 * (2.0 / n as f64).sqrt();
        assert!((var - 0.25).abs() < 3.0 * se, "var {var}");
    }

    #[test]
    fn string_round_trip() {
        let spec: FadingSpec<f64> = "nakagami:m=2.0".parse().unwrap();
        assert_eq!(spec, FadingSpec::Nakagami { m: 2.0 });
        let none: FadingSpec<f64> = "none".parse().unwrap();
        assert!(none.is_no_fading());
        for spec in [FadingSpec::nakagami(1.5f64).unwrap(), FadingSpec::no_fading()] {
            let back: FadingSpec<f64> = spec.to_string().parse().unwrap();
            assert_eq!(back, spec);
        }
        assert!("nakagami:m=0.4".parse::<FadingSpec<f64>>().is_err());
        assert!("rician".parse::<FadingSpec<f64>>().is_err());
    }
}
