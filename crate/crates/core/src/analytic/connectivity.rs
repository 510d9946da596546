//! Expected connectivity under a reception threshold.
//!
//! A point is connected when its faded loss stays below `1/s`. Campbell's
//! formula turns every count here into a one-dimensional integral against the
//! intensity, and for Nakagami marks that integral is a gamma-function ratio:
//! the whole fading dependence of the expected count is the `δ`-th moment of
//! the mark distribution. Retransmission schemes only change the integrand's
//! survival factor.

use crate::fading::FadingSpec;
use crate::geometry::NetworkConfig;
use crate::quad::{integrate_to_inf_with_breaks, QuadConfig};
use crate::scalar::Real;
use crate::specfun::{digamma, ln_gamma};

use super::point_process::conditioned_plpf_cdf;
use super::{AnalyticError, GainReport};

/// Expected number of connected points at threshold `s`:
/// `c_d (ms)^{-δ} Γ(δ+m)/Γ(m)`, degenerating to `c_d s^{-δ}`.
pub fn expected_connected<R: Real>(
    cfg: NetworkConfig<R>,
    spec: FadingSpec<R>,
    s: R,
) -> Result<R, AnalyticError> {
    check_threshold(s)?;
    let delta = cfg.delta();
    match spec {
        FadingSpec::NoFading => Ok(cfg.c_d() * s.powf(-delta)),
        FadingSpec::Nakagami { m } => {
            let ln = -delta * (m * s).ln() + ln_gamma(delta + m)? - ln_gamma(m)?;
            Ok(cfg.c_d() * ln.exp())
        }
    }
}

/// Connected-count ratio with fading over without, evaluated at unit threshold;
/// equals the `δ`-th moment of the mark distribution.
pub fn connectivity_gain<R: Real>(
    cfg: NetworkConfig<R>,
    spec: FadingSpec<R>,
) -> Result<GainReport<R>, AnalyticError> {
    let with_fading = expected_connected(cfg, spec, R::one())?;
    let without_fading = cfg.c_d();
    Ok(GainReport {
        with_fading,
        without_fading,
        gain: with_fading / without_fading,
    })
}

/// The `δ` minimizing the connectivity gain for shape `m`, i.e. the root of
/// `Ψ(m+δ) = ln m` in (0, 1). Exists for every admissible shape.
pub fn connectivity_gain_min_delta<R: Real>(m: R) -> Result<R, AnalyticError> {
    if !m.is_finite() || m < R::of(crate::fading::MIN_NAKAGAMI_M) {
        return Err(AnalyticError::Domain("shape must be finite and >= 0.5"));
    }
    let target = m.ln();
    let g = |delta: R| digamma(m + delta).map(|v| v - target);
    let (mut lo, mut hi) = (R::zero(), R::one());
    let g_lo = g(lo)?;
    let g_hi = g(hi)?;
    if g_lo >= R::zero() || g_hi <= R::zero() {
        return Err(AnalyticError::Numeric(
            "gain derivative does not bracket a root in (0, 1)",
        ));
    }
    for _ in 0..200 {
        let mid = (lo + hi) / R::of(2.0);
        if g(mid)? < R::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= R::eps_n(4.0) * hi {
            break;
        }
    }
    Ok((lo + hi) / R::of(2.0))
}

/// Probability that no point at all is connected: `exp(-E N̂)`.
pub fn isolation_probability<R: Real>(
    cfg: NetworkConfig<R>,
    spec: FadingSpec<R>,
    s: R,
) -> Result<R, AnalyticError> {
    Ok((-expected_connected(cfg, spec, s)?).exp())
}

/// Expected connected points among those with unfaded loss below `a`:
/// `c_d a^δ F^a(1/s)` with the conditioned faded-loss cdf.
pub fn expected_connected_within<R: Real>(
    cfg: NetworkConfig<R>,
    spec: FadingSpec<R>,
    s: R,
    a: R,
) -> Result<R, AnalyticError> {
    check_threshold(s)?;
    let cdf = conditioned_plpf_cdf(cfg, spec, a, R::one() / s)?;
    Ok(cfg.c_d() * a.powf(cfg.delta()) * cdf)
}

/// Mean unfaded loss of a uniformly chosen connected point:
/// `δ(δ+m)/(m s (δ+1))`, degenerating to `δ/(s(δ+1))`.
pub fn mean_connected_node<R: Real>(
    cfg: NetworkConfig<R>,
    spec: FadingSpec<R>,
    s: R,
) -> Result<R, AnalyticError> {
    check_threshold(s)?;
    let delta = cfg.delta();
    let base = delta / (s * (delta + R::one()));
    match spec {
        FadingSpec::NoFading => Ok(base),
        FadingSpec::Nakagami { m } => Ok(base * (delta + m) / m),
    }
}

/// Expected points receiving at least one of `n` identical transmissions,
/// with the density `λ(x)(1 - F(sx)^n)` available pointwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RetransmissionConnectivity<R> {
    cfg: NetworkConfig<R>,
    spec: FadingSpec<R>,
    s: R,
    n: u32,
    expected: R,
}

impl<R: Real> RetransmissionConnectivity<R> {
    pub fn expected(&self) -> R {
        self.expected
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Density of at-least-once receivers at loss `x`.
    pub fn density(&self, x: R) -> Result<R, AnalyticError> {
        if !x.is_finite() || x < R::zero() {
            return Err(AnalyticError::Domain("loss level must be finite and >= 0"));
        }
        let lam = super::point_process::intensity(self.cfg, x)?;
        let miss = self.spec.cdf(self.s * x).powi(self.n as i32);
        Ok(lam * (R::one() - miss))
    }
}

/// Build the retransmission summary for `n` rounds at fixed threshold `s`.
pub fn retransmission_connectivity<R: Real>(
    cfg: NetworkConfig<R>,
    spec: FadingSpec<R>,
    s: R,
    n: u32,
) -> Result<RetransmissionConnectivity<R>, AnalyticError> {
    check_threshold(s)?;
    if n == 0 {
        return Err(AnalyticError::Domain("transmission count must be >= 1"));
    }
    let delta = cfg.delta();
    let expected = match spec {
        FadingSpec::NoFading => cfg.c_d() * s.powf(-delta),
        FadingSpec::Nakagami { m } if m == R::one() && delta == R::one() => {
            // harmonic growth: each extra round reaches thinner survivors
            let rn = R::of(n as f64);
            cfg.c_d() / s * (digamma(rn + R::one())? + R::euler_gamma())
        }
        FadingSpec::Nakagami { .. } => retransmission_expected_quadrature(cfg, spec, s, n)?,
    };
    Ok(RetransmissionConnectivity {
        cfg,
        spec,
        s,
        n,
        expected,
    })
}

/// At-least-once count by quadrature in the transformed coordinate:
/// `∫₀^∞ (1 - F(s x(t))^n) dt` with `x(t) = (t/c_d)^{1/δ}`.
pub(crate) fn retransmission_expected_quadrature<R: Real>(
    cfg: NetworkConfig<R>,
    spec: FadingSpec<R>,
    s: R,
    n: u32,
) -> Result<R, AnalyticError> {
    let c_d = cfg.c_d();
    let delta = cfg.delta();
    let inv_delta = R::one() / delta;
    let f = |t: R| {
        if t <= R::zero() {
            return R::one();
        }
        let x = (t / c_d).powf(inv_delta);
        R::one() - spec.cdf(s * x).powi(n as i32)
    };
    let m_scale = spec.nakagami_m().unwrap_or(R::one());
    let reach = (R::one() + R::of(n as f64).ln()) / (m_scale * s);
    let breaks: Vec<R> = [
        R::one() / (m_scale * s),
        reach,
        R::of(3.0) * reach,
        R::of(10.0) * reach,
    ]
    .iter()
    .map(|&x| c_d * x.powf(delta))
    .collect();
    Ok(integrate_to_inf_with_breaks(f, R::zero(), &breaks, &QuadConfig::default())?)
}

/// Expected points reached at least once under the decaying schedule
/// `s_k = s₁/k`, k = 1..n. Degenerate marks give exactly `c_d (n/s₁)^δ`;
/// Nakagami marks go through quadrature of `1 - ∏_k F(s₁ x / k)`.
pub fn retransmission_connectivity_varying<R: Real>(
    cfg: NetworkConfig<R>,
    spec: FadingSpec<R>,
    s1: R,
    n: u32,
) -> Result<R, AnalyticError> {
    check_threshold(s1)?;
    if n == 0 {
        return Err(AnalyticError::Domain("transmission count must be >= 1"));
    }
    let delta = cfg.delta();
    let c_d = cfg.c_d();
    if spec.is_no_fading() {
        // every point up to loss n/s₁ is reached by the last, loosest round
        return Ok(c_d * (R::of(n as f64) / s1).powf(delta));
    }
    let inv_delta = R::one() / delta;
    let f = |t: R| {
        if t <= R::zero() {
            return R::one();
        }
        let x = (t / c_d).powf(inv_delta);
        let mut miss = R::one();
        for k in 1..=n {
            miss *= spec.cdf(s1 * x / R::of(k as f64));
            if miss == R::zero() {
                break;
            }
        }
        R::one() - miss
    };
    let m_scale = spec.nakagami_m().unwrap_or(R::one());
    let rn = R::of(n as f64);
    let breaks: Vec<R> = [
        R::one() / (m_scale * s1),
        rn / (m_scale * s1),
        R::of(3.0) * rn / (m_scale * s1),
        R::of(10.0) * rn / (m_scale * s1),
    ]
    .iter()
    .map(|&x| c_d * x.powf(delta))
    .collect();
    Ok(integrate_to_inf_with_breaks(f, R::zero(), &breaks, &QuadConfig::default())?)
}

fn check_threshold<R: Real>(s: R) -> Result<(), AnalyticError> {
    if !s.is_finite() || s <= R::zero() {
        Err(AnalyticError::Domain("threshold must be finite and > 0"))
    } else {
        Ok(())
    }
}
