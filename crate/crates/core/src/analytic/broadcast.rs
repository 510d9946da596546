//! Broadcast reach, sum-distance, and the rate-threshold trade-off.
//!
//! A single transmission at threshold `s` reaches every point whose faded loss
//! clears `1/s`; weighting reached points by distance brings in the exponent
//! `Δ = (d+1)/α` instead of `δ`, and the fading gain becomes the `Δ`-th mark
//! moment. Rate optimization couples `s = 2^R − 1` to the sum-distance and is
//! solved in closed form through the Lambert W function; the solution is
//! re-checked against its own first-order condition before it is returned.
//!
//! Reach probabilities are for the unit-mean-measure slice (`δ = 1`) with the
//! reduced threshold `s̃ = a·s`; integer shapes keep the partial sums of the
//! incomplete gamma exact.

use crate::fading::FadingSpec;
use crate::geometry::NetworkConfig;
use crate::quad::{integrate_with_breaks, QuadConfig};
use crate::scalar::Real;
use crate::specfun::{lambert_w0, ln_gamma};

use super::{AnalyticError, CapacityResult, GainReport};

/// Probability that a uniformly chosen point within the slice is reached:
/// `p_m(s̃) = (1/(m s̃)) Σ_{k=1}^{m} P(k, m s̃)`.
pub fn broadcast_reach_probability<R: Real>(m: u32, s_tilde: R) -> Result<R, AnalyticError> {
    check_shape(m)?;
    check_reduced_threshold(s_tilde)?;
    let z = R::of(m as f64) * s_tilde;
    // descend P(k+1, z) = P(k, z) − z^k e^{−z}/k! and accumulate
    let mut term = -(-z).exp_m1();
    let mut sum = term;
    for k in 1..m {
        let rk = R::of(k as f64);
        let dec = (rk * z.ln() - z - ln_gamma(rk + R::one())?).exp();
        term = (term - dec).max(R::zero());
        sum += term;
    }
    Ok(sum / z)
}

/// Two-sided envelope for the reach probability: the truncated series from
/// below, the first-order tail bound from above. The upper bound is exact for
/// shapes 1 and 2.
pub fn broadcast_reach_bounds<R: Real>(m: u32, s_tilde: R) -> Result<(R, R), AnalyticError> {
    check_shape(m)?;
    check_reduced_threshold(s_tilde)?;
    let rm = R::of(m as f64);
    let lower = (R::one()
        - (rm * (rm * s_tilde).ln() - ln_gamma(rm + R::of(2.0))?).exp())
    .max(R::zero());
    let z = rm * s_tilde;
    let upper = ((R::one() - (-z).exp() * (R::one() + (rm - R::one()) * s_tilde)) / s_tilde)
        .min(R::one());
    Ok((lower, upper))
}

/// Thresholds guaranteeing reach probability at least `1 − ε`.
///
/// `sufficient` always holds; the `quadratic` refinement and the exact
/// Lambert-W solution exist for shape 1 only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdReport<R> {
    /// `(Γ(m+2) ε)^{1/m} / m`; conservative but valid for every shape.
    pub sufficient: R,
    /// `2ε + (4/3)ε²`, a closer expansion of the exact shape-1 threshold.
    pub quadratic: Option<R>,
    /// Root of `p_1(s̃) = 1 − ε`: `W₀(−q e^{−q}) + q` with `q = 1/(1−ε)`.
    pub exact: Option<R>,
}

/// Largest reduced threshold certified to reach a fraction `1 − ε`.
pub fn epsilon_reachability_threshold<R: Real>(
    m: u32,
    eps: R,
) -> Result<ThresholdReport<R>, AnalyticError> {
    check_shape(m)?;
    if !eps.is_finite() || eps <= R::zero() || eps >= R::one() {
        return Err(AnalyticError::Domain("epsilon must lie in (0, 1)"));
    }
    let rm = R::of(m as f64);
    let sufficient = ((ln_gamma(rm + R::of(2.0))? + eps.ln()) / rm).exp() / rm;
    let (quadratic, exact) = if m == 1 {
        let q = R::one() / (R::one() - eps);
        let w = lambert_w0(-q * (-q).exp())?;
        (
            Some(R::of(2.0) * eps + R::of(4.0 / 3.0) * eps * eps),
            Some(w + q),
        )
    } else {
        (None, None)
    };
    Ok(ThresholdReport {
        sufficient,
        quadratic,
        exact,
    })
}

/// Expected sum of reached distances for one transmission, with its fading
/// gain: `D = c_d (δ/Δ) (ms)^{-Δ} Γ(m+Δ)/Γ(m)`, and gain `E[f^Δ]`.
pub fn broadcast_sum_distance<R: Real>(
    cfg: NetworkConfig<R>,
    spec: FadingSpec<R>,
    s: R,
) -> Result<(R, GainReport<R>), AnalyticError> {
    if !s.is_finite() || s <= R::zero() {
        return Err(AnalyticError::Domain("threshold must be finite and > 0"));
    }
    let big_delta = cfg.big_delta();
    let base = cfg.c_d() * cfg.delta() / big_delta;
    let without_fading = base * s.powf(-big_delta);
    let with_fading = match spec {
        FadingSpec::NoFading => without_fading,
        FadingSpec::Nakagami { m } => {
            base * (-big_delta * (m * s).ln() + ln_gamma(m + big_delta)? - ln_gamma(m)?).exp()
        }
    };
    Ok((
        with_fading,
        GainReport {
            with_fading,
            without_fading,
            gain: with_fading / without_fading,
        },
    ))
}

/// Rate maximizing `R · D(2^R − 1)` for `Δ < 1`:
/// `(W₀(−e^{-1/Δ}/Δ) + 1/Δ) / ln 2`. Returns 0 at `Δ = 1` (supremum at rate 0).
pub fn optimal_rate<R: Real>(big_delta: R) -> Result<R, AnalyticError> {
    if !big_delta.is_finite() || big_delta <= R::zero() || big_delta > R::one() {
        return Err(AnalyticError::Domain(
            "closed-form rate requires 0 < big_delta <= 1",
        ));
    }
    let inv = R::one() / big_delta;
    // argument −e^{−1/Δ}/Δ stays within the principal branch for Δ ≤ 1
    let w = lambert_w0(-(-inv).exp() / big_delta)?;
    Ok((w + inv) / R::ln_2())
}

/// Lower bound on the optimal rate, `(Δ^{-1} − Δ)/ln 2`.
pub fn r_opt_lower_bound<R: Real>(big_delta: R) -> Result<R, AnalyticError> {
    if !big_delta.is_finite() || big_delta <= R::zero() || big_delta > R::one() {
        return Err(AnalyticError::Domain(
            "rate bound requires 0 < big_delta <= 1",
        ));
    }
    Ok((R::one() / big_delta - big_delta) / R::ln_2())
}

/// Lower bound on the optimal threshold, `e^{Δ^{-1} − Δ} − 1`.
pub fn s_opt_lower_bound<R: Real>(big_delta: R) -> Result<R, AnalyticError> {
    if !big_delta.is_finite() || big_delta <= R::zero() || big_delta > R::one() {
        return Err(AnalyticError::Domain(
            "threshold bound requires 0 < big_delta <= 1",
        ));
    }
    Ok((R::one() / big_delta - big_delta).exp_m1())
}

/// Rate-weighted sum-distance at a given rate: `r · D(2^r − 1)`.
pub fn capacity_at_rate<R: Real>(
    cfg: NetworkConfig<R>,
    spec: FadingSpec<R>,
    rate: R,
) -> Result<R, AnalyticError> {
    if !rate.is_finite() || rate <= R::zero() {
        return Err(AnalyticError::Domain("rate must be finite and > 0"));
    }
    let s = (rate * R::ln_2()).exp_m1();
    let (d, _) = broadcast_sum_distance(cfg, spec, s)?;
    Ok(rate * d)
}

/// Maximize the rate-weighted sum-distance over the rate.
///
/// `Δ < 1`: closed-form optimum, verified against its first-order condition.
/// `Δ = 1`: the supremum `c_d δ / ln 2` is approached as the rate vanishes.
/// `Δ > 1`: unbounded; the numeric fields are zeroed and `bounded` cleared.
pub fn broadcast_transport_capacity<R: Real>(
    cfg: NetworkConfig<R>,
    spec: FadingSpec<R>,
) -> Result<CapacityResult<R>, AnalyticError> {
    let big_delta = cfg.big_delta();
    if big_delta > R::one() {
        return Ok(CapacityResult {
            r_opt: R::zero(),
            s_opt: R::zero(),
            capacity: R::zero(),
            bounded: false,
        });
    }
    if big_delta == R::one() {
        // the m-dependence cancels: Γ(m+1)/(m Γ(m)) = 1
        return Ok(CapacityResult {
            r_opt: R::zero(),
            s_opt: R::zero(),
            capacity: cfg.c_d() * cfg.delta() / R::ln_2(),
            bounded: true,
        });
    }
    let r_opt = optimal_rate(big_delta)?;
    let s_opt = (r_opt * R::ln_2()).exp_m1();
    // re-check stationarity: 1 − RΔ 2^R ln2/(2^R − 1) must vanish at the optimum
    let resid = R::one() - r_opt * big_delta * (s_opt + R::one()) * R::ln_2() / s_opt;
    if resid.abs() > R::of(1e-9) {
        return Err(AnalyticError::Numeric(
            "closed-form rate fails its first-order check",
        ));
    }
    let (d, _) = broadcast_sum_distance(cfg, spec, s_opt)?;
    Ok(CapacityResult {
        r_opt,
        s_opt,
        capacity: r_opt * d,
        bounded: true,
    })
}

/// Closed lower bound on the capacity obtained by evaluating at the bounding
/// rate: `(D(1)/ln 2)(Δ^{-1} − Δ) (e^{Δ^{-1}−Δ} − 1)^{-Δ}`. Requires `Δ < 1`.
pub fn capacity_lower_bound<R: Real>(
    cfg: NetworkConfig<R>,
    spec: FadingSpec<R>,
) -> Result<R, AnalyticError> {
    let big_delta = cfg.big_delta();
    // NaN-safe: a NaN exponent must fail this guard too
    if big_delta.is_nan() || big_delta >= R::one() {
        return Err(AnalyticError::Divergent(
            "capacity bound applies only below big_delta = 1",
        ));
    }
    let (d_unit, _) = broadcast_sum_distance(cfg, spec, R::one())?;
    let gap = R::one() / big_delta - big_delta;
    Ok(d_unit / R::ln_2() * gap * gap.exp_m1().powf(-big_delta))
}

/// Lower bound on the superposition-coding transport sum when every point
/// decodes at the rate its own threshold supports: `c_d δ / (Δ(1−Δ))`,
/// derived for degenerate marks. Diverges for `Δ ≥ 1`.
///
/// The bound discards a factor of at most `ln 2` in the far field and the
/// positive near-field term reported by [`superposition_near_field_term`].
pub fn superposition_capacity_lower_bound<R: Real>(
    cfg: NetworkConfig<R>,
) -> Result<R, AnalyticError> {
    let big_delta = cfg.big_delta();
    if big_delta >= R::one() {
        return Err(AnalyticError::Divergent(
            "superposition sum is unbounded for big_delta >= 1",
        ));
    }
    Ok(cfg.c_d() * cfg.delta() / (big_delta * (R::one() - big_delta)))
}

/// Near-field contribution to the superposition sum, by quadrature of
/// `c_d δ ∫₀^1 −x^{Δ−1} log₂ x dx`; equals `c_d δ/(Δ² ln 2)` in closed form.
pub fn superposition_near_field_term<R: Real>(cfg: NetworkConfig<R>) -> Result<R, AnalyticError> {
    let big_delta = cfg.big_delta();
    let ln2 = R::ln_2();
    let f = |x: R| {
        if x <= R::zero() || x >= R::one() {
            return R::zero();
        }
        -x.powf(big_delta - R::one()) * x.ln() / ln2
    };
    // integrable singularity at the origin; help the subdivision along
    let v = integrate_with_breaks(
        f,
        &[R::zero(), R::of(1e-4), R::of(0.05), R::one()],
        &QuadConfig::default(),
    )?;
    Ok(cfg.c_d() * cfg.delta() * v)
}

fn check_shape(m: u32) -> Result<(), AnalyticError> {
    if m == 0 {
        Err(AnalyticError::Domain("integer shape must be >= 1"))
    } else {
        Ok(())
    }
}

fn check_reduced_threshold<R: Real>(s_tilde: R) -> Result<(), AnalyticError> {
    if !s_tilde.is_finite() || s_tilde <= R::zero() {
        Err(AnalyticError::Domain(
            "reduced threshold must be finite and > 0",
        ))
    } else {
        Ok(())
    }
}
