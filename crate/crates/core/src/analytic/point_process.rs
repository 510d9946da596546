//! Distributions of the ordered path-loss points and their faded images.
//!
//! The unfaded points have gamma-family laws in the transformed coordinate
//! `Λ(x)`, so everything here reduces to incomplete-gamma evaluations plus a
//! one-parameter family of fading mixtures. Each cdf/pdf with a closed form
//! dispatches to it; the `_integral` twins always take the quadrature route so
//! tests can hold the two paths against each other.
//!
//! Reordering probabilities are the one genuinely two-dimensional quantity:
//! the chance that fading inverts the distance order of two points. They are
//! scale-free, so they take no network configuration at all.

use crate::fading::FadingSpec;
use crate::geometry::NetworkConfig;
use crate::quad::{integrate, integrate_to_inf_with_breaks, integrate_with_breaks, QuadConfig};
use crate::scalar::Real;
use crate::specfun::{digamma, gamma_p, ln_gamma};

use super::AnalyticError;

/// Expected number of points with loss below `x`: `c_d x^δ`.
pub fn mean_measure<R: Real>(cfg: NetworkConfig<R>, x: R) -> Result<R, AnalyticError> {
    if !x.is_finite() || x < R::zero() {
        return Err(AnalyticError::Domain("loss level must be finite and >= 0"));
    }
    Ok(cfg.c_d() * x.powf(cfg.delta()))
}

/// Density of the mean measure, `c_d δ x^{δ-1}`; at 0 it takes the limit value.
pub fn intensity<R: Real>(cfg: NetworkConfig<R>, x: R) -> Result<R, AnalyticError> {
    if !x.is_finite() || x < R::zero() {
        return Err(AnalyticError::Domain("loss level must be finite and >= 0"));
    }
    let delta = cfg.delta();
    if x == R::zero() {
        return Ok(if delta > R::one() {
            R::zero()
        } else if delta == R::one() {
            cfg.c_d()
        } else {
            R::infinity()
        });
    }
    Ok(cfg.c_d() * delta * x.powf(delta - R::one()))
}

/// Density of the distance to the `i`-th nearest point (generalized gamma).
///
/// Total in `r`: negative arguments give 0, and `r = 0` takes the limit value.
pub fn distance_pdf<R: Real>(cfg: NetworkConfig<R>, i: u64, r: R) -> Result<R, AnalyticError> {
    check_index(i)?;
    if !r.is_finite() {
        return Err(AnalyticError::Domain("distance must be finite"));
    }
    if r < R::zero() {
        return Ok(R::zero());
    }
    let d = R::of(cfg.d() as f64);
    let c_d = cfg.c_d();
    let ri = R::of(i as f64);
    if r == R::zero() {
        // exponent of r is d·i − 1 ≥ 0; only d = i = 1 leaves a finite jump
        return Ok(if cfg.d() == 1 && i == 1 { d * c_d } else { R::zero() });
    }
    let ln = d.ln() + ri * c_d.ln() + (d * ri - R::one()) * r.ln()
        - c_d * r.powf(d)
        - ln_gamma(ri)?;
    Ok(ln.exp())
}

/// Law of the `i`-th unfaded loss: gamma-family cdf plus its closed mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlpLaw<R> {
    cfg: NetworkConfig<R>,
    i: u64,
    mean: R,
}

impl<R: Real> PlpLaw<R> {
    /// `P[x_i ≤ x]`, the regularized lower incomplete gamma at `Λ(x)`.
    pub fn cdf(&self, x: R) -> Result<R, AnalyticError> {
        if !x.is_finite() && x != R::infinity() {
            return Err(AnalyticError::Domain("loss level must not be NaN"));
        }
        if x <= R::zero() {
            return Ok(R::zero());
        }
        if x == R::infinity() {
            return Ok(R::one());
        }
        let t = self.cfg.c_d() * x.powf(self.cfg.delta());
        Ok(gamma_p(R::of(self.i as f64), t)?)
    }

    pub fn mean(&self) -> R {
        self.mean
    }
}

/// Distribution of the `i`-th unfaded loss; the mean is `Γ(i+1/δ)/(Γ(i) c_d^{1/δ})`.
pub fn plp_cdf_and_mean<R: Real>(cfg: NetworkConfig<R>, i: u64) -> Result<PlpLaw<R>, AnalyticError> {
    check_index(i)?;
    let ri = R::of(i as f64);
    let inv_delta = R::one() / cfg.delta();
    let mean = (ln_gamma(ri + inv_delta)? - ln_gamma(ri)? - inv_delta * cfg.c_d().ln()).exp();
    Ok(PlpLaw { cfg, i, mean })
}

/// Cdf of the `i`-th faded loss, dispatching to the tightest available form.
///
/// Degenerate fading reduces to the unfaded cdf. Nakagami with `δ = 1` has a
/// closed form for every `(i, m)` via a finite beta-series; the general case
/// mixes the fading survival over the gamma-distributed loss by quadrature.
pub fn plpf_cdf<R: Real>(
    cfg: NetworkConfig<R>,
    spec: FadingSpec<R>,
    i: u64,
    x: R,
) -> Result<R, AnalyticError> {
    check_index(i)?;
    check_loss(x)?;
    if x == R::zero() {
        return Ok(R::zero());
    }
    let delta = cfg.delta();
    match spec {
        FadingSpec::NoFading => Ok(gamma_p(R::of(i as f64), cfg.c_d() * x.powf(delta))?),
        FadingSpec::Nakagami { m } if delta == R::one() => Ok(nakagami_unit_delta_cdf(
            cfg.c_d(),
            m,
            i,
            x,
        )),
        FadingSpec::Nakagami { .. } => plpf_cdf_integral(cfg, spec, i, x),
    }
}

/// Always-quadrature path for the faded-loss cdf, kept for cross-validation.
pub fn plpf_cdf_integral<R: Real>(
    cfg: NetworkConfig<R>,
    spec: FadingSpec<R>,
    i: u64,
    x: R,
) -> Result<R, AnalyticError> {
    check_index(i)?;
    check_loss(x)?;
    if x == R::zero() {
        return Ok(R::zero());
    }
    let c_d = cfg.c_d();
    let inv_delta = R::one() / cfg.delta();
    let qcfg = QuadConfig::default();
    if spec.is_no_fading() {
        // survival of the degenerate mark is a step: the mixture truncates at Λ(x)
        let upper = c_d * x.powf(cfg.delta());
        let w = erlang_log_weight(i)?;
        let v = integrate(|t| w(t).exp(), R::zero(), upper, &qcfg)?;
        return Ok(v.min(R::one()));
    }
    let w = erlang_log_weight(i)?;
    let f = |t: R| {
        if t <= R::zero() {
            return R::zero();
        }
        let y = (t / c_d).powf(inv_delta);
        spec.survival(y / x) * w(t).exp()
    };
    let v = integrate_to_inf_with_breaks(f, R::zero(), &erlang_breaks(i), &qcfg)?;
    Ok(v.min(R::one()))
}

/// Density of the `i`-th faded loss. Total in `x`: nonpositive arguments give 0
/// (except the closed branches' finite jump limits at the origin).
pub fn plpf_pdf<R: Real>(
    cfg: NetworkConfig<R>,
    spec: FadingSpec<R>,
    i: u64,
    x: R,
) -> Result<R, AnalyticError> {
    check_index(i)?;
    if !x.is_finite() {
        return Err(AnalyticError::Domain("loss level must be finite"));
    }
    if x < R::zero() {
        return Ok(R::zero());
    }
    let c_d = cfg.c_d();
    let delta = cfg.delta();
    let ri = R::of(i as f64);
    if spec.is_no_fading() {
        // generalized gamma in x; x-exponent is δi − 1
        if x == R::zero() {
            let p = delta * ri - R::one();
            return Ok(if p > R::zero() {
                R::zero()
            } else if p == R::zero() {
                (c_d * delta) * c_d.powf(ri - R::one()) / ln_gamma(ri)?.exp()
            } else {
                R::infinity()
            });
        }
        let t = c_d * x.powf(delta);
        let ln = (c_d * delta).ln() + (delta - R::one()) * x.ln() + (ri - R::one()) * t.ln() - t
            - ln_gamma(ri)?;
        return Ok(ln.exp());
    }
    let m = spec
        .nakagami_m()
        .expect("non-degenerate spec carries a shape");
    if delta == R::one() {
        if x == R::zero() {
            return Ok(if i == 1 { c_d } else { R::zero() });
        }
        let ln = ri * c_d.ln() + (ri - R::one()) * x.ln() + m * m.ln() + ln_gamma(ri + m)?
            - ln_gamma(ri)?
            - ln_gamma(m)?
            - (ri + m) * (c_d * x + m).ln();
        return Ok(ln.exp());
    }
    if x == R::zero() {
        return Ok(R::zero());
    }
    let inv_delta = R::one() / delta;
    let w = erlang_log_weight(i)?;
    let f = |t: R| {
        if t <= R::zero() {
            return R::zero();
        }
        let y = (t / c_d).powf(inv_delta);
        let fd = spec
            .pdf(y / x)
            .expect("nakagami density is defined on positive arguments");
        y * fd * w(t).exp()
    };
    let v = integrate_to_inf_with_breaks(f, R::zero(), &erlang_breaks(i), &QuadConfig::default())?;
    Ok(v / (x * x))
}

/// Mean of the `i`-th faded loss; requires `δ = 1` and diverges unless `m > 1`.
pub fn plpf_mean<R: Real>(
    cfg: NetworkConfig<R>,
    spec: FadingSpec<R>,
    i: u64,
) -> Result<R, AnalyticError> {
    check_index(i)?;
    require_unit_delta(cfg)?;
    let ri = R::of(i as f64);
    match spec {
        FadingSpec::NoFading => Ok(ri / cfg.c_d()),
        FadingSpec::Nakagami { m } => {
            if m <= R::one() {
                Err(AnalyticError::Divergent(
                    "faded-loss mean requires shape m > 1",
                ))
            } else {
                Ok(m * ri / (cfg.c_d() * (m - R::one())))
            }
        }
    }
}

/// Variance of the `i`-th faded loss; requires `δ = 1` and diverges unless `m > 2`.
pub fn plpf_variance<R: Real>(
    cfg: NetworkConfig<R>,
    spec: FadingSpec<R>,
    i: u64,
) -> Result<R, AnalyticError> {
    check_index(i)?;
    require_unit_delta(cfg)?;
    let ri = R::of(i as f64);
    let c_d = cfg.c_d();
    match spec {
        FadingSpec::NoFading => Ok(ri / (c_d * c_d)),
        FadingSpec::Nakagami { m } => {
            let two = R::of(2.0);
            if m <= two {
                Err(AnalyticError::Divergent(
                    "faded-loss variance requires shape m > 2",
                ))
            } else {
                let one = R::one();
                let r = m / c_d;
                Ok(r * r * ri * (ri + m - one) / ((m - one) * (m - one) * (m - two)))
            }
        }
    }
}

/// Mean and variance of the `i`-th faded loss, each flagged independently.
#[allow(clippy::type_complexity)]
pub fn plpf_moments<R: Real>(
    cfg: NetworkConfig<R>,
    spec: FadingSpec<R>,
    i: u64,
) -> (Result<R, AnalyticError>, Result<R, AnalyticError>) {
    (plpf_mean(cfg, spec, i), plpf_variance(cfg, spec, i))
}

/// Mean reciprocal faded loss under Rayleigh fading with `δ = 1`: `c_d/(i-1)`.
pub fn path_gain_mean<R: Real>(cfg: NetworkConfig<R>, i: u64) -> Result<R, AnalyticError> {
    check_index(i)?;
    require_unit_delta(cfg)?;
    if i < 2 {
        return Err(AnalyticError::Divergent(
            "reciprocal-loss mean requires i >= 2",
        ));
    }
    Ok(cfg.c_d() / R::of((i - 1) as f64))
}

/// Second moment of the reciprocal faded loss: `2 c_d² / ((i-1)(i-2))`.
///
/// This is the raw second moment, not the centered variance; see
/// [`path_gain_variance`] for the centered value.
pub fn path_gain_second_moment<R: Real>(cfg: NetworkConfig<R>, i: u64) -> Result<R, AnalyticError> {
    check_index(i)?;
    require_unit_delta(cfg)?;
    if i < 3 {
        return Err(AnalyticError::Divergent(
            "reciprocal-loss second moment requires i >= 3",
        ));
    }
    let c = cfg.c_d();
    Ok(R::of(2.0) * c * c / R::of(((i - 1) * (i - 2)) as f64))
}

/// Centered variance of the reciprocal faded loss: `c_d² i / ((i-1)²(i-2))`.
pub fn path_gain_variance<R: Real>(cfg: NetworkConfig<R>, i: u64) -> Result<R, AnalyticError> {
    check_index(i)?;
    require_unit_delta(cfg)?;
    if i < 3 {
        return Err(AnalyticError::Divergent(
            "reciprocal-loss variance requires i >= 3",
        ));
    }
    let c = cfg.c_d();
    let im1 = R::of((i - 1) as f64);
    Ok(c * c * R::of(i as f64) / (im1 * im1 * R::of((i - 2) as f64)))
}

/// Differential entropy of the `i`-th faded loss, for the cases with closed forms:
/// Rayleigh `δ = 1` at any index, and general Nakagami `δ = 1` at index 1.
pub fn plpf_entropy<R: Real>(
    cfg: NetworkConfig<R>,
    spec: FadingSpec<R>,
    i: u64,
) -> Result<R, AnalyticError> {
    check_index(i)?;
    require_unit_delta(cfg)?;
    let c_d = cfg.c_d();
    match spec {
        FadingSpec::NoFading => Err(AnalyticError::Unsupported(
            "entropy is implemented for nakagami marks only",
        )),
        FadingSpec::Nakagami { m } if m == R::one() => {
            // 2·H_i + (i−1)/i − ln(i·c_d), with H_i the i-th harmonic number
            let ri = R::of(i as f64);
            let h_i = digamma(ri + R::one())? + R::euler_gamma();
            Ok(R::of(2.0) * h_i + (ri - R::one()) / ri - (ri * c_d).ln())
        }
        FadingSpec::Nakagami { m } if i == 1 => Ok(R::one() + R::one() / m - c_d.ln()),
        FadingSpec::Nakagami { .. } => Err(AnalyticError::Unsupported(
            "entropy for general shapes is closed only at index 1",
        )),
    }
}

/// Differential entropy of the reciprocal faded loss under Rayleigh fading,
/// `(i+1)/i + ln(π/i)`; the constant is tied to the planar case, so `d = 2` only.
pub fn path_gain_entropy<R: Real>(cfg: NetworkConfig<R>, i: u64) -> Result<R, AnalyticError> {
    check_index(i)?;
    require_unit_delta(cfg)?;
    if cfg.d() != 2 {
        return Err(AnalyticError::Unsupported(
            "reciprocal-loss entropy is closed for two dimensions only",
        ));
    }
    let ri = R::of(i as f64);
    Ok((ri + R::one()) / ri + (R::pi() / ri).ln())
}

/// `P[ξ_i > ξ_{i+j}]` under Rayleigh fading with `δ = 1` — the probability that
/// fading inverts the order of the `i`-th and `(i+j)`-th points. Scale-free.
///
/// The handful of small cases with logarithmic closed forms are returned
/// directly; everything else goes through the nested quadrature.
pub fn reorder_probability<R: Real>(i: u64, j: u64) -> Result<R, AnalyticError> {
    check_index(i)?;
    check_index(j)?;
    let ln2 = R::ln_2();
    let closed = match (i, j) {
        (1, 1) => Some(R::one() - ln2),
        (1, 2) => Some(R::of(3.0) - R::of(4.0) * ln2),
        (2, 2) => Some(R::of(12.0) * ln2 - R::of(8.0)),
        (3, 3) => Some(R::of(167.0 / 2.0) - R::of(120.0) * ln2),
        (4, 4) => Some(R::of(1120.0) * ln2 - R::of(776.0)),
        _ => None,
    };
    match closed {
        Some(v) => Ok(v),
        None => reorder_probability_quadrature(i, j),
    }
}

/// Nested-quadrature path for the reordering probability: the order flips when
/// an independent exponential ratio clears `(u+v)/u`, giving `E[u/(2u+v)]`
/// over independent gamma variables `u` (shape `i`) and `v` (shape `j`).
pub fn reorder_probability_quadrature<R: Real>(i: u64, j: u64) -> Result<R, AnalyticError> {
    check_index(i)?;
    check_index(j)?;
    let outer_w = erlang_log_weight(i)?;
    let inner_w = erlang_log_weight(j)?;
    let inner_breaks = erlang_breaks::<R>(j);
    let inner_cfg = QuadConfig::relaxed(100.0);
    let outer_cfg = QuadConfig::relaxed(10.0);
    let two = R::of(2.0);
    let f = |u: R| {
        if u <= R::zero() {
            return R::zero();
        }
        let inner = integrate_to_inf_with_breaks(
            |v: R| {
                if v < R::zero() {
                    return R::zero();
                }
                inner_w(v).exp() * u / (two * u + v)
            },
            R::zero(),
            &inner_breaks,
            &inner_cfg,
        );
        // a failed inner integral surfaces as a non-finite outer sample
        match inner {
            Ok(v) => outer_w(u).exp() * v,
            Err(_) => R::nan(),
        }
    };
    Ok(integrate_to_inf_with_breaks(f, R::zero(), &erlang_breaks(i), &outer_cfg)?)
}

/// `P[ξ_i > max(ξ_{i+1}, …, ξ_{i+j})]`: the `i`-th point falls behind all of
/// the next `j` at once. Reduces to a one-dimensional integral by integrating
/// the shared exponential factor first:
/// `i ∫₀^∞ (1+(j+1)t)^{-(i+1)} ∏_{k=1}^{j} (1+kt)^{-1} dt`.
pub fn reorder_among_next<R: Real>(i: u64, j: u64) -> Result<R, AnalyticError> {
    check_index(i)?;
    check_index(j)?;
    let ri = R::of(i as f64);
    let rj1 = R::of((j + 1) as f64);
    let f = |t: R| {
        if t < R::zero() {
            return R::zero();
        }
        let mut p = (R::one() + rj1 * t).powf(-(ri + R::one()));
        for k in 1..=j {
            p /= R::one() + R::of(k as f64) * t;
        }
        p
    };
    // the first factor decays on the scale 1/(i(j+1))
    let a = R::one() / (ri * rj1);
    let breaks = [a, R::of(10.0) * a, R::of(100.0) * a];
    let v = integrate_to_inf_with_breaks(f, R::zero(), &breaks, &QuadConfig::default())?;
    Ok(ri * v)
}

/// Cdf of the faded loss of a point conditioned to lie within loss `a`,
/// dispatching to the closed forms where they exist.
pub fn conditioned_plpf_cdf<R: Real>(
    cfg: NetworkConfig<R>,
    spec: FadingSpec<R>,
    a: R,
    x: R,
) -> Result<R, AnalyticError> {
    check_window(a)?;
    check_loss(x)?;
    if x == R::zero() {
        return Ok(R::zero());
    }
    let delta = cfg.delta();
    match spec {
        FadingSpec::NoFading => Ok((x / a).powf(delta).min(R::one())),
        FadingSpec::Nakagami { m } if m == R::one() && delta == R::one() => {
            Ok((x / a) * -(-(a / x)).exp_m1())
        }
        FadingSpec::Nakagami { m } if m == R::one() && delta == R::of(0.5) => {
            let half_sqrt_pi = R::pi().sqrt() / R::of(2.0);
            let r = x / a;
            Ok((half_sqrt_pi * r.sqrt() * crate::specfun::erf((R::one() / r).sqrt())?).min(R::one()))
        }
        FadingSpec::Nakagami { .. } => conditioned_plpf_cdf_integral(cfg, spec, a, x),
    }
}

/// Always-quadrature path for the conditioned cdf: the position has cdf
/// `(y/a)^δ` on `[0, a]`, so after substituting `u = (y/a)^δ` the cdf is
/// `∫₀^1 Q_f(a u^{1/δ} / x) du`.
pub fn conditioned_plpf_cdf_integral<R: Real>(
    cfg: NetworkConfig<R>,
    spec: FadingSpec<R>,
    a: R,
    x: R,
) -> Result<R, AnalyticError> {
    check_window(a)?;
    check_loss(x)?;
    if x == R::zero() {
        return Ok(R::zero());
    }
    let inv_delta = R::one() / cfg.delta();
    let f = |u: R| {
        if u <= R::zero() {
            return R::one();
        }
        spec.survival(a * u.powf(inv_delta) / x)
    };
    // the survival transitions where the mark argument passes 1
    let knee = (x / a).powf(cfg.delta());
    let v = if knee > R::zero() && knee < R::one() {
        integrate_with_breaks(
            f,
            &[R::zero(), knee, R::one()],
            &QuadConfig::default(),
        )?
    } else {
        integrate(f, R::zero(), R::one(), &QuadConfig::default())?
    };
    Ok(v.min(R::one()))
}

/// Closed cdf for Nakagami marks at `δ = 1`: with `z = c_d x/(c_d x + m)`,
/// `F = 1 − (1−z)^m Σ_{k<i} Γ(m+k)/(Γ(m) k!) z^k`, accumulated in log space.
fn nakagami_unit_delta_cdf<R: Real>(c_d: R, m: R, i: u64, x: R) -> R {
    let z = c_d * x / (c_d * x + m);
    let ln_z = z.ln();
    let mut ln_term = R::zero();
    let mut ln_sum = R::zero();
    for k in 1..i {
        let rk = R::of(k as f64);
        ln_term += ln_z + (m + rk - R::one()).ln() - rk.ln();
        ln_sum = log_add_exp(ln_sum, ln_term);
    }
    -(m * (-z).ln_1p() + ln_sum).exp_m1()
}

fn log_add_exp<R: Real>(a: R, b: R) -> R {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Log-density of the unit-rate gamma law with integer shape `i`, as a closure.
fn erlang_log_weight<R: Real>(i: u64) -> Result<impl Fn(R) -> R + Copy, AnalyticError> {
    let ri = R::of(i as f64);
    let ln_gamma_i = ln_gamma(ri)?;
    Ok(move |t: R| {
        if i == 1 {
            -t - ln_gamma_i
        } else {
            (ri - R::one()) * t.ln() - t - ln_gamma_i
        }
    })
}

/// Breakpoints bracketing the bulk of a unit-rate gamma with shape `i`.
fn erlang_breaks<R: Real>(i: u64) -> Vec<R> {
    let ri = i as f64;
    let sd = ri.sqrt();
    [ri - 6.0 * sd, ri - 3.0 * sd, ri + 3.0 * sd, ri + 6.0 * sd]
        .into_iter()
        .filter(|&b| b > 0.0)
        .map(R::of)
        .collect()
}

fn check_index(i: u64) -> Result<(), AnalyticError> {
    if i == 0 {
        Err(AnalyticError::Domain("point index must be >= 1"))
    } else {
        Ok(())
    }
}

fn check_loss<R: Real>(x: R) -> Result<(), AnalyticError> {
    if x.is_nan() || x < R::zero() || x == R::infinity() {
        Err(AnalyticError::Domain("loss level must be finite and >= 0"))
    } else {
        Ok(())
    }
}

fn check_window<R: Real>(a: R) -> Result<(), AnalyticError> {
    if !a.is_finite() || a <= R::zero() {
        Err(AnalyticError::Domain("conditioning window must be finite and > 0"))
    } else {
        Ok(())
    }
}

fn require_unit_delta<R: Real>(cfg: NetworkConfig<R>) -> Result<(), AnalyticError> {
    if cfg.delta() == R::one() {
        Ok(())
    } else {
        Err(AnalyticError::Unsupported(
            "closed form requires dimension-to-exponent ratio delta = 1",
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fading::FadingSpec;
    use std::f64::consts::PI;

    fn planar(alpha: f64) -> NetworkConfig<f64> {
        NetworkConfig::new(2, alpha).unwrap()
    }

    fn rayleigh() -> FadingSpec<f64> {
        FadingSpec::rayleigh()
    }

    #[test]
    fn mean_measure_matches_ball_volume_scaling() {
        let lin = planar(2.0);
        assert!((mean_measure(lin, 4.0).unwrap() - 4.0 * PI).abs() < 1e-12);
        let sub = planar(4.0);
        assert!((mean_measure(sub, 9.0).unwrap() - 3.0 * PI).abs() < 1e-12);
        assert_eq!(mean_measure(sub, 0.0).unwrap(), 0.0);
        assert!(mean_measure(sub, -1.0).is_err());
    }

    #[test]
    fn intensity_is_measure_derivative() {
        let cfg = planar(4.0);
        let x = 1.7;
        let h = 1e-6;
        let num =
            (mean_measure(cfg, x + h).unwrap() - mean_measure(cfg, x - h).unwrap()) / (2.0 * h);
        assert!((intensity(cfg, x).unwrap() - num).abs() < 1e-7);
        assert_eq!(intensity(planar(2.0), 0.0).unwrap(), PI);
        assert_eq!(intensity(NetworkConfig::new(3, 2.0).unwrap(), 0.0).unwrap(), 0.0);
    }

    #[test]
    fn distance_pdf_mode_and_normalization() {
        let cfg = planar(2.0);
        // nearest-point distance peaks at 1/sqrt(2π)
        let mode = 1.0 / (2.0 * PI).sqrt();
        let at = distance_pdf(cfg, 1, mode).unwrap();
        assert!(at > distance_pdf(cfg, 1, mode * 0.98).unwrap());
        assert!(at > distance_pdf(cfg, 1, mode * 1.02).unwrap());
        for i in [1, 2, 5] {
            let total = integrate_to_inf_with_breaks(
                |r: f64| distance_pdf(cfg, i, r).unwrap(),
                0.0,
                &[0.5, 2.0, 5.0],
                &QuadConfig::default(),
            )
            .unwrap();
            assert!((total - 1.0).abs() < 1e-9, "i={i} total={total}");
        }
        let line = NetworkConfig::new(1, 2.0).unwrap();
        assert_eq!(distance_pdf(line, 1, 0.0).unwrap(), 2.0);
        assert_eq!(distance_pdf(cfg, 3, 0.0).unwrap(), 0.0);
        assert_eq!(distance_pdf(cfg, 3, -1.0).unwrap(), 0.0);
    }

    #[test]
    fn plp_law_mean_and_cdf() {
        let cfg = planar(2.0);
        for i in [1u64, 4] {
            let law = plp_cdf_and_mean(cfg, i).unwrap();
            assert!((law.mean() - i as f64 / PI).abs() < 1e-12);
        }
        let sub = planar(4.0);
        let law = plp_cdf_and_mean(sub, 1).unwrap();
        assert!((law.mean() - 2.0 / (PI * PI)).abs() < 1e-14);
        assert_eq!(law.cdf(0.0).unwrap(), 0.0);
        assert!((law.cdf(f64::INFINITY).unwrap() - 1.0).abs() < 1e-15);
        // cdf is the incomplete-gamma of the transformed level
        let x = 0.8f64;
        let expect = gamma_p(1.0, PI * x.sqrt()).unwrap();
        assert!((law.cdf(x).unwrap() - expect).abs() < 1e-14);
    }

    #[test]
    fn plpf_cdf_standard_closed_form() {
        let cfg = planar(2.0);
        for &x in &[0.05, 0.3, 1.0, 7.0] {
            let f1 = plpf_cdf(cfg, rayleigh(), 1, x).unwrap();
            assert!((f1 - PI * x / (PI * x + 1.0)).abs() < 1e-12);
            let f3 = plpf_cdf(cfg, rayleigh(), 3, x).unwrap();
            assert!((f3 - (PI * x / (PI * x + 1.0)).powi(3)).abs() < 1e-12);
        }
        assert_eq!(plpf_cdf(cfg, rayleigh(), 1, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn plpf_cdf_nakagami_closed_values() {
        let cfg = planar(2.0);
        let m2 = FadingSpec::nakagami(2.0).unwrap();
        let f = plpf_cdf(cfg, m2, 1, 1.0).unwrap();
        assert!((f - 0.848_691_035_694_257_590_738).abs() < 1e-12);
        let f22 = plpf_cdf(cfg, m2, 2, 1.0).unwrap();
        assert!((f22 - 0.663_786_799_706_866_946_456).abs() < 1e-12);
    }

    #[test]
    fn plpf_cdf_high_shape_approaches_degenerate() {
        let cfg = planar(2.0);
        let stiff = FadingSpec::nakagami(500.0).unwrap();
        for &x in &[0.1, 0.3, 1.0] {
            let f = plpf_cdf(cfg, stiff, 1, x).unwrap();
            let lim = 1.0 - (-PI * x).exp();
            assert!((f - lim).abs() < 2e-2, "x={x} f={f} lim={lim}");
        }
    }

    #[test]
    fn plpf_cdf_integral_agrees_with_closed_forms() {
        let cfg = planar(2.0);
        let m2 = FadingSpec::nakagami(2.0).unwrap();
        for &x in &[0.2, 1.0, 3.0] {
            let closed = plpf_cdf(cfg, m2, 2, x).unwrap();
            let quad = plpf_cdf_integral(cfg, m2, 2, x).unwrap();
            assert!((closed - quad).abs() < 1e-8, "x={x}");
        }
        // degenerate marks reduce to the unfaded cdf
        let nf = FadingSpec::no_fading();
        let sub = planar(4.0);
        for &x in &[0.5, 2.0] {
            let quad = plpf_cdf_integral(sub, nf, 3, x).unwrap();
            let closed = plpf_cdf(sub, nf, 3, x).unwrap();
            assert!((quad - closed).abs() < 1e-9);
        }
    }

    #[test]
    fn plpf_cdf_integral_sub_unit_delta_oracle() {
        let sub = planar(4.0);
        let m2 = FadingSpec::nakagami(2.0).unwrap();
        let f = plpf_cdf_integral(sub, m2, 1, 1.0).unwrap();
        assert!((f - 0.914_318_882_984_752_063_127).abs() < 1e-10);
        let disp = plpf_cdf(sub, m2, 1, 1.0).unwrap();
        assert_eq!(f, disp);
    }

    #[test]
    fn plpf_pdf_closed_branches() {
        let cfg = planar(2.0);
        for &x in &[0.1, 0.9, 4.0] {
            let f = plpf_pdf(cfg, rayleigh(), 1, x).unwrap();
            assert!((f - PI / (1.0 + PI * x).powi(2)).abs() < 1e-12);
        }
        // density at the origin jumps to c_d for the nearest point, any shape
        let m3 = FadingSpec::nakagami(3.0).unwrap();
        assert!((plpf_pdf(cfg, m3, 1, 0.0).unwrap() - PI).abs() < 1e-12);
        assert_eq!(plpf_pdf(cfg, m3, 2, 0.0).unwrap(), 0.0);
        assert_eq!(plpf_pdf(cfg, m3, 2, -0.5).unwrap(), 0.0);
    }

    #[test]
    fn plpf_pdf_differentiates_cdf() {
        let cfg = planar(2.0);
        let m2 = FadingSpec::nakagami(2.0).unwrap();
        let h = 1e-5;
        for &x in &[0.4, 1.3] {
            let num = (plpf_cdf(cfg, m2, 2, x + h).unwrap() - plpf_cdf(cfg, m2, 2, x - h).unwrap())
                / (2.0 * h);
            assert!((plpf_pdf(cfg, m2, 2, x).unwrap() - num).abs() < 1e-6);
        }
        let sub = planar(4.0);
        for &x in &[0.6, 1.5] {
            let num = (plpf_cdf_integral(sub, m2, 1, x + h).unwrap()
                - plpf_cdf_integral(sub, m2, 1, x - h).unwrap())
                / (2.0 * h);
            assert!((plpf_pdf(sub, m2, 1, x).unwrap() - num).abs() < 1e-6);
        }
    }

    #[test]
    fn plpf_pdf_degenerate_marks() {
        let sub = planar(4.0);
        let nf = FadingSpec::no_fading();
        // unfaded density integrates to one
        let total = integrate_to_inf_with_breaks(
            |x: f64| plpf_pdf(sub, nf, 2, x).unwrap(),
            0.0,
            &[0.5, 2.0, 10.0],
            &QuadConfig::default(),
        )
        .unwrap();
        assert!((total - 1.0).abs() < 1e-8);
        // x-exponent δi−1 = 0 leaves a finite origin value c_d δ · c_d / Γ(2)
        let v = plpf_pdf(sub, nf, 2, 0.0).unwrap();
        assert!((v - 0.5 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn plpf_moments_closed_values_and_divergence() {
        let cfg = planar(2.0);
        let m2 = FadingSpec::nakagami(2.0).unwrap();
        assert!((plpf_mean(cfg, m2, 3).unwrap() - 6.0 / PI).abs() < 1e-12);
        assert!(matches!(
            plpf_mean(cfg, rayleigh(), 1),
            Err(AnalyticError::Divergent(_))
        ));
        let m3 = FadingSpec::nakagami(3.0).unwrap();
        assert!((plpf_variance(cfg, m3, 2).unwrap() - 18.0 / (PI * PI)).abs() < 1e-12);
        assert!(matches!(
            plpf_variance(cfg, m2, 2),
            Err(AnalyticError::Divergent(_))
        ));
        let nf = FadingSpec::no_fading();
        assert!((plpf_mean(cfg, nf, 4).unwrap() - 4.0 / PI).abs() < 1e-12);
        assert!((plpf_variance(cfg, nf, 4).unwrap() - 4.0 / (PI * PI)).abs() < 1e-12);
        let (mean, var) = plpf_moments(planar(4.0), m2, 1);
        assert!(matches!(mean, Err(AnalyticError::Unsupported(_))));
        assert!(matches!(var, Err(AnalyticError::Unsupported(_))));
    }

    #[test]
    fn path_gain_moment_trio() {
        let cfg = planar(2.0);
        assert!((path_gain_mean(cfg, 3).unwrap() - PI / 2.0).abs() < 1e-12);
        assert!((path_gain_second_moment(cfg, 3).unwrap() - PI * PI).abs() < 1e-12);
        assert!((path_gain_variance(cfg, 3).unwrap() - 0.75 * PI * PI).abs() < 1e-12);
        assert!(matches!(
            path_gain_mean(cfg, 1),
            Err(AnalyticError::Divergent(_))
        ));
        assert!(matches!(
            path_gain_second_moment(cfg, 2),
            Err(AnalyticError::Divergent(_))
        ));
    }

    #[test]
    fn plpf_entropy_closed_cases() {
        let cfg = planar(2.0);
        let h1 = plpf_entropy(cfg, rayleigh(), 1).unwrap();
        assert!((h1 - 0.855_270_114_150_599_825_857).abs() < 1e-12);
        let h3 = plpf_entropy(cfg, rayleigh(), 3).unwrap();
        assert!((h3 - 2.089_991_158_815_823_467_795).abs() < 1e-12);
        let m2 = FadingSpec::nakagami(2.0).unwrap();
        let hm2 = plpf_entropy(cfg, m2, 1).unwrap();
        assert!((hm2 - 0.355_270_114_150_599_825_857).abs() < 1e-12);
        assert!(matches!(
            plpf_entropy(cfg, m2, 2),
            Err(AnalyticError::Unsupported(_))
        ));
        assert!(matches!(
            plpf_entropy(planar(4.0), rayleigh(), 1),
            Err(AnalyticError::Unsupported(_))
        ));
    }

    #[test]
    fn plpf_entropy_matches_direct_integral() {
        let cfg = planar(2.0);
        let neg_f_ln_f = |x: f64| {
            let f = plpf_pdf(cfg, rayleigh(), 1, x).unwrap();
            if f <= 0.0 {
                0.0
            } else {
                -f * f.ln()
            }
        };
        let direct = integrate_to_inf_with_breaks(
            neg_f_ln_f,
            0.0,
            &[0.1, 1.0, 10.0, 100.0],
            &QuadConfig::default(),
        )
        .unwrap();
        assert!((direct - plpf_entropy(cfg, rayleigh(), 1).unwrap()).abs() < 1e-7);
    }

    #[test]
    fn path_gain_entropy_values_and_monotonicity() {
        let cfg = planar(2.0);
        assert!((path_gain_entropy(cfg, 1).unwrap() - 3.144_729_885_849_400_174_143).abs() < 1e-12);
        assert!((path_gain_entropy(cfg, 4).unwrap() - 1.008_435_524_729_509_555_309).abs() < 1e-12);
        let mut prev = f64::INFINITY;
        for i in 1..=20 {
            let h = path_gain_entropy(cfg, i).unwrap();
            assert!(h < prev);
            prev = h;
        }
        assert!(matches!(
            path_gain_entropy(NetworkConfig::new(3, 3.0).unwrap(), 1),
            Err(AnalyticError::Unsupported(_))
        ));
    }

    #[test]
    fn reorder_closed_forms_match_quadrature() {
        let ln2 = std::f64::consts::LN_2;
        let cases: [(u64, u64, f64); 5] = [
            (1, 1, 1.0 - ln2),
            (1, 2, 3.0 - 4.0 * ln2),
            (2, 2, 12.0 * ln2 - 8.0),
            (3, 3, 167.0 / 2.0 - 120.0 * ln2),
            (4, 4, 1120.0 * ln2 - 776.0),
        ];
        for (i, j, closed) in cases {
            let p: f64 = reorder_probability(i, j).unwrap();
            assert!((p - closed).abs() < 1e-14, "closed ({i},{j})");
            let q: f64 = reorder_probability_quadrature(i, j).unwrap();
            assert!((q - closed).abs() < 1e-6, "quad ({i},{j}): {q} vs {closed}");
        }
    }

    #[test]
    fn reorder_quadrature_oracles() {
        let p52: f64 = reorder_probability(5, 2).unwrap();
        assert!((p52 - 0.411_169_166_403_281_434_966).abs() < 1e-7);
        let p200: f64 = reorder_probability(200, 3).unwrap();
        assert!((p200 - 0.496_268_749_066_114_337_586).abs() < 1e-6);
        // pairwise probabilities tend to 1/2, not 1/(j+1)
        assert!(p200 > 0.49);
    }

    #[test]
    fn reorder_among_next_oracles() {
        let a11: f64 = reorder_among_next(1, 1).unwrap();
        let p11: f64 = reorder_probability(1, 1).unwrap();
        assert!((a11 - p11).abs() < 1e-9);
        let cases: [(u64, u64, f64); 5] = [
            (1, 2, 0.152_792_639_734_369_894_937),
            (2, 3, 0.136_558_937_507_062_426_346),
            (30, 5, 0.153_704_966_681_297_529_523),
            (200, 3, 0.248_135_138_357_180_415_370),
            (1000, 3, 0.249_625_406_108_868_043_941),
        ];
        for (i, j, expect) in cases {
            let v: f64 = reorder_among_next(i, j).unwrap();
            assert!((v - expect).abs() < 1e-9, "among({i},{j}): {v} vs {expect}");
        }
    }

    #[test]
    fn conditioned_cdf_closed_forms() {
        let cfg = planar(2.0);
        let f = conditioned_plpf_cdf(cfg, rayleigh(), 1.0, 0.5).unwrap();
        assert!((f - 0.432_332_358_381_693_654_053).abs() < 1e-12);
        let sub = planar(4.0);
        let g = conditioned_plpf_cdf(sub, rayleigh(), 2.0, 2.0).unwrap();
        assert!((g - 0.746_824_132_812_427_025_399).abs() < 1e-12);
        let g2 = conditioned_plpf_cdf(sub, rayleigh(), 2.0, 0.5).unwrap();
        assert!((g2 - 0.441_040_695_381_210_839_984).abs() < 1e-12);
        let nf = FadingSpec::no_fading();
        assert!((conditioned_plpf_cdf(sub, nf, 4.0, 1.0).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(conditioned_plpf_cdf(sub, nf, 4.0, 9.0).unwrap(), 1.0);
        // saturation in the far tail
        assert!(conditioned_plpf_cdf(cfg, rayleigh(), 1.0, 1e9).unwrap() > 1.0 - 1e-8);
    }

    #[test]
    fn conditioned_cdf_integral_matches_closed() {
        let cfg = planar(2.0);
        for &(a, x) in &[(1.0, 0.5), (3.0, 0.2), (0.5, 2.0)] {
            let closed = conditioned_plpf_cdf(cfg, rayleigh(), a, x).unwrap();
            let quad = conditioned_plpf_cdf_integral(cfg, rayleigh(), a, x).unwrap();
            assert!((closed - quad).abs() < 1e-9, "a={a} x={x}");
        }
        let sub = planar(4.0);
        for &(a, x) in &[(2.0, 2.0), (2.0, 0.5)] {
            let closed = conditioned_plpf_cdf(sub, rayleigh(), a, x).unwrap();
            let quad = conditioned_plpf_cdf_integral(sub, rayleigh(), a, x).unwrap();
            assert!((closed - quad).abs() < 1e-9, "a={a} x={x}");
        }
        // no closed form: still a monotone cdf
        let m2 = FadingSpec::nakagami(2.0).unwrap();
        let mut prev = 0.0;
        for &x in &[0.1, 0.3, 1.0, 3.0, 30.0] {
            let v = conditioned_plpf_cdf(cfg, m2, 1.0, x).unwrap();
            assert!(v >= prev && v <= 1.0);
            prev = v;
        }
    }
}
