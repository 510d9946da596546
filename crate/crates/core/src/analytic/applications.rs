//! Network-facing consequences of the loss law: the farthest connected point,
//! the best relay for forward progress, per-retransmission target densities,
//! and index localization from a gain measurement.
//!
//! Everything here composes the primitives from the sibling modules; the only
//! new analysis is which of several equivalent forms stays stable where
//! (log-space for the discrete progress table, tail quadrature for non-unit
//! `δ`, exact argmax indices from ratio tests instead of scans).

use crate::fading::FadingSpec;
use crate::geometry::{truncation_tail, NetworkConfig};
use crate::quad::{integrate_to_inf_with_breaks, QuadConfig};
use crate::scalar::Real;
use crate::specfun::{digamma, gamma, ln_gamma};

use super::point_process::plpf_pdf;
use super::AnalyticError;

/// Law of the largest connected path loss (equivalently the farthest
/// connected point) at threshold `1/s`, including its atom at "nothing
/// connects".
#[derive(Debug, Clone, Copy)]
pub struct MaxDistanceLaw<R: Real> {
    cfg: NetworkConfig<R>,
    spec: FadingSpec<R>,
    s: R,
    expected: R,
}

/// Build the farthest-connected-point law for a threshold `1/s`.
pub fn max_distance<R: Real>(
    cfg: NetworkConfig<R>,
    spec: FadingSpec<R>,
    s: R,
) -> Result<MaxDistanceLaw<R>, AnalyticError> {
    if !s.is_finite() || s <= R::zero() {
        return Err(AnalyticError::Domain("threshold must be finite and > 0"));
    }
    let expected = truncation_tail(cfg, spec, s, R::zero())?;
    Ok(MaxDistanceLaw {
        cfg,
        spec,
        s,
        expected,
    })
}

impl<R: Real> MaxDistanceLaw<R> {
    /// Mean number of connected points at this threshold.
    pub fn expected_connected(&self) -> R {
        self.expected
    }

    /// Probability that no point at all connects; the cdf's jump at zero.
    pub fn isolation_atom(&self) -> R {
        (-self.expected).exp()
    }

    /// Cdf in the loss variable: `P(max connected loss ≤ x) = e^{−Λ̂((x,∞))}`.
    pub fn cdf_loss(&self, x: R) -> Result<R, AnalyticError> {
        if x.is_nan() {
            return Err(AnalyticError::Domain("loss level must not be NaN"));
        }
        if x < R::zero() {
            return Ok(R::zero());
        }
        if x == R::zero() {
            return Ok(self.isolation_atom());
        }
        if x == R::infinity() {
            return Ok(R::one());
        }
        if self.cfg.delta() == R::one() && self.spec.nakagami_m() == Some(R::one()) {
            // tail integral collapses to (c_d/s) e^{−sx}
            let tail = self.cfg.c_d() / self.s * (-self.s * x).exp();
            return Ok((-tail).exp());
        }
        Ok((-truncation_tail(self.cfg, self.spec, self.s, x)?).exp())
    }

    /// Cdf in the distance variable, `P(max connected distance ≤ r)`.
    pub fn cdf_distance(&self, r: R) -> Result<R, AnalyticError> {
        if r.is_nan() {
            return Err(AnalyticError::Domain("distance must not be NaN"));
        }
        if r < R::zero() {
            return Ok(R::zero());
        }
        self.cdf_loss(r.powf(self.cfg.alpha()))
    }

    /// Upper bound on the mean of the distance law via concavity of
    /// `x ↦ x^{1/α}`: `((Ψ(c_d/s + 1) + γ)/s)^{1/α}`. Exponential-mark,
    /// unit-`δ` case only.
    pub fn jensen_bound(&self) -> Result<R, AnalyticError> {
        if self.cfg.delta() != R::one() || self.spec.nakagami_m() != Some(R::one()) {
            return Err(AnalyticError::Unsupported(
                "mean bound derived only for the exponential-mark unit-delta case",
            ));
        }
        let mean_loss = (digamma(self.cfg.c_d() / self.s + R::one())? + R::euler_gamma()) / self.s;
        Ok(mean_loss.powf(R::one() / self.cfg.alpha()))
    }
}

/// Loss level and value of the best expected forward progress per hop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuousProgress<R> {
    /// Loss level maximizing `x^{1/α} · Q_f(sx)`; for degenerate marks the
    /// supremum sits at the connectivity edge and is not attained.
    pub optimum_loss: R,
    /// The optimal expected progress `distance × success probability`.
    pub value: R,
}

/// Per-index expected progress when relaying through the `i`-th nearest point.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteProgress<R> {
    /// Exact argmax index, `⌈c_d/(αs)⌉` (ties resolve to the smaller index).
    pub i_opt: u64,
    /// Real-valued stationary point `1/(α ln(1 + s/c_d))` of the same curve.
    pub i_tilde: R,
    /// Progress table `g[i-1] = E[r_i · success_i]` for `i` up to ten times
    /// the optimum, enough to show the maximum and the far-side decay.
    pub g: Vec<R>,
}

/// Continuous relaxation plus (for exponential marks with `δ = 1`) the exact
/// nearest-index solution of the progress problem.
#[derive(Debug, Clone, PartialEq)]
pub struct Progress<R> {
    pub continuous: ContinuousProgress<R>,
    pub discrete: Option<DiscreteProgress<R>>,
}

/// Best expected forward progress toward a distant destination.
pub fn probabilistic_progress<R: Real>(
    cfg: NetworkConfig<R>,
    spec: FadingSpec<R>,
    s: R,
) -> Result<Progress<R>, AnalyticError> {
    if !s.is_finite() || s <= R::zero() {
        return Err(AnalyticError::Domain("threshold must be finite and > 0"));
    }
    let alpha = cfg.alpha();
    let continuous = match spec {
        FadingSpec::NoFading => ContinuousProgress {
            optimum_loss: R::one() / s,
            value: s.powf(-R::one() / alpha),
        },
        FadingSpec::Nakagami { m } if m == R::one() => {
            let x = R::one() / (alpha * s);
            ContinuousProgress {
                optimum_loss: x,
                value: x.powf(R::one() / alpha) * (-R::one() / alpha).exp(),
            }
        }
        FadingSpec::Nakagami { .. } => maximize_continuous(cfg, spec, s)?,
    };
    let discrete = if cfg.delta() == R::one() && spec.nakagami_m() == Some(R::one()) {
        let ratio = cfg.c_d() / (alpha * s);
        let i_opt = ratio.ceil().as_f64() as u64;
        let i_opt = i_opt.max(1);
        let i_tilde = R::one() / (alpha * (s / cfg.c_d()).ln_1p());
        let top = (i_opt.saturating_mul(10)).max(10);
        let mut g = Vec::with_capacity(top as usize);
        for i in 1..=top {
            g.push(progress_g(cfg, s, i)?);
        }
        Some(DiscreteProgress { i_opt, i_tilde, g })
    } else {
        None
    };
    Ok(Progress {
        continuous,
        discrete,
    })
}

/// Expected progress through the `i`-th nearest point under exponential marks
/// with `δ = 1`: `c_d^i Γ(i + 1/α) / (Γ(i) (s + c_d)^{i + 1/α})`.
pub fn progress_g<R: Real>(cfg: NetworkConfig<R>, s: R, i: u64) -> Result<R, AnalyticError> {
    if cfg.delta() != R::one() {
        return Err(AnalyticError::Unsupported(
            "per-index progress derived only for unit delta",
        ));
    }
    if i == 0 {
        return Err(AnalyticError::Domain("index must be >= 1"));
    }
    if !s.is_finite() || s <= R::zero() {
        return Err(AnalyticError::Domain("threshold must be finite and > 0"));
    }
    let ri = R::of(i as f64);
    let inv_alpha = R::one() / cfg.alpha();
    Ok((ri * cfg.c_d().ln() + ln_gamma(ri + inv_alpha)? - ln_gamma(ri)?
        - (ri + inv_alpha) * (s + cfg.c_d()).ln())
    .exp())
}

fn maximize_continuous<R: Real>(
    cfg: NetworkConfig<R>,
    spec: FadingSpec<R>,
    s: R,
) -> Result<ContinuousProgress<R>, AnalyticError> {
    let alpha = cfg.alpha();
    let inv_alpha = R::one() / alpha;
    let objective = |x: R| x.powf(inv_alpha) * spec.survival(s * x);
    // bracket the peak on a log grid around the exponential-mark optimum
    let pivot = R::one() / (alpha * s);
    let mut best_j = 0i32;
    let mut best = R::zero();
    for j in -60..=60 {
        let x = pivot * R::of(10f64.powf(j as f64 / 10.0));
        let v = objective(x);
        if v > best {
            best = v;
            best_j = j;
        }
    }
    // NaN-safe: a NaN best must fail this guard too
    if best.is_nan() || best <= R::zero() {
        return Err(AnalyticError::Numeric(
            "progress objective vanished on the search grid",
        ));
    }
    let mut lo = pivot * R::of(10f64.powf((best_j - 1) as f64 / 10.0));
    let mut hi = pivot * R::of(10f64.powf((best_j + 1) as f64 / 10.0));
    // golden-section on a unimodal bracket
    let phi = R::of(0.618_033_988_749_894_8);
    let mut a = hi - phi * (hi - lo);
    let mut b = lo + phi * (hi - lo);
    let mut fa = objective(a);
    let mut fb = objective(b);
    for _ in 0..200 {
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + phi * (hi - lo);
            fb = objective(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - phi * (hi - lo);
            fa = objective(a);
        }
        if hi - lo <= R::eps_n(16.0) * hi {
            break;
        }
    }
    let x = (lo + hi) / R::of(2.0);
    Ok(ContinuousProgress {
        optimum_loss: x,
        value: objective(x),
    })
}

/// Density and law of the points first reached on retransmission `k` out of
/// `n`, under exponential marks drawn fresh each round.
#[derive(Debug, Clone, Copy)]
pub struct RetransmissionDistribution<R: Real> {
    cfg: NetworkConfig<R>,
    s: R,
    k: u32,
    n: u32,
    expected: R,
}

/// Build the round-`k`-of-`n` first-success law at threshold `1/s`.
///
/// The class that never succeeds (`k = 0`) has infinite expected size and is
/// rejected as divergent.
pub fn retransmission_distribution<R: Real>(
    cfg: NetworkConfig<R>,
    s: R,
    k: u32,
    n: u32,
) -> Result<RetransmissionDistribution<R>, AnalyticError> {
    if n == 0 {
        return Err(AnalyticError::Domain("attempt count must be >= 1"));
    }
    if k > n {
        return Err(AnalyticError::Domain(
            "success round cannot exceed the attempt count",
        ));
    }
    if k == 0 {
        return Err(AnalyticError::Divergent(
            "the never-successful class has infinite expected size",
        ));
    }
    if !s.is_finite() || s <= R::zero() {
        return Err(AnalyticError::Domain("threshold must be finite and > 0"));
    }
    let law = RetransmissionDistribution {
        cfg,
        s,
        k,
        n,
        expected: R::zero(),
    };
    let expected = law.expected_quadrature()?;
    Ok(RetransmissionDistribution { expected, ..law })
}

impl<R: Real> RetransmissionDistribution<R> {
    /// Expected number of points first reached on round `k`, by quadrature of
    /// the thinned intensity; exact for every geometry.
    pub fn expected(&self) -> R {
        self.expected
    }

    /// `c_d Γ(1+δ) / (ks)^δ`. Matches [`Self::expected`] when `δ = 1` (any
    /// `k`) or `k = n` (any `δ`); for `δ ≠ 1` with `k < n` the cross terms of
    /// the thinning do not telescope and this expression overshoots.
    pub fn closed_form_expected(&self) -> Result<R, AnalyticError> {
        let delta = self.cfg.delta();
        let scale = (R::of(self.k as f64) * self.s).powf(-delta);
        Ok(self.cfg.c_d() * gamma(R::one() + delta)? * scale)
    }

    /// Intensity of round-`k` first successes at loss `x`:
    /// `c_d δ x^{δ−1} C(n,k) e^{−ksx} (1 − e^{−sx})^{n−k}`.
    pub fn density(&self, x: R) -> R {
        let delta = self.cfg.delta();
        if x < R::zero() || x.is_nan() {
            return R::zero();
        }
        if x == R::zero() {
            // only the always-failing-until-the-last-round class can keep mass
            // at the origin, where the unfaded intensity itself starts
            return if self.k == self.n {
                if delta == R::one() {
                    self.cfg.c_d()
                } else if delta < R::one() {
                    R::infinity()
                } else {
                    R::zero()
                }
            } else {
                R::zero()
            };
        }
        let miss = -(-self.s * x).exp_m1();
        self.cfg.c_d() * delta * x.powf(delta - R::one())
            * binomial::<R>(self.n, self.k)
            * (-R::of(self.k as f64) * self.s * x).exp()
            * miss.powi((self.n - self.k) as i32)
    }

    /// Probability density of the loss at which a round-`k` point sits,
    /// i.e. [`Self::density`] normalized by the expected class size.
    pub fn pdf(&self, x: R) -> R {
        self.density(x) / self.expected
    }

    /// Mean loss within the class, by quadrature of the normalized law.
    pub fn mean(&self) -> Result<R, AnalyticError> {
        let m1 = self.weighted_integral(1)?;
        Ok(m1 / self.expected)
    }

    /// Loss variance within the class.
    pub fn variance(&self) -> Result<R, AnalyticError> {
        let mean = self.mean()?;
        let m2 = self.weighted_integral(2)? / self.expected;
        Ok(m2 - mean * mean)
    }

    fn expected_quadrature(&self) -> Result<R, AnalyticError> {
        self.weighted_integral(0)
    }

    fn weighted_integral(&self, power: i32) -> Result<R, AnalyticError> {
        let f = |x: R| {
            if x <= R::zero() {
                return R::zero();
            }
            x.powi(power) * self.density(x)
        };
        let scale = R::one() / (R::of(self.k as f64) * self.s);
        let spread = R::one() + R::of(self.n as f64).ln();
        let breaks = [
            scale * R::of(0.01),
            scale * R::of(0.1),
            scale,
            scale * spread,
            scale * spread * R::of(3.0),
            scale * spread * R::of(10.0),
        ];
        Ok(integrate_to_inf_with_breaks(
            f,
            R::zero(),
            &breaks,
            &QuadConfig::default(),
        )?)
    }
}

fn binomial<R: Real>(n: u32, k: u32) -> R {
    let j = k.min(n - k);
    let mut c = R::one();
    for t in 1..=j {
        c = c * R::of((n - j + t) as f64) / R::of(t as f64);
    }
    c
}

/// Index of the point a mean-gain measurement most plausibly came from, by
/// the region rule `⌈c_d / ḡ⌉`.
pub fn localize<R: Real>(cfg: NetworkConfig<R>, mean_gain: R) -> Result<u64, AnalyticError> {
    if !mean_gain.is_finite() || mean_gain <= R::zero() {
        return Err(AnalyticError::Domain(
            "measured mean gain must be finite and > 0",
        ));
    }
    let est = (cfg.c_d() / mean_gain).ceil().as_f64();
    if est >= u64::MAX as f64 {
        return Ok(u64::MAX);
    }
    Ok((est as u64).max(1))
}

/// Maximum-likelihood index given one faded gain observation: the `i ≤ i_max`
/// whose loss density is largest at `1/gain`. Ties resolve to the smaller
/// index.
pub fn localize_ml<R: Real>(
    cfg: NetworkConfig<R>,
    spec: FadingSpec<R>,
    gain: R,
    i_max: u64,
) -> Result<u64, AnalyticError> {
    if !gain.is_finite() || gain <= R::zero() {
        return Err(AnalyticError::Domain("observed gain must be finite and > 0"));
    }
    if i_max == 0 {
        return Err(AnalyticError::Domain("index ceiling must be >= 1"));
    }
    let x = R::one() / gain;
    let mut best_i = 1;
    let mut best = plpf_pdf(cfg, spec, 1, x)?;
    for i in 2..=i_max {
        let v = plpf_pdf(cfg, spec, i, x)?;
        if v > best {
            best = v;
            best_i = i;
        }
    }
    Ok(best_i)
}
