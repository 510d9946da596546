//! Sampling of the point processes: stationary Poisson points in d dimensions,
//! reduced to the ordered distance process, mapped to the path-loss process
//! (PLP) x_i = r_i^α, and marked with iid fading into the faded process (PLPF)
//! ξ_i = x_i / f_i.
//!
//! The PLP is a 1-D Poisson process with mean measure Λ(x) = c_d x^δ, so a
//! realization is drawn by inversion: a Poisson count for a finite window
//! [0, L), then iid locations with cdf (x/L)^δ, sorted. This is exact — no
//! thinning, no discretization.
//!
//! **Window truncation.** Fading lets nodes beyond any finite window connect,
//! so evaluating threshold events on a naive window [0, 1/s) biases counts.
//! [`window_mean_count_for_threshold`] solves the tail condition
//! c_d ∫_L^∞ δ x^{δ-1} (1 − F(sx)) dx < ε for L, so the expected number of
//! missed connected nodes is below ε (default [`DEFAULT_TRUNCATION_TOLERANCE`]).
//! [`PlpfRealization::connected_set`] refuses thresholds whose tail mass the
//! sampled window does not cover.
//!
//! Reproducibility: realizations are independent jobs; callers derive one
//! child stream per realization index (see [`crate::mc::child_rng`]) so output
//! is identical no matter how many workers run or in what order they finish.

use crate::fading::{FadingError, FadingSpec};
use crate::quad::{self, QuadConfig, QuadError};
use crate::scalar::{Real, SampleReal};
use rand::Rng;
use std::fmt;
use std::io;

/// Default bound on the expected number of connected nodes lost to windowing.
pub const DEFAULT_TRUNCATION_TOLERANCE: f64 = 1e-4;

// Allocation guard: a window this large is a parameter mistake, not a job.
const MAX_WINDOW_MEAN_COUNT: f64 = 5e7;

/// Ambient model parameters: dimension and path-loss exponent, with the
/// derived quantities δ = d/α, Δ = (d+1)/α, and the unit-ball volume
/// c_d = π^{d/2} / Γ(1 + d/2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkConfig<R> {
    d: u32,
    alpha: R,
    delta: R,
    big_delta: R,
    c_d: R,
}

/// Errors from sampling and realization handling.
#[derive(Debug, Clone, PartialEq)]
pub enum GeometryError {
    Domain(&'static str),
    /// Fading marks already present; a realization is marked once.
    MarksAlreadyAttached,
    /// Operation needs fading marks that were never attached.
    MarksMissing,
    /// The sampled window cannot support the requested threshold: the expected
    /// number of connected nodes beyond the window exceeds the tolerance.
    Truncation { expected_missed: f64 },
    /// The tail-bound solver failed to bracket or converge.
    WindowSolve(&'static str),
    Quad(QuadError),
    Fading(FadingError),
}

impl fmt::Display for GeometryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeometryError::Domain(msg) => write!(f, "domain error: {msg}"),
            GeometryError::MarksAlreadyAttached => write!(f, "fading marks already attached"),
            GeometryError::MarksMissing => write!(f, "realization has no fading marks"),
            GeometryError::Truncation { expected_missed } => write!(
                f,
                "window too small for threshold: expected {expected_missed:e} connected nodes beyond it"
            ),
            GeometryError::WindowSolve(msg) => write!(f, "window solve failed: {msg}"),
            GeometryError::Quad(e) => write!(f, "{e}"),
            GeometryError::Fading(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for GeometryError {}

impl From<QuadError> for GeometryError {
    fn from(e: QuadError) -> Self {
        GeometryError::Quad(e)
    }
}
impl From<FadingError> for GeometryError {
    fn from(e: FadingError) -> Self {
        GeometryError::Fading(e)
    }
}

impl<R: Real> NetworkConfig<R> {
    pub fn new(d: u32, alpha: R) -> Result<Self, GeometryError> {
        if d == 0 {
            return Err(GeometryError::Domain("dimension must be >= 1"));
        }
        if !alpha.is_finite() || alpha <= R::zero() {
            return Err(GeometryError::Domain("path loss exponent must be finite and > 0"));
        }
        let df = R::of(d as f64);
        Ok(NetworkConfig {
            d,
            alpha,
            delta: df / alpha,
            big_delta: (df + R::one()) / alpha,
            c_d: Self::unit_ball_volume(d),
        })
    }

    /// Construct from (d, δ); α = d/δ.
    pub fn from_delta(d: u32, delta: R) -> Result<Self, GeometryError> {
        if !delta.is_finite() || delta <= R::zero() {
            return Err(GeometryError::Domain("delta must be finite and > 0"));
        }
        Self::new(d, R::of(d as f64) / delta)
    }

    /// Construct from (d, Δ); α = (d+1)/Δ.
    pub fn from_big_delta(d: u32, big_delta: R) -> Result<Self, GeometryError> {
        if !big_delta.is_finite() || big_delta <= R::zero() {
            return Err(GeometryError::Domain("big delta must be finite and > 0"));
        }
        Self::new(d, (R::of(d as f64) + R::one()) / big_delta)
    }

    // Γ(1 + d/2) by the half-integer product, then c_d = π^{d/2} / Γ(1 + d/2).
    // Exact up to rounding: c_1 = 2, c_2 = π, c_3 = 4π/3.
    fn unit_ball_volume(d: u32) -> R {
        let half = d as f64 / 2.0;
        let even = d.is_multiple_of(2);
        let mut g = if even { 1.0 } else { std::f64::consts::PI.sqrt() };
        let mut k = if even { 1.0 } else { 0.5 };
        while k <= half {
            g *= k;
            k += 1.0;
        }
        let mut pow = std::f64::consts::PI.powi((d / 2) as i32);
        if d % 2 == 1 {
            pow *= std::f64::consts::PI.sqrt();
        }
        R::of(pow / g)
    }

    pub fn d(&self) -> u32 {
        self.d
    }
    pub fn alpha(&self) -> R {
        self.alpha
    }
    /// δ = d/α.
    pub fn delta(&self) -> R {
        self.delta
    }
    /// Δ = (d+1)/α.
    pub fn big_delta(&self) -> R {
        self.big_delta
    }
    /// Volume of the d-dimensional unit ball.
    pub fn c_d(&self) -> R {
        self.c_d
    }
}

#[derive(Debug, Clone)]
struct Marks<R> {
    spec: FadingSpec<R>,
    f: Vec<R>,
    xi: Vec<R>,
}

/// One sampled network: ordered distances, path losses, and (once attached)
/// fading marks and faded path losses.
#[derive(Debug, Clone)]
pub struct PlpfRealization<R> {
    cfg: NetworkConfig<R>,
    r: Vec<R>,
    x: Vec<R>,
    marks: Option<Marks<R>>,
    window_loss_bound: R,
}

/// Draw one PLP realization on [0, L) where Λ(L) = `mean_count`.
///
/// Inversion sampling: count ~ Poisson(mean_count), locations iid with cdf
/// (x/L)^δ, sorted ascending. Marks are absent until [`PlpfRealization::attach_fading`].
pub fn sample_plp<R: SampleReal, G: Rng + ?Sized>(
    cfg: NetworkConfig<R>,
    mean_count: R,
    rng: &mut G,
) -> Result<PlpfRealization<R>, GeometryError> {
    if !mean_count.is_finite() || mean_count <= R::zero() {
        return Err(GeometryError::Domain("window mean count must be finite and > 0"));
    }
    if mean_count > R::of(MAX_WINDOW_MEAN_COUNT) {
        return Err(GeometryError::Domain("window mean count exceeds the allocation guard"));
    }
    let window = (mean_count / cfg.c_d).powf(cfg.delta.recip());
    let n = R::poisson_draw(mean_count, rng) as usize;
    let inv_delta = cfg.delta.recip();
    let mut x: Vec<R> = (0..n)
        .map(|_| window * R::uniform_01(rng).powf(inv_delta))
        .collect();
    x.sort_unstable_by(|p, q| p.partial_cmp(q).expect("finite path losses"));
    let inv_alpha = cfg.alpha.recip();
    let r = x.iter().map(|&v| v.powf(inv_alpha)).collect();
    Ok(PlpfRealization {
        cfg,
        r,
        x,
        marks: None,
        window_loss_bound: window,
    })
}

/// Draw the conditioned (binomial) variant: exactly `n` points iid with cdf
/// (x/a)^δ on [0, a), marks iid from `spec`. Models a network conditioned on
/// the (n+1)-th path loss sitting at `a`; with δ = 1 the positions are uniform
/// on [0, a), which is also the toy mode for illustration exports.
pub fn sample_conditioned<R: SampleReal, G: Rng + ?Sized>(
    cfg: NetworkConfig<R>,
    n: usize,
    a: R,
    spec: FadingSpec<R>,
    rng: &mut G,
) -> Result<PlpfRealization<R>, GeometryError> {
    if n == 0 {
        return Err(GeometryError::Domain("conditioned sample needs n >= 1"));
    }
    if !a.is_finite() || a <= R::zero() {
        return Err(GeometryError::Domain("loss bound must be finite and > 0"));
    }
    let inv_delta = cfg.delta.recip();
    let mut x: Vec<R> = (0..n).map(|_| a * R::uniform_01(rng).powf(inv_delta)).collect();
    x.sort_unstable_by(|p, q| p.partial_cmp(q).expect("finite path losses"));
    let inv_alpha = cfg.alpha.recip();
    let r = x.iter().map(|&v| v.powf(inv_alpha)).collect();
    let plp = PlpfRealization {
        cfg,
        r,
        x,
        marks: None,
        window_loss_bound: a,
    };
    plp.attach_fading(spec, rng)
}

/// Expected connected-node count beyond path loss `lower` at threshold 1/s:
/// c_d ∫_lower^∞ δ x^{δ-1} (1 − F(sx)) dx.
pub fn truncation_tail<R: Real>(
    cfg: NetworkConfig<R>,
    spec: FadingSpec<R>,
    s: R,
    lower: R,
) -> Result<R, GeometryError> {
    if !s.is_finite() || s <= R::zero() {
        return Err(GeometryError::Domain("threshold must be finite and > 0"));
    }
    if !lower.is_finite() || lower < R::zero() {
        return Err(GeometryError::Domain("tail lower bound must be finite and >= 0"));
    }
    match spec {
        FadingSpec::NoFading => {
            let edge = s.recip();
            if lower >= edge {
                Ok(R::zero())
            } else {
                Ok(cfg.c_d * (edge.powf(cfg.delta) - lower.powf(cfg.delta)))
            }
        }
        FadingSpec::Nakagami { m } => {
            let delta = cfg.delta;
            // Survival decays like e^{-msx}: give the transform its scale.
            let scale = (m * s).recip();
            let breaks = [
                lower + scale,
                lower + R::of(4.0) * scale,
                lower + R::of(16.0) * scale,
            ];
            let integrand = move |x: R| {
                delta * x.powf(delta - R::one()) * spec.survival(s * x)
            };
            let tail = if lower == R::zero() {
                // Avoid the x^{δ-1} singularity sitting exactly at the
                // transform origin; split just inside.
                let inner = quad::integrate(integrand, R::zero(), breaks[0], &QuadConfig::default())?;
                inner
                    + quad::integrate_to_inf_with_breaks(
                        integrand,
                        breaks[0],
                        &breaks[1..],
                        &QuadConfig::default(),
                    )?
            } else {
                quad::integrate_to_inf_with_breaks(integrand, lower, &breaks, &QuadConfig::default())?
            };
            Ok(cfg.c_d * tail)
        }
    }
}

/// Smallest window mean count Λ(L) whose truncation tail at threshold 1/s is
/// below `eps`. For the degenerate spec this is exactly Λ(1/s).
pub fn window_mean_count_for_threshold<R: Real>(
    cfg: NetworkConfig<R>,
    spec: FadingSpec<R>,
    s: R,
    eps: R,
) -> Result<R, GeometryError> {
    if !s.is_finite() || s <= R::zero() {
        return Err(GeometryError::Domain("threshold must be finite and > 0"));
    }
    if !eps.is_finite() || eps <= R::zero() {
        return Err(GeometryError::Domain("truncation tolerance must be finite and > 0"));
    }
    let base = s.recip();
    if spec.is_no_fading() {
        return Ok(cfg.c_d * base.powf(cfg.delta));
    }
    // Bracket by doubling, then bisect; the tail is strictly decreasing in L.
    let mut lo = base;
    let mut hi = base;
    let mut iterations = 0;
    while truncation_tail(cfg, spec, s, hi)? >= eps {
        lo = hi;
        hi = hi + hi;
        iterations += 1;
        if iterations > 200 {
            return Err(GeometryError::WindowSolve("tail bound failed to bracket"));
        }
    }
    for _ in 0..60 {
        let mid = (lo + hi) * R::of(0.5);
        if truncation_tail(cfg, spec, s, mid)? < eps {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // Tiny relative margin so re-checking the tail from the round-tripped
    // window (cap -> L) stays strictly inside the tolerance.
    let margin = R::one() + R::eps_n(1e8);
    Ok(cfg.c_d * (hi * margin).powf(cfg.delta))
}

/// Sample a realization whose window safely covers threshold 1/s, marks attached.
pub fn sample_for_threshold<R: SampleReal, G: Rng + ?Sized>(
    cfg: NetworkConfig<R>,
    spec: FadingSpec<R>,
    s: R,
    eps: R,
    rng: &mut G,
) -> Result<PlpfRealization<R>, GeometryError> {
    let cap = window_mean_count_for_threshold(cfg, spec, s, eps)?;
    sample_plp(cfg, cap, rng)?.attach_fading(spec, rng)
}

/// Nodes with faded path loss below the threshold 1/s.
#[derive(Debug, Clone)]
pub struct ConnectedSet<R> {
    /// Positions in the parent realization (0-based; node i+1 in math notation).
    pub indices: Vec<usize>,
    /// Distances of the connected nodes (unordered in ξ).
    pub r_hat: Vec<R>,
    /// Path losses of the connected nodes.
    pub x_hat: Vec<R>,
    /// Faded path losses, each < 1/s.
    pub xi_hat: Vec<R>,
}

impl<R: Real> ConnectedSet<R> {
    pub fn len(&self) -> usize {
        self.indices.len()
    }
    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
    /// Largest connected distance, 0 for an empty set (the isolation atom).
    pub fn max_distance(&self) -> R {
        self.r_hat.iter().copied().fold(R::zero(), R::max)
    }
    /// Σ r̂ over connected nodes.
    pub fn sum_distance(&self) -> R {
        self.r_hat.iter().copied().sum()
    }
}

impl<R: Real> PlpfRealization<R> {
    pub fn cfg(&self) -> NetworkConfig<R> {
        self.cfg
    }
    /// Ordered distances r_1 < r_2 < …
    pub fn distances(&self) -> &[R] {
        &self.r
    }
    /// Ordered path losses x_i = r_i^α.
    pub fn path_losses(&self) -> &[R] {
        &self.x
    }
    /// Fading marks, if attached.
    pub fn fading_marks(&self) -> Option<&[R]> {
        self.marks.as_ref().map(|m| m.f.as_slice())
    }
    /// Faded path losses ξ_i = x_i / f_i, if marks are attached.
    pub fn faded_losses(&self) -> Option<&[R]> {
        self.marks.as_ref().map(|m| m.xi.as_slice())
    }
    pub fn fading_spec(&self) -> Option<FadingSpec<R>> {
        self.marks.as_ref().map(|m| m.spec)
    }
    /// Largest path loss the window represents.
    pub fn window_loss_bound(&self) -> R {
        self.window_loss_bound
    }
    pub fn len(&self) -> usize {
        self.x.len()
    }
    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Attach iid fading marks and compute ξ. Consumes the unmarked
    /// realization; attaching twice is a state error.
    pub fn attach_fading<G: Rng + ?Sized>(
        mut self,
        spec: FadingSpec<R>,
        rng: &mut G,
    ) -> Result<Self, GeometryError>
    where
        R: SampleReal,
    {
        if self.marks.is_some() {
            return Err(GeometryError::MarksAlreadyAttached);
        }
        let f: Vec<R> = self.x.iter().map(|_| spec.sample(rng)).collect();
        let xi = self.x.iter().zip(f.iter()).map(|(&x, &fi)| x / fi).collect();
        self.marks = Some(Marks { spec, f, xi });
        Ok(self)
    }

    /// Exact filter ξ_i < 1/s, refused when the sampled window's truncation
    /// tail at this threshold exceeds the default tolerance.
    pub fn connected_set(&self, s: R) -> Result<ConnectedSet<R>, GeometryError> {
        if !s.is_finite() || s <= R::zero() {
            return Err(GeometryError::Domain("threshold must be finite and > 0"));
        }
        let marks = self.marks.as_ref().ok_or(GeometryError::MarksMissing)?;
        let tail = truncation_tail(self.cfg, marks.spec, s, self.window_loss_bound)?;
        if tail > R::of(DEFAULT_TRUNCATION_TOLERANCE) {
            return Err(GeometryError::Truncation {
                expected_missed: tail.as_f64(),
            });
        }
        let threshold = s.recip();
        let mut set = ConnectedSet {
            indices: Vec::new(),
            r_hat: Vec::new(),
            x_hat: Vec::new(),
            xi_hat: Vec::new(),
        };
        for (i, &xi) in marks.xi.iter().enumerate() {
            if xi < threshold {
                set.indices.push(i);
                set.r_hat.push(self.r[i]);
                set.x_hat.push(self.x[i]);
                set.xi_hat.push(xi);
            }
        }
        Ok(set)
    }

    /// CSV export with columns (i, r, x, f, xi, connected); i is 1-based.
    ///
    /// Without marks the degenerate view is written (f = 1, ξ = x). The
    /// `connected` column is against threshold 1/s when `s` is given, blank
    /// otherwise. Output is deterministic byte-for-byte for a given realization.
    pub fn write_csv<W: io::Write>(&self, s: Option<R>, out: &mut W) -> io::Result<()> {
        let spec_name = self
            .marks
            .as_ref()
            .map_or_else(|| "none".to_string(), |m| m.spec.to_string());
        writeln!(
            out,
            "# realization: d={} alpha={} fading={} window_loss_bound={}",
            self.cfg.d, self.cfg.alpha, spec_name, self.window_loss_bound
        )?;
        match s {
            Some(s) => writeln!(out, "# threshold: s={s}")?,
            None => writeln!(out, "# threshold: none")?,
        }
        writeln!(out, "i,r,x,f,xi,connected")?;
        for i in 0..self.x.len() {
            let (f, xi) = match self.marks.as_ref() {
                Some(m) => (m.f[i], m.xi[i]),
                None => (R::one(), self.x[i]),
            };
            let connected = match s {
                Some(s) => {
                    if xi < s.recip() {
                        "1"
                    } else {
                        "0"
                    }
                }
                None => "",
            };
            writeln!(out, "{},{},{},{},{},{}", i + 1, self.r[i], self.x[i], f, xi, connected)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::child_rng;

    fn standard() -> NetworkConfig<f64> {
        NetworkConfig::new(2, 2.0).unwrap()
    }

    #[test]
    fn unit_ball_volumes() {
        assert!((NetworkConfig::<f64>::new(1, 1.0).unwrap().c_d() - 2.0).abs() < 1e-12);
        assert!((NetworkConfig::<f64>::new(2, 2.0).unwrap().c_d() - std::f64::consts::PI).abs() < 1e-12);
        assert!(
            (NetworkConfig::<f64>::new(3, 2.0).unwrap().c_d() - 4.0 * std::f64::consts::PI / 3.0).abs()
                < 1e-12
        );
    }

    #[test]
    fn derived_ratios_consistent() {
        let cfg = NetworkConfig::<f64>::new(2, 4.0).unwrap();
        assert_eq!(cfg.delta(), 0.5);
        assert_eq!(cfg.big_delta(), 0.75);
        let from_delta = NetworkConfig::<f64>::from_delta(2, 0.5).unwrap();
        assert_eq!(from_delta.alpha(), 4.0);
        let from_big = NetworkConfig::<f64>::from_big_delta(2, 0.75).unwrap();
        assert_eq!(from_big.alpha(), 4.0);
    }

    #[test]
    fn config_domain_checks() {
        assert!(NetworkConfig::<f64>::new(0, 2.0).is_err());
        assert!(NetworkConfig::<f64>::new(2, 0.0).is_err());
        assert!(NetworkConfig::<f64>::new(2, -1.0).is_err());
        assert!(NetworkConfig::<f64>::new(2, f64::NAN).is_err());
    }

    #[test]
    fn realization_is_ordered_and_consistent() {
        let mut rng = child_rng(101, 0);
        let plp = sample_plp(standard(), 200.0, &mut rng).unwrap();
        let x = plp.path_losses();
        let r = plp.distances();
        assert!(!x.is_empty());
        for i in 1..x.len() {
            assert!(x[i] > x[i - 1]);
            assert!(r[i] > r[i - 1]);
        }
        for i in 0..x.len() {
            assert!((r[i] * r[i] - x[i]).abs() < 1e-12 * x[i].max(1.0));
            assert!(x[i] > 0.0 && x[i] < plp.window_loss_bound());
        }
    }

    #[test]
    fn mean_count_matches_cap() {
        // 400 realizations at cap 100: sample mean within 4·SE(≈0.5).
        let total: u64 = (0..400)
            .map(|i| {
                let mut rng = child_rng(55, i);
                sample_plp(standard(), 100.0, &mut rng).unwrap().len() as u64
            })
            .sum();
        let mean = total as f64 / 400.0;
        assert!((mean - 100.0).abs() < 2.0, "mean count {mean}");
    }

    #[test]
    fn spacings_are_exponential_for_unit_delta() {
        // δ=1: spacings x_{i+1} − x_i are Exp(c_d); check the sample mean.
        let mut rng = child_rng(77, 0);
        let mut spacings = Vec::new();
        for _ in 0..200 {
            let plp = sample_plp(standard(), 150.0, &mut rng).unwrap();
            let x = plp.path_losses();
            for w in x.windows(2) {
                spacings.push(w[1] - w[0]);
            }
        }
        let n = spacings.len() as f64;
        let mean = spacings.iter().sum::<f64>() / n;
        let want = 1.0 / std::f64::consts::PI;
        // SE of an exponential mean is mean/√n.
        assert!((mean - want).abs() < 4.0 * want / n.sqrt(), "spacing mean {mean}");
    }

    #[test]
    fn one_dimensional_homogeneous_specialization() {
        // d=1, α=1: homogeneous rate-2 process on the line.
        let cfg = NetworkConfig::<f64>::new(1, 1.0).unwrap();
        let mut rng = child_rng(13, 0);
        let plp = sample_plp(cfg, 300.0, &mut rng).unwrap();
        assert!((plp.window_loss_bound() - 150.0).abs() < 1e-9);
        let counts_half = plp.path_losses().iter().filter(|&&x| x < 75.0).count() as f64;
        // Expected 150 in the half window, SD ≈ 12.2.
        assert!((counts_half - 150.0).abs() < 4.0 * 12.3);
    }

    #[test]
    fn poisson_counts_in_disjoint_intervals() {
        // Dispersion index of quarter-window counts near 1, and uncorrelated
        // counts in disjoint intervals.
        let trials = 2000;
        let mut first = Vec::with_capacity(trials);
        let mut second = Vec::with_capacity(trials);
        for i in 0..trials {
            let mut rng = child_rng(991, i as u64);
            let plp = sample_plp(standard(), 40.0, &mut rng).unwrap();
            let quarter = plp.window_loss_bound() / 4.0;
            let a = plp.path_losses().iter().filter(|&&x| x < quarter).count() as f64;
            let b = plp
                .path_losses()
                .iter()
                .filter(|&&x| x >= quarter && x < 2.0 * quarter)
                .count() as f64;
            first.push(a);
            second.push(b);
        }
        let n = trials as f64;
        let mean_a = first.iter().sum::<f64>() / n;
        let var_a = first.iter().map(|v| (v - mean_a).powi(2)).sum::<f64>() / (n - 1.0);
        let dispersion = var_a / mean_a;
        assert!((dispersion - 1.0).abs() < 0.1, "dispersion {dispersion}");

        let mean_b = second.iter().sum::<f64>() / n;
        let cov = first
            .iter()
            .zip(second.iter())
            .map(|(a, b)| (a - mean_a) * (b - mean_b))
            .sum::<f64>()
            / (n - 1.0);
        let corr = cov / (var_a.sqrt() * var_a.sqrt());
        assert!(corr.abs() < 4.0 / n.sqrt(), "corr {corr}");
    }

    #[test]
    fn attach_fading_state_machine() {
        let mut rng = child_rng(5, 0);
        let plp = sample_plp(standard(), 50.0, &mut rng).unwrap();
        assert!(plp.fading_marks().is_none());
        let marked = plp.attach_fading(FadingSpec::rayleigh(), &mut rng).unwrap();
        assert!(marked.fading_marks().is_some());
        let again = marked.clone().attach_fading(FadingSpec::rayleigh(), &mut rng);
        assert!(matches!(again, Err(GeometryError::MarksAlreadyAttached)));
    }

    #[test]
    fn degenerate_marks_leave_losses_unchanged() {
        let mut rng = child_rng(6, 0);
        let plp = sample_plp(standard(), 50.0, &mut rng).unwrap();
        let marked = plp.attach_fading(FadingSpec::no_fading(), &mut rng).unwrap();
        let x = marked.path_losses().to_vec();
        let xi = marked.faded_losses().unwrap();
        assert_eq!(x, xi);
    }

    #[test]
    fn marks_independent_of_positions() {
        // Sample correlation between x_i and f_i within 4/√N of zero.
        let mut rng = child_rng(21, 0);
        let mut xs = Vec::new();
        let mut fs = Vec::new();
        for _ in 0..100 {
            let plp = sample_plp(standard(), 100.0, &mut rng)
                .unwrap()
                .attach_fading(FadingSpec::rayleigh(), &mut rng)
                .unwrap();
            xs.extend_from_slice(plp.path_losses());
            fs.extend_from_slice(plp.fading_marks().unwrap());
        }
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let mf = fs.iter().sum::<f64>() / n;
        let sx = (xs.iter().map(|v| (v - mx).powi(2)).sum::<f64>() / n).sqrt();
        let sf = (fs.iter().map(|v| (v - mf).powi(2)).sum::<f64>() / n).sqrt();
        let rho = xs
            .iter()
            .zip(fs.iter())
            .map(|(x, f)| (x - mx) * (f - mf))
            .sum::<f64>()
            / (n * sx * sf);
        assert!(rho.abs() < 4.0 / n.sqrt(), "correlation {rho}");
    }

    #[test]
    fn connected_set_exact_filter_and_truncation_guard() {
        let cfg = standard();
        let spec = FadingSpec::rayleigh();
        let mut rng = child_rng(31, 0);
        let real = sample_for_threshold(cfg, spec, 0.5, DEFAULT_TRUNCATION_TOLERANCE, &mut rng).unwrap();
        let set = real.connected_set(0.5).unwrap();
        let xi = real.faded_losses().unwrap();
        let want: Vec<usize> = (0..xi.len()).filter(|&i| xi[i] < 2.0).collect();
        assert_eq!(set.indices, want);
        for &v in &set.xi_hat {
            assert!(v < 2.0);
        }
        // A window sized for s=0.5 cannot safely answer s=0.005.
        assert!(matches!(
            real.connected_set(0.005),
            Err(GeometryError::Truncation { .. })
        ));
        // Unmarked realizations refuse.
        let bare = sample_plp(cfg, 20.0, &mut rng).unwrap();
        assert!(matches!(bare.connected_set(1.0), Err(GeometryError::MarksMissing)));
    }

    #[test]
    fn degenerate_connected_count_is_poisson_measure() {
        // Without fading the connected count is Poisson(c_d s^{-δ}); check the mean.
        let cfg = standard();
        let s = 0.2;
        let want = std::f64::consts::PI / s;
        let trials = 1500;
        let total: usize = (0..trials)
            .map(|i| {
                let mut rng = child_rng(47, i as u64);
                let real = sample_for_threshold(
                    cfg,
                    FadingSpec::no_fading(),
                    s,
                    DEFAULT_TRUNCATION_TOLERANCE,
                    &mut rng,
                )
                .unwrap();
                real.connected_set(s).unwrap().len()
            })
            .sum();
        let mean = total as f64 / trials as f64;
        let se = (want / trials as f64).sqrt();
        assert!((mean - want).abs() < 4.0 * se, "mean {mean} want {want}");
    }

    #[test]
    fn window_solver_covers_fading_tail() {
        let cfg = standard();
        let spec = FadingSpec::rayleigh();
        let s = 0.1;
        let cap = window_mean_count_for_threshold(cfg, spec, s, 1e-4).unwrap();
        // Window must extend beyond the no-fading edge Λ(1/s) = 10π.
        assert!(cap > 10.0 * std::f64::consts::PI);
        let window = cap / std::f64::consts::PI;
        let tail = truncation_tail(cfg, spec, s, window).unwrap();
        assert!(tail < 1e-4);
        // And the solver is tight: half the window violates the bound.
        let tail_half = truncation_tail(cfg, spec, s, window / 2.0).unwrap();
        assert!(tail_half > 1e-4);
        // Degenerate spec: exactly the no-fading edge.
        let cap0 =
            window_mean_count_for_threshold(cfg, FadingSpec::no_fading(), s, 1e-4).unwrap();
        assert!((cap0 - 10.0 * std::f64::consts::PI).abs() < 1e-9);
    }

    #[test]
    fn conditioned_positions_have_power_cdf() {
        // δ=1/2, a=4: median position a·(1/2)^{1/δ} = 1.
        let cfg = NetworkConfig::<f64>::new(2, 4.0).unwrap();
        let mut rng = child_rng(61, 0);
        let mut below = 0usize;
        let n_total = 40_000;
        let per = 10;
        for _ in 0..n_total / per {
            let real = sample_conditioned(cfg, per, 4.0, FadingSpec::no_fading(), &mut rng).unwrap();
            below += real.path_losses().iter().filter(|&&x| x < 1.0).count();
        }
        let frac = below as f64 / n_total as f64;
        let se = 0.5 / (n_total as f64).sqrt();
        assert!((frac - 0.5).abs() < 4.0 * se, "median fraction {frac}");
    }

    #[test]
    fn conditioned_rejects_bad_parameters() {
        let mut rng = child_rng(1, 0);
        assert!(sample_conditioned(standard(), 0, 1.0, FadingSpec::<f64>::rayleigh(), &mut rng).is_err());
        assert!(
            sample_conditioned(standard(), 3, 0.0, FadingSpec::<f64>::rayleigh(), &mut rng).is_err()
        );
    }

    #[test]
    fn sampling_is_reproducible_per_child_stream() {
        let a = {
            let mut rng = child_rng(123, 9);
            sample_plp(standard(), 80.0, &mut rng).unwrap()
        };
        let b = {
            let mut rng = child_rng(123, 9);
            sample_plp(standard(), 80.0, &mut rng).unwrap()
        };
        assert_eq!(a.path_losses(), b.path_losses());
        let c = {
            let mut rng = child_rng(123, 10);
            sample_plp(standard(), 80.0, &mut rng).unwrap()
        };
        assert_ne!(a.path_losses(), c.path_losses());
    }

    #[test]
    fn csv_export_shape() {
        let mut rng = child_rng(3, 0);
        let real = sample_plp(standard(), 30.0, &mut rng)
            .unwrap()
            .attach_fading(FadingSpec::rayleigh(), &mut rng)
            .unwrap();
        let mut buf = Vec::new();
        real.write_csv(Some(0.5), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert!(lines.next().unwrap().starts_with("# realization: d=2 alpha=2 fading=nakagami:m=1"));
        assert_eq!(lines.next().unwrap(), "# threshold: s=0.5");
        assert_eq!(lines.next().unwrap(), "i,r,x,f,xi,connected");
        let first: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(first.len(), 6);
        assert_eq!(first[0], "1");
        assert!(first[5] == "0" || first[5] == "1");
        assert_eq!(text.lines().count(), 3 + real.len());
    }

    #[test]
    fn sample_rejects_bad_cap() {
        let mut rng = child_rng(1, 0);
        assert!(sample_plp(standard(), 0.0, &mut rng).is_err());
        assert!(sample_plp(standard(), -5.0, &mut rng).is_err());
        assert!(sample_plp(standard(), f64::INFINITY, &mut rng).is_err());
        assert!(sample_plp(standard(), 1e9, &mut rng).is_err());
    }
}
