//! Monte Carlo harness: reproducible parallel estimation and the two
//! goodness-of-fit tests the validation suite leans on.
//!
//! Reproducibility contract: trial j of a run with base seed σ always uses the
//! generator [`child_rng`]`(σ, j)` — one ChaCha8 stream per trial, split by the
//! cipher's stream parameter, never by jumping ahead. Trials are scheduled by
//! rayon but collected in index order and reduced sequentially, so every
//! statistic here is bit-identical no matter how many worker threads run.
//!
//! Non-finite trial outputs (a trial hitting a divergent estimand, say) are
//! excluded from the estimate and surfaced in `n_flagged` instead of
//! poisoning the mean silently.

use crate::fading::FadingSpec;
use crate::geometry::{sample_plp, NetworkConfig, PlpfRealization};
use crate::scalar::{Real, SampleReal};
use crate::specfun::{gamma_q, ln_gamma};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::fmt;

/// Asymptotic 1% critical coefficient for the Kolmogorov–Smirnov statistic:
/// reject when D√n exceeds this.
pub const KS_CRIT_1PCT_COEF: f64 = 1.628;

/// Fewest trials an estimate will accept.
pub const MIN_TRIALS: u64 = 100;

/// Fewest samples the KS test will accept (the critical value is asymptotic).
pub const MIN_KS_SAMPLES: usize = 100;

/// Deterministic per-trial generator: stream `index` of the ChaCha8 cipher
/// keyed by `base_seed`. Distinct indices give independent streams.
pub fn child_rng(base_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(base_seed);
    rng.set_stream(index);
    rng
}

#[derive(Debug, Clone, PartialEq)]
pub enum McError {
    TooFewTrials { got: u64 },
    TooFewSamples { got: usize },
    /// No usable data survived (all trials flagged, or too few distinct bins).
    Degenerate(&'static str),
}

impl fmt::Display for McError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            McError::TooFewTrials { got } => {
                write!(f, "need at least {MIN_TRIALS} trials, got {got}")
            }
            McError::TooFewSamples { got } => {
                write!(f, "need at least {MIN_KS_SAMPLES} samples, got {got}")
            }
            McError::Degenerate(msg) => write!(f, "degenerate input: {msg}"),
        }
    }
}

impl std::error::Error for McError {}

/// Sample mean with its uncertainty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<R> {
    pub mean: R,
    /// √(sample variance / n): the standard error of `mean`.
    pub std_error: R,
    /// Trials that produced a finite value.
    pub n_trials: u64,
    /// Normal-theory 95% interval mean ± 1.96·SE.
    pub ci95: (R, R),
    /// Trials excluded for a non-finite output.
    pub n_flagged: u64,
}

impl<R: Real> Estimate<R> {
    fn from_values(values: &[R], n_flagged: u64) -> Result<Self, McError> {
        let n = values.len();
        if n < 2 {
            return Err(McError::Degenerate("fewer than two finite trial values"));
        }
        let nf = R::of(n as f64);
        let mean = values.iter().copied().sum::<R>() / nf;
        let var = values
            .iter()
            .map(|&v| (v - mean) * (v - mean))
            .sum::<R>()
            / (nf - R::one());
        let std_error = (var / nf).sqrt();
        let half = R::of(1.96) * std_error;
        Ok(Estimate {
            mean,
            std_error,
            n_trials: n as u64,
            ci95: (mean - half, mean + half),
            n_flagged,
        })
    }

    /// Flat CSV row `experiment,params...,mean,se,n`.
    pub fn csv_row(&self, experiment: &str, params: &[String]) -> String {
        let mut row = String::from(experiment);
        for p in params {
            row.push(',');
            row.push_str(p);
        }
        use std::fmt::Write as _;
        write!(row, ",{},{},{}", self.mean, self.std_error, self.n_trials).unwrap();
        row
    }
}

/// Run `trials` independent jobs in parallel and average their outputs.
///
/// `job(trial_index, rng)` sees the generator `child_rng(base_seed, trial_index)`.
pub fn estimate<R, F>(trials: u64, base_seed: u64, job: F) -> Result<Estimate<R>, McError>
where
    R: Real,
    F: Fn(u64, &mut ChaCha8Rng) -> R + Sync,
{
    if trials < MIN_TRIALS {
        return Err(McError::TooFewTrials { got: trials });
    }
    let raw: Vec<R> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = child_rng(base_seed, i);
            job(i, &mut rng)
        })
        .collect();
    let mut finite = Vec::with_capacity(raw.len());
    let mut n_flagged = 0;
    for v in raw {
        if v.is_finite() {
            finite.push(v);
        } else {
            n_flagged += 1;
        }
    }
    Estimate::from_values(&finite, n_flagged)
}

/// Estimate a statistic of the marked point process, one fresh realization
/// per trial.
///
/// Each trial draws the process in a window holding `mean_count` points on
/// average (marks attached), evaluates `statistic` on it, and feeds the value
/// into the same deterministic reduction as [`estimate`]. A trial whose
/// statistic comes back non-finite is flagged, not averaged.
pub fn estimate_realizations<R, F>(
    trials: u64,
    base_seed: u64,
    cfg: NetworkConfig<R>,
    spec: FadingSpec<R>,
    mean_count: R,
    statistic: F,
) -> Result<Estimate<R>, McError>
where
    R: SampleReal,
    F: Fn(&PlpfRealization<R>) -> R + Sync,
{
    // reject bad windows once, up front, instead of flagging every trial
    sample_plp(cfg, mean_count, &mut child_rng(base_seed, 0))
        .map_err(|_| McError::Degenerate("realization window rejected by the sampler"))?;
    estimate(trials, base_seed, |_, rng| {
        let drawn = sample_plp(cfg, mean_count, rng).and_then(|p| p.attach_fading(spec, rng));
        match drawn {
            Ok(real) => statistic(&real),
            Err(_) => R::nan(),
        }
    })
}

/// Integer-count trial outputs with the summary statistics the Poisson checks
/// need.
#[derive(Debug, Clone, PartialEq)]
pub struct CountHistogram {
    counts: Vec<u64>,
    pub mean: f64,
    pub variance: f64,
}

impl CountHistogram {
    pub fn new(counts: Vec<u64>) -> Result<Self, McError> {
        if counts.len() < 2 {
            return Err(McError::Degenerate("fewer than two counts"));
        }
        let n = counts.len() as f64;
        let mean = counts.iter().map(|&c| c as f64).sum::<f64>() / n;
        let variance = counts
            .iter()
            .map(|&c| (c as f64 - mean).powi(2))
            .sum::<f64>()
            / (n - 1.0);
        Ok(CountHistogram { counts, mean, variance })
    }

    pub fn n_trials(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Variance-to-mean ratio; 1 for a Poisson family.
    pub fn dispersion_index(&self) -> f64 {
        self.variance / self.mean
    }
}

/// Parallel count collection under the same reproducibility contract as
/// [`estimate`].
pub fn estimate_counts<F>(trials: u64, base_seed: u64, job: F) -> Result<CountHistogram, McError>
where
    F: Fn(u64, &mut ChaCha8Rng) -> u64 + Sync,
{
    if trials < MIN_TRIALS {
        return Err(McError::TooFewTrials { got: trials });
    }
    let counts: Vec<u64> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = child_rng(base_seed, i);
            job(i, &mut rng)
        })
        .collect();
    CountHistogram::new(counts)
}

/// Kolmogorov–Smirnov outcome against a fully specified cdf.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsResult {
    /// sup-norm distance between empirical and model cdf.
    pub statistic: f64,
    pub n: usize,
    /// D√n below [`KS_CRIT_1PCT_COEF`].
    pub pass_at_1pct: bool,
}

/// Two-sided KS test of `samples` against `cdf` (no fitted parameters).
pub fn empirical_cdf_ks<R: Real, F: Fn(R) -> R>(
    samples: &[R],
    cdf: F,
) -> Result<KsResult, McError> {
    let n = samples.len();
    if n < MIN_KS_SAMPLES {
        return Err(McError::TooFewSamples { got: n });
    }
    let mut sorted = samples.to_vec();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    let nf = n as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let fx = cdf(x).as_f64();
        let above = (i + 1) as f64 / nf - fx;
        let below = fx - i as f64 / nf;
        d = d.max(above).max(below);
    }
    Ok(KsResult {
        statistic: d,
        n,
        pass_at_1pct: d * nf.sqrt() < KS_CRIT_1PCT_COEF,
    })
}

/// Pearson chi-square outcome for counts against a Poisson(λ) model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub pass_at_1pct: bool,
}

/// Chi-square test of a count histogram against Poisson(`lambda`). Adjacent
/// count values are merged until every bin's expected frequency is at least 5;
/// the open right tail forms the last bin.
pub fn chi_square_poisson(hist: &CountHistogram, lambda: f64) -> Result<ChiSquareResult, McError> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(McError::Degenerate("lambda must be finite and > 0"));
    }
    let n = hist.n_trials() as f64;
    let max_count = *hist.counts().iter().max().expect("non-empty") as usize;
    let mut observed = vec![0.0f64; max_count + 1];
    for &c in hist.counts() {
        observed[c as usize] += 1.0;
    }
    let ln_lambda = lambda.ln();
    let pmf = |k: usize| (k as f64 * ln_lambda - lambda - ln_gamma((k + 1) as f64).unwrap()).exp();

    // Greedy left-to-right merge to expected >= 5; remaining mass (including
    // the open tail above max_count) closes the final bin.
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let mut acc_obs = 0.0;
    let mut acc_exp = 0.0;
    let mut cum_p = 0.0;
    for (k, &obs) in observed.iter().enumerate() {
        let p = pmf(k);
        cum_p += p;
        acc_obs += obs;
        acc_exp += n * p;
        if acc_exp >= 5.0 {
            bins.push((acc_obs, acc_exp));
            acc_obs = 0.0;
            acc_exp = 0.0;
        }
    }
    let tail_exp = acc_exp + n * (1.0 - cum_p).max(0.0);
    let tail_obs = acc_obs;
    match bins.last_mut() {
        Some(last) if tail_exp < 5.0 => {
            last.0 += tail_obs;
            last.1 += tail_exp;
        }
        _ => bins.push((tail_obs, tail_exp)),
    }
    if bins.len() < 2 {
        return Err(McError::Degenerate("fewer than two chi-square bins"));
    }
    let statistic: f64 = bins.iter().map(|&(o, e)| (o - e).powi(2) / e).sum();
    let dof = bins.len() - 1;
    let p_value = gamma_q(dof as f64 / 2.0, statistic / 2.0).unwrap();
    Ok(ChiSquareResult {
        statistic,
        dof,
        p_value,
        pass_at_1pct: p_value > 0.01,
    })
}
