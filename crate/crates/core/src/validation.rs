//! End-to-end cross-checks: every closed form against an independent
//! simulation of the same quantity, plus the purely analytic identities that
//! tie the layers together.
//!
//! Each check owns a deterministic seed lane derived from the run seed, so a
//! full run is reproducible bit for bit: same seed, same report, regardless
//! of worker threads. Timing is carried next to the verdict, never inside the
//! comparable text.
//!
//! One check is expected to fail and says so in its detail: the recorded
//! large-index limit of the pairwise reorder probability is not what the
//! pairwise integral converges to (it tends to 1/2; the rank-among-followers
//! variant tends to the recorded value but sits just outside the recorded
//! tolerance at index 200). The check states the honest numbers rather than
//! bending either the formula or the gate.

use crate::analytic::{
    broadcast_reach_probability, broadcast_sum_distance, broadcast_transport_capacity,
    capacity_at_rate, capacity_lower_bound, connectivity_gain, connectivity_gain_min_delta,
    epsilon_reachability_threshold, localize, localize_ml, max_distance, optimal_rate,
    reorder_among_next, reorder_probability_quadrature, retransmission_distribution,
};
use crate::fading::FadingSpec;
use crate::geometry::{sample_plp, window_mean_count_for_threshold, NetworkConfig};
use crate::mc::{child_rng, empirical_cdf_ks, estimate, estimate_realizations};
use crate::scalar::SampleReal;
use crate::specfun::{gamma_q, ln_gamma};
use std::f64::consts::{LN_2, PI};
use std::fmt::Write as _;
use std::time::Instant;

/// Outcome of one cross-check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    /// Stable identifier, one per check.
    pub name: &'static str,
    pub pass: bool,
    /// Deterministic summary: the numbers compared and the margins. Never
    /// contains timing, so identical runs produce identical details.
    pub detail: String,
    /// Wall time of the check; informational only.
    pub millis: u64,
}

/// Run every cross-check in order and append a runtime verdict.
///
/// `trials` overrides the per-check Monte Carlo trial counts (confidence
/// intervals widen accordingly); `None` keeps each check's default.
pub fn run_all(seed: u64, trials: Option<u64>) -> Vec<CheckReport> {
    let start = Instant::now();
    let mut reports = vec![
        check_connected_count(seed, trials),
        check_fading_gain_surface(seed, trials),
        check_measure_preservation(seed, trials),
        check_reorder_probabilities(seed, trials),
        check_broadcast_sum_distance(seed, trials),
        check_transport_capacity(),
        check_reach_thresholds(),
        check_retransmission_classes(seed, trials),
        check_max_distance_bound(seed, trials),
        check_localization(seed),
    ];
    let elapsed = start.elapsed();
    let budget_s = 600;
    reports.push(CheckReport {
        name: "runtime-budget",
        pass: elapsed.as_secs() < budget_s,
        detail: format!("all checks within the {budget_s} s budget"),
        millis: elapsed.as_millis() as u64,
    });
    reports
}

// Disjoint seed lanes per check and case: a fixed odd multiplier spreads the
// tags so no two Monte Carlo runs share a child-stream family.
fn lane(seed: u64, tag: u64) -> u64 {
    seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn finish(
    name: &'static str,
    started: Instant,
    body: Result<(bool, String), String>,
) -> CheckReport {
    let (pass, detail) = match body {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    CheckReport {
        name,
        pass,
        detail,
        millis: started.elapsed().as_millis() as u64,
    }
}

fn planar() -> NetworkConfig<f64> {
    NetworkConfig::new(2, 2.0).expect("planar inverse-square geometry")
}

/// Mean connected count at s = 0.1 equals 10π for every mark law (the count
/// is thinning-invariant under unit scaling exponent), within 4 SE each.
fn check_connected_count(seed: u64, trials: Option<u64>) -> CheckReport {
    let t0 = Instant::now();
    let body = (|| {
        let cfg = planar();
        let s = 0.1;
        let expect = 10.0 * PI;
        let trials = trials.unwrap_or(10_000);
        let specs: [(FadingSpec<f64>, &str); 4] = [
            (FadingSpec::rayleigh(), "m=1"),
            (FadingSpec::nakagami(2.0).map_err(|e| e.to_string())?, "m=2"),
            (FadingSpec::nakagami(5.0).map_err(|e| e.to_string())?, "m=5"),
            (FadingSpec::no_fading(), "degenerate"),
        ];
        let mut pass = true;
        let mut detail = format!("target {expect:.4}:");
        for (case, (spec, label)) in specs.into_iter().enumerate() {
            let cap = window_mean_count_for_threshold(cfg, spec, s, 1e-4)
                .map_err(|e| e.to_string())?;
            let est = estimate_realizations(
                trials,
                lane(seed, 0x0100 + case as u64),
                cfg,
                spec,
                cap,
                |real| real.connected_set(s).map_or(f64::NAN, |c| c.len() as f64),
            )
            .map_err(|e| e.to_string())?;
            let ok = (est.mean - expect).abs() <= 4.0 * est.std_error;
            pass &= ok;
            write!(detail, " {label} {:.4}±{:.4}", est.mean, est.std_error).unwrap();
        }
        // this check carries its own time budget on top of the suite's;
        // the neutral wording keeps the detail text time-free
        pass &= t0.elapsed().as_secs() < 60;
        detail.push_str("; 60 s budget enforced");
        Ok((pass, detail))
    })();
    finish("connected-count", t0, body)
}

/// Analytic connectivity gain equals the simulated count ratio on a
/// (scaling exponent, shape) grid; the gain's interior minimum in the
/// exponent sits where the digamma stationarity puts it.
fn check_fading_gain_surface(seed: u64, trials: Option<u64>) -> CheckReport {
    let t0 = Instant::now();
    let body = (|| {
        let trials = trials.unwrap_or(4_000);
        let mut pass = true;
        let mut detail = String::from("gain grid:");
        for (a, &delta) in [0.5f64, 1.0, 1.5].iter().enumerate() {
            for (b, &m) in [1.0f64, 2.0, 5.0].iter().enumerate() {
                let cfg = NetworkConfig::from_delta(2, delta).map_err(|e| e.to_string())?;
                let spec = FadingSpec::nakagami(m).map_err(|e| e.to_string())?;
                let analytic = connectivity_gain(cfg, spec).map_err(|e| e.to_string())?.gain;
                let cap = window_mean_count_for_threshold(cfg, spec, 1.0, 1e-4)
                    .map_err(|e| e.to_string())?;
                let est = estimate_realizations(
                    trials,
                    lane(seed, 0x0200 + (a * 3 + b) as u64),
                    cfg,
                    spec,
                    cap,
                    |real| real.connected_set(1.0).map_or(f64::NAN, |c| c.len() as f64),
                )
                .map_err(|e| e.to_string())?;
                // the unfaded count at unit threshold is c_d exactly
                let mc_gain = est.mean / cfg.c_d();
                let se_gain = est.std_error / cfg.c_d();
                let ok = (mc_gain - analytic).abs() <= 4.0 * se_gain;
                pass &= ok;
                if !ok {
                    write!(detail, " FAIL(δ={delta},m={m}: {mc_gain:.4} vs {analytic:.4})")
                        .unwrap();
                }
            }
        }
        if pass {
            detail.push_str(" all 9 points within 4 SE;");
        }
        let dmin = connectivity_gain_min_delta(1.0f64).map_err(|e| e.to_string())?;
        let dmin_ok = (dmin - 0.462).abs() <= 0.005;
        pass &= dmin_ok;
        write!(detail, " exponent minimum {dmin:.4} (target 0.462±0.005)").unwrap();
        Ok((pass, detail))
    })();
    finish("fading-gain-surface", t0, body)
}

// Expected points beyond z·T that a mean-1 gamma mark can pull below T:
// c_d·T · E(f − z)⁺ with E(f − z)⁺ = Q_{shape+1}(mz) − z·Q_shape(mz).
fn migration_excess(m: f64, c_d_t: f64, z: f64) -> Result<f64, String> {
    let tail = gamma_q(m + 1.0, m * z).map_err(|e| e.to_string())?
        - z * gamma_q(m, m * z).map_err(|e| e.to_string())?;
    Ok(c_d_t * tail)
}

/// The faded process restricted to an inner interval is statistically the
/// unfaded one: KS against the linear measure passes, and the fraction of an
/// interval's points whose faded loss leaves it matches the closed fraction.
fn check_measure_preservation(seed: u64, trials: Option<u64>) -> CheckReport {
    let t0 = Instant::now();
    let body = (|| {
        let cfg = planar();
        let mut pass = true;
        let mut detail = String::new();
        // one large realization per shape; keep the unsampled far side from
        // leaking more than 1e-3 of a point into the scored interval
        let scored_mean = 10_500.0;
        let t_len = scored_mean / cfg.c_d();
        for (case, m) in [1.0f64, 5.0].into_iter().enumerate() {
            let spec = FadingSpec::nakagami(m).map_err(|e| e.to_string())?;
            let mut z = 4.0;
            while migration_excess(m, scored_mean, z)? > 1e-3 {
                z *= 1.25;
                if z > 1e3 {
                    return Err("window search for the scored interval ran away".into());
                }
            }
            let mut rng = child_rng(lane(seed, 0x0300 + case as u64), 0);
            let real = sample_plp(cfg, scored_mean * z, &mut rng)
                .and_then(|p| p.attach_fading(spec, &mut rng))
                .map_err(|e| e.to_string())?;
            let sample: Vec<f64> = real
                .faded_losses()
                .expect("marks attached")
                .iter()
                .copied()
                .filter(|&v| v < t_len)
                .collect();
            if sample.len() < 10_000 {
                return Err(format!("scored interval held only {} points", sample.len()));
            }
            let ks = empirical_cdf_ks(&sample, |v: f64| v / t_len).map_err(|e| e.to_string())?;
            pass &= ks.pass_at_1pct;
            write!(
                detail,
                "m={m}: KS {:.4} on {} (window ratio {z:.1}){}; ",
                ks.statistic,
                ks.n,
                if ks.pass_at_1pct { "" } else { " FAIL" }
            )
            .unwrap();
        }
        // interval-crossing fractions against m^{m-1} e^{-m} / Γ(m)
        let trials = trials.unwrap_or(4_000);
        for (case, m) in [1.0f64, 2.0, 3.0].into_iter().enumerate() {
            let spec = FadingSpec::nakagami(m).map_err(|e| e.to_string())?;
            let expect =
                ((m - 1.0) * m.ln() - m - ln_gamma(m).map_err(|e| e.to_string())?).exp();
            let a = 25.0 / cfg.c_d();
            let est = estimate_realizations(
                trials,
                lane(seed, 0x0310 + case as u64),
                cfg,
                spec,
                cfg.c_d() * a,
                move |real| {
                    let xi = real.faded_losses().expect("marks attached");
                    if xi.is_empty() {
                        return f64::NAN;
                    }
                    let crossed = xi.iter().filter(|&&v| v > a).count();
                    crossed as f64 / xi.len() as f64
                },
            )
            .map_err(|e| e.to_string())?;
            let ok = (est.mean - expect).abs() <= 4.0 * est.std_error;
            pass &= ok;
            write!(
                detail,
                "cross m={m}: {:.4}±{:.4} vs {expect:.4}{}; ",
                est.mean,
                est.std_error,
                if ok { "" } else { " FAIL" }
            )
            .unwrap();
        }
        Ok((pass, detail.trim_end().to_string()))
    })();
    finish("measure-preservation", t0, body)
}

/// Reorder probabilities: quadrature against the five logarithmic closed
/// forms, a direct simulation of the swap event, and the recorded large-index
/// limit — the last clause fails and the detail explains why.
fn check_reorder_probabilities(seed: u64, trials: Option<u64>) -> CheckReport {
    let t0 = Instant::now();
    let body = (|| {
        let mut pass = true;
        let mut detail = String::new();
        let closed: [(u64, u64, f64); 5] = [
            (1, 1, 1.0 - LN_2),
            (1, 2, 3.0 - 4.0 * LN_2),
            (2, 2, 12.0 * LN_2 - 8.0),
            (3, 3, 167.0 / 2.0 - 120.0 * LN_2),
            (4, 4, 1120.0 * LN_2 - 776.0),
        ];
        let mut worst = 0.0f64;
        for (i, j, want) in closed {
            let got = reorder_probability_quadrature::<f64>(i, j).map_err(|e| e.to_string())?;
            worst = worst.max((got - want).abs());
        }
        let quad_ok = worst <= 1e-6;
        pass &= quad_ok;
        write!(detail, "quadrature max dev {worst:.2e}; ").unwrap();
        // simulate the swap event itself: indices i and i+j trade places when
        // fresh marks send the nearer one past the farther one
        let trials = trials.unwrap_or(20_000);
        for (case, (i, j, want)) in [(1u64, 1u64, 1.0 - LN_2), (2, 2, 12.0 * LN_2 - 8.0)]
            .into_iter()
            .enumerate()
        {
            let est = estimate(trials, lane(seed, 0x0400 + case as u64), move |_, rng| {
                let u = f64::gamma_draw(i as f64, 1.0, rng);
                let v = f64::gamma_draw(j as f64, 1.0, rng);
                let fa = f64::gamma_draw(1.0, 1.0, rng);
                let fb = f64::gamma_draw(1.0, 1.0, rng);
                if u / fa > (u + v) / fb {
                    1.0
                } else {
                    0.0
                }
            })
            .map_err(|e| e.to_string())?;
            let ok = (est.mean - want).abs() <= 4.0 * est.std_error;
            pass &= ok;
            write!(
                detail,
                "swap({i},{j}) {:.4}±{:.4} vs {want:.4}{}; ",
                est.mean,
                est.std_error,
                if ok { "" } else { " FAIL" }
            )
            .unwrap();
        }
        // recorded limit: pairwise probability at (200, 3) within 1e-3 of 1/4
        let pairwise = reorder_probability_quadrature::<f64>(200, 3).map_err(|e| e.to_string())?;
        let among = reorder_among_next::<f64>(200, 3).map_err(|e| e.to_string())?;
        let limit_ok = (pairwise - 0.25).abs() <= 1e-3;
        pass &= limit_ok;
        write!(
            detail,
            "recorded limit FAILS as stated: pairwise(200,3) = {pairwise:.6} (pairwise form \
             tends to 1/2, not 1/4); rank-among-followers(200,3) = {among:.6} approaches 1/4 \
             but sits {:.2e} away (> 1e-3); the claim holds for the among form only in the \
             strict limit",
            (among - 0.25).abs()
        )
        .unwrap();
        Ok((pass, detail.trim_end().to_string()))
    })();
    finish("reorder-probabilities", t0, body)
}

/// Simulated connected sum-distance against the closed broadcast form, and
/// the degenerate-mark value against its elementary expression.
fn check_broadcast_sum_distance(seed: u64, trials: Option<u64>) -> CheckReport {
    let t0 = Instant::now();
    let body = (|| {
        let cfg = planar();
        let spec = FadingSpec::rayleigh();
        let trials = trials.unwrap_or(4_000);
        let mut pass = true;
        let mut detail = String::new();
        for (case, s) in [0.1f64, 1.0].into_iter().enumerate() {
            let (want, _) = broadcast_sum_distance(cfg, spec, s).map_err(|e| e.to_string())?;
            let cap = window_mean_count_for_threshold(cfg, spec, s, 1e-4)
                .map_err(|e| e.to_string())?;
            let est = estimate_realizations(
                trials,
                lane(seed, 0x0500 + case as u64),
                cfg,
                spec,
                cap,
                move |real| real.connected_set(s).map_or(f64::NAN, |c| c.sum_distance()),
            )
            .map_err(|e| e.to_string())?;
            let ok = (est.mean - want).abs() <= 4.0 * est.std_error;
            pass &= ok;
            write!(
                detail,
                "s={s}: {:.3}±{:.3} vs {want:.3}{}; ",
                est.mean,
                est.std_error,
                if ok { "" } else { " FAIL" }
            )
            .unwrap();
        }
        let mut worst = 0.0f64;
        for s in [0.1f64, 1.0] {
            let (got, _) = broadcast_sum_distance(cfg, FadingSpec::no_fading(), s)
                .map_err(|e| e.to_string())?;
            let want = 2.0 * PI / (3.0 * s.powf(1.5));
            worst = worst.max((got - want).abs() / want);
        }
        let exact_ok = worst <= 1e-12;
        pass &= exact_ok;
        write!(detail, "degenerate closed form rel dev {worst:.1e}").unwrap();
        Ok((pass, detail))
    })();
    finish("broadcast-sum-distance", t0, body)
}

/// Rate optimization: closed optimum satisfies first-order optimality and
/// beats its neighborhood, the unit-exponent capacity matches its formula,
/// the closed lower bound stays within 0.13%, and the supercritical regime is
/// flagged unbounded with capacity growing as the rate vanishes.
fn check_transport_capacity() -> CheckReport {
    let t0 = Instant::now();
    let body = (|| {
        let mut pass = true;
        let mut detail = String::new();
        let spec = FadingSpec::rayleigh();
        let mut worst_resid = 0.0f64;
        let mut argmax_ok = true;
        for bd in [0.5f64, 0.75, 0.9] {
            let r = optimal_rate(bd).map_err(|e| e.to_string())?;
            let s = (r * LN_2).exp_m1();
            worst_resid = worst_resid.max((1.0 - r * bd * (s + 1.0) * LN_2 / s).abs());
            let cfg = NetworkConfig::from_big_delta(2, bd).map_err(|e| e.to_string())?;
            let at = |rate: f64| capacity_at_rate(cfg, spec, rate).map_err(|e| e.to_string());
            let peak = at(r)?;
            for h in [1e-3, 1e-2] {
                argmax_ok &= peak >= at(r + h)? && peak >= at(r - h)?;
            }
        }
        pass &= worst_resid <= 1e-9 && argmax_ok;
        write!(
            detail,
            "first-order residual {worst_resid:.1e}; neighborhood max {}; ",
            if argmax_ok { "ok" } else { "FAIL" }
        )
        .unwrap();
        let unit = NetworkConfig::new(2, 3.0).map_err(|e| e.to_string())?;
        let cap = broadcast_transport_capacity(unit, spec).map_err(|e| e.to_string())?;
        let want = 2.0 * PI / (3.0 * LN_2);
        let unit_ok = cap.bounded && (cap.capacity - want).abs() <= 1e-9;
        pass &= unit_ok;
        write!(detail, "unit-exponent capacity {:.6} vs {want:.6}; ", cap.capacity).unwrap();
        let mut worst_gap = 0.0f64;
        let mut bound_below = true;
        for bd in [0.3f64, 0.5, 0.75, 0.9, 0.99] {
            let cfg = NetworkConfig::from_big_delta(2, bd).map_err(|e| e.to_string())?;
            let exact = broadcast_transport_capacity(cfg, spec)
                .map_err(|e| e.to_string())?
                .capacity;
            let lb = capacity_lower_bound(cfg, spec).map_err(|e| e.to_string())?;
            bound_below &= lb <= exact + 1e-12;
            worst_gap = worst_gap.max((exact - lb) / exact);
        }
        let bound_ok = bound_below && worst_gap <= 0.0013;
        pass &= bound_ok;
        write!(detail, "bound gap ≤ {worst_gap:.5}; ").unwrap();
        let along = NetworkConfig::new(2, 2.0).map_err(|e| e.to_string())?;
        let sup = broadcast_transport_capacity(along, spec).map_err(|e| e.to_string())?;
        let mut growing = !sup.bounded;
        let mut prev = 0.0;
        for r in [1.0f64, 0.1, 0.01, 0.001] {
            let c = capacity_at_rate(along, spec, r).map_err(|e| e.to_string())?;
            growing &= c > prev;
            prev = c;
        }
        pass &= growing;
        write!(
            detail,
            "supercritical flagged unbounded with capacity growing as the rate vanishes: {}",
            if growing { "ok" } else { "FAIL" }
        )
        .unwrap();
        Ok((pass, detail))
    })();
    finish("transport-capacity", t0, body)
}

/// Reach probability closed form, threshold round-trips, the exact
/// unit-shape threshold, and the tightness of the sufficient bound.
fn check_reach_thresholds() -> CheckReport {
    let t0 = Instant::now();
    let body = (|| {
        let mut pass = true;
        let mut detail = String::new();
        let mut worst = 0.0f64;
        for s in [0.2f64, 0.5, 1.0, 3.0] {
            let got = broadcast_reach_probability(1, s).map_err(|e| e.to_string())?;
            worst = worst.max((got - (1.0 - (-s).exp()) / s).abs());
        }
        pass &= worst <= 1e-12;
        write!(detail, "unit-shape closed dev {worst:.1e}; ").unwrap();
        let mut round_ok = true;
        let mut exact_worst = 0.0f64;
        let mut rel_worst = 0.0f64;
        for m in [1u32, 2, 3] {
            for eps in [0.01f64, 0.05, 0.1] {
                let th = epsilon_reachability_threshold(m, eps).map_err(|e| e.to_string())?;
                let p = broadcast_reach_probability(m, th.sufficient)
                    .map_err(|e| e.to_string())?;
                round_ok &= p >= 1.0 - eps;
                if m == 1 {
                    let ex = th.exact.expect("unit shape has the exact threshold");
                    let pe = broadcast_reach_probability(1, ex).map_err(|e| e.to_string())?;
                    exact_worst = exact_worst.max((pe - (1.0 - eps)).abs());
                    if eps < 0.1 {
                        rel_worst = rel_worst.max((ex - th.sufficient).abs() / ex);
                    }
                }
            }
        }
        pass &= round_ok && exact_worst <= 1e-9 && rel_worst <= 0.07;
        write!(
            detail,
            "round-trips {}; exact-threshold dev {exact_worst:.1e}; sufficient within \
             {rel_worst:.4} of exact",
            if round_ok { "ok" } else { "FAIL" }
        )
        .unwrap();
        Ok((pass, detail))
    })();
    finish("reach-thresholds", t0, body)
}

/// Per-round first-success class sizes: simulation with fresh marks each
/// round against c_d/(k·s), independence of the round count, and the
/// harmonic total.
fn check_retransmission_classes(seed: u64, trials: Option<u64>) -> CheckReport {
    let t0 = Instant::now();
    let body = (|| {
        let cfg = planar();
        let spec = FadingSpec::rayleigh();
        let s = 1.0;
        let trials = trials.unwrap_or(4_000);
        let cap =
            window_mean_count_for_threshold(cfg, spec, s, 1e-4).map_err(|e| e.to_string())?;
        // per-trial class count: nodes succeeding in exactly k of n rounds
        let class_count = move |k: u32, n: u32| {
            move |_: u64, rng: &mut rand_chacha::ChaCha8Rng| -> f64 {
                let real = match sample_plp(cfg, cap, rng) {
                    Ok(p) => p,
                    Err(_) => return f64::NAN,
                };
                let mut hit = 0u64;
                for &x in real.path_losses() {
                    let wins = (0..n)
                        .filter(|_| spec.sample(rng) > s * x)
                        .count() as u32;
                    if wins == k {
                        hit += 1;
                    }
                }
                hit as f64
            }
        };
        let mut pass = true;
        let mut detail = String::new();
        let mut kept = Vec::new();
        for (case, (k, n)) in [(1u32, 3u32), (2, 3), (3, 6), (2, 6)].into_iter().enumerate() {
            let est = estimate(trials, lane(seed, 0x0800 + case as u64), class_count(k, n))
                .map_err(|e| e.to_string())?;
            let want = cfg.c_d() / (k as f64 * s);
            let ok = (est.mean - want).abs() <= 4.0 * est.std_error;
            pass &= ok;
            write!(
                detail,
                "k={k},n={n}: {:.3}±{:.3} vs {want:.3}{}; ",
                est.mean,
                est.std_error,
                if ok { "" } else { " FAIL" }
            )
            .unwrap();
            kept.push(est);
        }
        // same k, different round counts: means agree within combined error
        let (a, b) = (&kept[1], &kept[3]);
        let indep_ok = (a.mean - b.mean).abs()
            <= 4.0 * (a.std_error * a.std_error + b.std_error * b.std_error).sqrt();
        pass &= indep_ok;
        write!(detail, "round-count independence {}; ", if indep_ok { "ok" } else { "FAIL" })
            .unwrap();
        // total over classes: nodes succeeding at least once out of 6
        let est = estimate(trials, lane(seed, 0x0810), {
            move |_: u64, rng: &mut rand_chacha::ChaCha8Rng| -> f64 {
                let real = match sample_plp(cfg, cap, rng) {
                    Ok(p) => p,
                    Err(_) => return f64::NAN,
                };
                let mut hit = 0u64;
                for &x in real.path_losses() {
                    if (0..6).any(|_| spec.sample(rng) > s * x) {
                        hit += 1;
                    }
                }
                hit as f64
            }
        })
        .map_err(|e| e.to_string())?;
        let h6: f64 = (1..=6).map(|j| 1.0 / j as f64).sum();
        let want = cfg.c_d() / s * h6;
        let sum_ok = (est.mean - want).abs() <= 4.0 * est.std_error;
        pass &= sum_ok;
        write!(
            detail,
            "class total {:.3}±{:.3} vs {want:.3}{}",
            est.mean,
            est.std_error,
            if sum_ok { "" } else { " FAIL" }
        )
        .unwrap();
        Ok((pass, detail))
    })();
    finish("retransmission-classes", t0, body)
}

/// Simulated mean farthest connected distance sits below the concavity bound
/// and within 15% of it across thresholds; the s = 0.1 bound evaluates to
/// its recorded two-decimal value.
fn check_max_distance_bound(seed: u64, trials: Option<u64>) -> CheckReport {
    let t0 = Instant::now();
    let body = (|| {
        let cfg = planar();
        let spec = FadingSpec::rayleigh();
        let trials = trials.unwrap_or(10_000);
        let mut pass = true;
        let mut detail = String::new();
        for (case, s) in [0.05f64, 0.1, 0.5, 1.0].into_iter().enumerate() {
            let law = max_distance(cfg, spec, s).map_err(|e| e.to_string())?;
            let bound = law.jensen_bound().map_err(|e| e.to_string())?;
            let cap = window_mean_count_for_threshold(cfg, spec, s, 1e-4)
                .map_err(|e| e.to_string())?;
            let est = estimate_realizations(
                trials,
                lane(seed, 0x0900 + case as u64),
                cfg,
                spec,
                cap,
                move |real| real.connected_set(s).map_or(f64::NAN, |c| c.max_distance()),
            )
            .map_err(|e| e.to_string())?;
            // one-sided gates with the usual 4 SE noise allowance
            let below = est.mean <= bound + 4.0 * est.std_error;
            let tight = (bound - est.mean) / bound <= 0.15 + 4.0 * est.std_error / bound;
            pass &= below && tight;
            write!(
                detail,
                "s={s}: {:.3} vs bound {bound:.3}{}; ",
                est.mean,
                if below && tight { "" } else { " FAIL" }
            )
            .unwrap();
        }
        let b01 = max_distance(cfg, spec, 0.1)
            .and_then(|l| l.jensen_bound())
            .map_err(|e| e.to_string())?;
        let value_ok = (b01 - 6.36).abs() <= 0.005;
        pass &= value_ok;
        write!(detail, "s=0.1 bound {b01:.4} (recorded 6.36)").unwrap();
        Ok((pass, detail))
    })();
    finish("max-distance-bound", t0, body)
}

/// The ceiling rule equals the exhaustive density argmax for gains across
/// two hundred regions, and the last-round class density starts exactly at
/// the unfaded intensity.
fn check_localization(seed: u64) -> CheckReport {
    let t0 = Instant::now();
    let body = (|| {
        let cfg = planar();
        let mut rng = child_rng(lane(seed, 0x0a00), 0);
        let mut agree = 0u32;
        let draws = 100;
        for _ in 0..draws {
            let u = f64::uniform_01(&mut rng);
            let gain = cfg.c_d() * (1.0 / 200.0 + u * (1.0 - 1.0 / 200.0));
            let rule = localize(cfg, gain).map_err(|e| e.to_string())?;
            let scan = localize_ml(cfg, FadingSpec::no_fading(), gain, 200)
                .map_err(|e| e.to_string())?;
            agree += u32::from(rule == scan);
        }
        let rule_ok = agree == draws;
        let law = retransmission_distribution(cfg, 1.0, 6, 6).map_err(|e| e.to_string())?;
        let origin = law.density(0.0);
        let origin_ok = origin == cfg.c_d();
        let pass = rule_ok && origin_ok;
        let detail = format!(
            "ceiling rule matched the density argmax on {agree}/{draws} gains; last-round \
             class density at zero {origin:.12} (wants π exactly)"
        );
        Ok((pass, detail))
    })();
    finish("localization", t0, body)
}
