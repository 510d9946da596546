//! CSV emitters, one per experiment. Each writes `#` comment lines
//! documenting the columns and resolved parameters, a header row, then one
//! row per grid point. Output is a pure function of the resolved parameters
//! (and the seed where one is consumed), so identical invocations produce
//! identical bytes.

use crate::grid::Mark;
use anyhow::{bail, Context, Result};
use plpf::analytic::{
    broadcast_reach_bounds, broadcast_reach_probability, broadcast_transport_capacity,
    connectivity_gain, epsilon_reachability_threshold, max_distance, optimal_rate,
    r_opt_lower_bound, retransmission_distribution, s_opt_lower_bound,
};
use plpf::fading::FadingSpec;
use plpf::geometry::{sample_plp, NetworkConfig};
use plpf::mc::child_rng;
use plpf::validation::run_all;
use std::fmt::Write;

fn spec_for(mark: Mark) -> Result<FadingSpec<f64>> {
    Ok(match mark {
        Mark::Shape(m) => FadingSpec::nakagami(m).context("fading shape")?,
        Mark::Degenerate => FadingSpec::no_fading(),
    })
}

/// Connectivity fading gain over a (delta, m) grid.
pub fn gain_surface(d: u32, deltas: &[f64], marks: &[Mark], out: &mut String) -> Result<()> {
    writeln!(out, "# connectivity fading gain over (delta, m)")?;
    writeln!(out, "# columns: d, alpha, delta, m, gain")?;
    writeln!(out, "# m column: fading shape, or inf for degenerate marks")?;
    writeln!(out, "d,alpha,delta,m,gain")?;
    for &delta in deltas {
        let cfg = NetworkConfig::from_delta(d, delta).context("geometry")?;
        for &mark in marks {
            let gain = connectivity_gain(cfg, spec_for(mark)?)
                .context("gain")?
                .gain;
            writeln!(
                out,
                "{d},{},{delta},{},{gain}",
                cfg.alpha(),
                mark.label()
            )?;
        }
    }
    Ok(())
}

/// Optimal broadcast rate and threshold over a big-delta grid, with the
/// elementary lower bounds alongside.
pub fn opt_rates(big_deltas: &[f64], out: &mut String) -> Result<()> {
    writeln!(out, "# rate maximizing the broadcast transport sum")?;
    writeln!(
        out,
        "# columns: big_delta, r_opt, s_opt, r_lower_bound, s_lower_bound"
    )?;
    writeln!(out, "big_delta,r_opt,s_opt,r_lower_bound,s_lower_bound")?;
    for &bd in big_deltas {
        let r = optimal_rate(bd).context("rate")?;
        let s = (r * std::f64::consts::LN_2).exp_m1();
        writeln!(
            out,
            "{bd},{r},{s},{},{}",
            r_opt_lower_bound(bd).context("rate bound")?,
            s_opt_lower_bound(bd).context("threshold bound")?
        )?;
    }
    Ok(())
}

/// Broadcast transport capacity over a (big_delta, m) grid.
pub fn transport_capacity(
    d: u32,
    big_deltas: &[f64],
    marks: &[Mark],
    out: &mut String,
) -> Result<()> {
    writeln!(out, "# broadcast transport capacity over (big_delta, m)")?;
    writeln!(
        out,
        "# columns: d, alpha, big_delta, m, bounded, r_opt, s_opt, capacity"
    )?;
    writeln!(
        out,
        "# bounded=false rows keep zero placeholders: capacity grows as the rate vanishes"
    )?;
    writeln!(out, "d,alpha,big_delta,m,bounded,r_opt,s_opt,capacity")?;
    for &bd in big_deltas {
        let cfg = NetworkConfig::from_big_delta(d, bd).context("geometry")?;
        for &mark in marks {
            let cap = broadcast_transport_capacity(cfg, spec_for(mark)?).context("capacity")?;
            writeln!(
                out,
                "{d},{},{bd},{},{},{},{},{}",
                cfg.alpha(),
                mark.label(),
                cap.bounded,
                cap.r_opt,
                cap.s_opt,
                cap.capacity
            )?;
        }
    }
    Ok(())
}

/// Farthest-connected-point summaries over a (s, m) grid.
pub fn max_distance_summary(
    d: u32,
    alpha: f64,
    marks: &[Mark],
    thresholds: &[f64],
    out: &mut String,
) -> Result<()> {
    writeln!(out, "# farthest connected point vs threshold")?;
    writeln!(
        out,
        "# columns: d, alpha, m, s, mean_connected, isolation, mean_distance_bound"
    )?;
    writeln!(
        out,
        "# mean_distance_bound: concavity bound on the mean farthest distance; \
         empty where no closed form applies"
    )?;
    writeln!(out, "d,alpha,m,s,mean_connected,isolation,mean_distance_bound")?;
    let cfg = NetworkConfig::new(d, alpha).context("geometry")?;
    for &mark in marks {
        let spec = spec_for(mark)?;
        for &s in thresholds {
            let law = max_distance(cfg, spec, s).context("law")?;
            let bound = law
                .jensen_bound()
                .map(|b| format!("{b}"))
                .unwrap_or_default();
            writeln!(
                out,
                "{d},{alpha},{},{s},{},{},{bound}",
                mark.label(),
                law.expected_connected(),
                law.isolation_atom()
            )?;
        }
    }
    Ok(())
}

/// Densities of the k-th retransmission class over an x grid.
pub fn retrans_densities(
    d: u32,
    alpha: f64,
    s: f64,
    n: u32,
    k: Option<u32>,
    xs: &[f64],
    out: &mut String,
) -> Result<()> {
    writeln!(out, "# path-loss density of nodes first reached in round k of n")?;
    writeln!(out, "# columns: d, alpha, s, n, k, x, density")?;
    let cfg = NetworkConfig::new(d, alpha).context("geometry")?;
    let ks: Vec<u32> = match k {
        Some(k) => vec![k],
        None => (1..=n).collect(),
    };
    let mut laws = Vec::new();
    for &k in &ks {
        let law = retransmission_distribution(cfg, s, k, n).context("class law")?;
        writeln!(out, "# expected count k={k}: {}", law.expected())?;
        laws.push(law);
    }
    writeln!(out, "d,alpha,s,n,k,x,density")?;
    for (law, &k) in laws.iter().zip(&ks) {
        for &x in xs {
            writeln!(out, "{d},{alpha},{s},{n},{k},{x},{}", law.density(x))?;
        }
    }
    Ok(())
}

/// Reach probability with its sandwich bounds, or — when `eps` values are
/// given — the threshold table meeting each reachability target.
pub fn reach_probability(
    shapes: &[u32],
    s_grid: &[f64],
    eps: Option<&[f64]>,
    out: &mut String,
) -> Result<()> {
    match eps {
        Some(eps_grid) => {
            writeln!(out, "# reduced thresholds meeting a reach target 1-eps")?;
            writeln!(out, "# columns: m, eps, sufficient, quadratic, exact")?;
            writeln!(out, "# quadratic and exact are closed forms for m=1 only")?;
            writeln!(out, "m,eps,sufficient,quadratic,exact")?;
            for &m in shapes {
                for &e in eps_grid {
                    let th = epsilon_reachability_threshold(m, e).context("threshold")?;
                    let opt = |v: Option<f64>| v.map(|v| format!("{v}")).unwrap_or_default();
                    writeln!(
                        out,
                        "{m},{e},{},{},{}",
                        th.sufficient,
                        opt(th.quadratic),
                        opt(th.exact)
                    )?;
                }
            }
        }
        None => {
            writeln!(out, "# single-hop broadcast reach probability")?;
            writeln!(out, "# columns: m, s_tilde, p, lower, upper")?;
            writeln!(out, "m,s_tilde,p,lower,upper")?;
            for &m in shapes {
                for &s in s_grid {
                    let p = broadcast_reach_probability(m, s).context("reach")?;
                    let (lo, hi) = broadcast_reach_bounds(m, s).context("bounds")?;
                    writeln!(out, "{m},{s},{p},{lo},{hi}")?;
                }
            }
        }
    }
    Ok(())
}

/// One realization of the faded process as CSV.
pub fn sample(
    d: u32,
    alpha: f64,
    mark: Mark,
    mean_count: f64,
    seed: u64,
    out: &mut String,
) -> Result<()> {
    let cfg = NetworkConfig::new(d, alpha).context("geometry")?;
    let spec = spec_for(mark)?;
    let mut rng = child_rng(seed, 0);
    let real = sample_plp(cfg, mean_count, &mut rng)
        .and_then(|p| p.attach_fading(spec, &mut rng))
        .context("sampling")?;
    writeln!(out, "# one realization: distances, losses, marks")?;
    writeln!(out, "# columns: index, distance, path_loss, fading_mark, faded_loss")?;
    writeln!(out, "# window_loss_bound: {}", real.window_loss_bound())?;
    writeln!(out, "index,distance,path_loss,fading_mark,faded_loss")?;
    let marks = real.fading_marks().expect("marks attached");
    let faded = real.faded_losses().expect("marks attached");
    for i in 0..real.len() {
        writeln!(
            out,
            "{i},{},{},{},{}",
            real.distances()[i],
            real.path_losses()[i],
            marks[i],
            faded[i]
        )?;
    }
    Ok(())
}

/// Run every cross-check; returns the failure count.
pub fn validate(seed: u64, trials: Option<u64>, out: &mut String) -> Result<u32> {
    if let Some(t) = trials {
        writeln!(
            out,
            "# note: trial counts overridden to {t}; confidence intervals widen accordingly"
        )?;
    }
    let reports = run_all(seed, trials);
    let mut failed = 0;
    for r in &reports {
        let verdict = if r.pass {
            "PASS"
        } else {
            failed += 1;
            "FAIL"
        };
        writeln!(out, "{verdict} {} [{} ms]: {}", r.name, r.millis, r.detail)?;
    }
    if failed > 0 {
        writeln!(out, "{failed} of {} checks failed", reports.len())?;
    } else {
        writeln!(out, "all {} checks passed", reports.len())?;
    }
    Ok(failed)
}

/// Reject marks the experiment cannot use.
pub fn single_mark(marks: &[Mark]) -> Result<Mark> {
    match marks {
        [one] => Ok(*one),
        _ => bail!(crate::UsageError(
            "--m takes a single entry for this command".into()
        )),
    }
}
