//! Experiment runner for the path-loss point-process library: emits sweep
//! CSVs, exports realizations, and runs the cross-check suite.
//!
//! Parameter precedence per flag: command line, then `--config` file, then
//! the built-in default. All numeric flags take the grammar in [`grid`]
//! (scalars, `lo:hi:n` ranges, comma lists).

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

mod config;
mod experiments;
mod grid;

/// Bad invocation: reported with exit code 2 instead of 1.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Parser)]
#[command(
    name = "plpf",
    about = "Poisson path-loss-with-fading experiments",
    version,
    subcommand_required = true,
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Flat key=value parameter file; command-line flags override it
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Output file (default: stdout)
    #[arg(long, value_name = "FILE")]
    out: Option<String>,
}

#[derive(Args)]
struct GainSurfaceArgs {
    /// Spatial dimension
    #[arg(long)]
    d: Option<String>,
    /// Scaling exponent grid delta = d/alpha
    #[arg(long)]
    delta: Option<String>,
    /// Decay exponent grid (alternative to --delta)
    #[arg(long)]
    alpha: Option<String>,
    /// Fading shapes (numbers, inf/none for degenerate)
    #[arg(long)]
    m: Option<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct OptRatesArgs {
    /// Grid of big_delta = (d+1)/alpha
    #[arg(long = "big-delta")]
    big_delta: Option<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct TransportCapacityArgs {
    /// Spatial dimension
    #[arg(long)]
    d: Option<String>,
    /// Grid of big_delta = (d+1)/alpha
    #[arg(long = "big-delta")]
    big_delta: Option<String>,
    /// Decay exponent grid (alternative to --big-delta)
    #[arg(long)]
    alpha: Option<String>,
    /// Fading shapes (numbers, inf/none for degenerate)
    #[arg(long)]
    m: Option<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct MaxDistanceArgs {
    /// Spatial dimension
    #[arg(long)]
    d: Option<String>,
    /// Decay exponent
    #[arg(long)]
    alpha: Option<String>,
    /// Fading shapes (numbers, inf/none for degenerate)
    #[arg(long)]
    m: Option<String>,
    /// Threshold grid
    #[arg(long)]
    s: Option<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct RetransDensitiesArgs {
    /// Spatial dimension
    #[arg(long)]
    d: Option<String>,
    /// Decay exponent
    #[arg(long)]
    alpha: Option<String>,
    /// Threshold
    #[arg(long)]
    s: Option<String>,
    /// Number of rounds
    #[arg(long)]
    n: Option<String>,
    /// Single class index (default: every class 1..=n)
    #[arg(long)]
    k: Option<String>,
    /// Path-loss grid
    #[arg(long)]
    x: Option<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct ReachProbabilityArgs {
    /// Integer fading shapes
    #[arg(long)]
    m: Option<String>,
    /// Reduced-threshold grid
    #[arg(long)]
    s: Option<String>,
    /// Reach targets 1-eps; selects the threshold-table layout
    #[arg(long)]
    eps: Option<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct ValidateArgs {
    /// Base seed for every cross-check
    #[arg(long)]
    seed: Option<String>,
    /// Override per-check trial counts (widens confidence intervals)
    #[arg(long)]
    trials: Option<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SampleArgs {
    /// Spatial dimension
    #[arg(long)]
    d: Option<String>,
    /// Decay exponent
    #[arg(long)]
    alpha: Option<String>,
    /// Fading shape (single entry; inf/none for degenerate)
    #[arg(long)]
    m: Option<String>,
    /// Mean number of points in the sampled window
    #[arg(long)]
    n: Option<String>,
    /// RNG seed
    #[arg(long)]
    seed: Option<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand)]
enum Cmd {
    /// Connectivity fading gain over (delta, m)
    GainSurface(GainSurfaceArgs),
    /// Optimal broadcast rate vs big_delta, with lower bounds
    OptRates(OptRatesArgs),
    /// Broadcast transport capacity over (big_delta, m)
    TransportCapacity(TransportCapacityArgs),
    /// Farthest connected point: mean count, isolation, distance bound
    MaxDistance(MaxDistanceArgs),
    /// Densities of the k-th retransmission class
    RetransDensities(RetransDensitiesArgs),
    /// Single-hop reach probability, bounds, and epsilon-thresholds
    ReachProbability(ReachProbabilityArgs),
    /// Run every analytic-vs-simulation cross-check
    Validate(ValidateArgs),
    /// Export one realization as CSV
    Sample(SampleArgs),
}

/// Flag value with config-file fallback and a default.
struct Resolve {
    file: HashMap<String, String>,
}

impl Resolve {
    fn new(common: &Common) -> Result<Self> {
        let file = match &common.config {
            Some(path) => config::load(path)?,
            None => HashMap::new(),
        };
        Ok(Resolve { file })
    }

    fn get(&self, cli: &Option<String>, key: &str, default: &str) -> String {
        cli.clone()
            .or_else(|| self.file.get(key).cloned())
            .unwrap_or_else(|| default.to_string())
    }

    fn opt(&self, cli: &Option<String>, key: &str) -> Option<String> {
        cli.clone().or_else(|| self.file.get(key).cloned())
    }
}

fn dimension(r: &Resolve, cli: &Option<String>, default: &str) -> Result<u32> {
    let d = grid::uint("d", &r.get(cli, "d", default))?;
    if d == 0 || d > 16 {
        Err(UsageError("--d must be between 1 and 16".into()).into())
    } else {
        Ok(d as u32)
    }
}

// δ-or-α exclusivity: a gain sweep is indexed by one of them, never both.
fn delta_grid(
    r: &Resolve,
    d: u32,
    delta: &Option<String>,
    alpha: &Option<String>,
    default_delta: &str,
) -> Result<Vec<f64>> {
    match (r.opt(delta, "delta"), r.opt(alpha, "alpha")) {
        (Some(_), Some(_)) => {
            Err(UsageError("give either --delta or --alpha, not both".into()).into())
        }
        (None, Some(a)) => Ok(grid::reals("alpha", &a)?
            .into_iter()
            .map(|a| d as f64 / a)
            .collect()),
        (maybe_delta, None) => Ok(grid::reals(
            "delta",
            &maybe_delta.unwrap_or_else(|| default_delta.to_string()),
        )?),
    }
}

fn big_delta_grid(
    r: &Resolve,
    d: u32,
    big_delta: &Option<String>,
    alpha: &Option<String>,
    default_bd: &str,
) -> Result<Vec<f64>> {
    match (r.opt(big_delta, "big-delta"), r.opt(alpha, "alpha")) {
        (Some(_), Some(_)) => {
            Err(UsageError("give either --big-delta or --alpha, not both".into()).into())
        }
        (None, Some(a)) => Ok(grid::reals("alpha", &a)?
            .into_iter()
            .map(|a| (d as f64 + 1.0) / a)
            .collect()),
        (maybe_bd, None) => Ok(grid::reals(
            "big-delta",
            &maybe_bd.unwrap_or_else(|| default_bd.to_string()),
        )?),
    }
}

fn integer_shapes(r: &Resolve, cli: &Option<String>, default: &str) -> Result<Vec<u32>> {
    let vals = grid::reals("m", &r.get(cli, "m", default))?;
    let mut out = Vec::new();
    for v in vals {
        if v < 1.0 || v.fract() != 0.0 || v > u32::MAX as f64 {
            return Err(UsageError(format!(
                "--m entry {v} must be a positive integer for this command"
            ))
            .into());
        }
        out.push(v as u32);
    }
    Ok(out)
}

fn emit(common: &Common, r: &Resolve, text: &str) -> Result<()> {
    match r.opt(&common.out, "out") {
        Some(path) => std::fs::write(&path, text)
            .map_err(|e| anyhow::anyhow!("cannot write {path}: {e}")),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn dispatch(cmd: &Cmd) -> Result<u32> {
    let mut text = String::new();
    let mut failures = 0;
    match cmd {
        Cmd::GainSurface(a) => {
            let r = Resolve::new(&a.common)?;
            let d = dimension(&r, &a.d, "2")?;
            let deltas = delta_grid(&r, d, &a.delta, &a.alpha, "0.125:1.5:12")?;
            let marks = grid::marks("m", &r.get(&a.m, "m", "1,2,5"))?;
            experiments::gain_surface(d, &deltas, &marks, &mut text)?;
            emit(&a.common, &r, &text)?;
        }
        Cmd::OptRates(a) => {
            let r = Resolve::new(&a.common)?;
            let bds = grid::reals("big-delta", &r.get(&a.big_delta, "big-delta", "0.5:1:26"))?;
            experiments::opt_rates(&bds, &mut text)?;
            emit(&a.common, &r, &text)?;
        }
        Cmd::TransportCapacity(a) => {
            let r = Resolve::new(&a.common)?;
            let d = dimension(&r, &a.d, "2")?;
            let bds = big_delta_grid(&r, d, &a.big_delta, &a.alpha, "0.5:1:26")?;
            let marks = grid::marks("m", &r.get(&a.m, "m", "1,inf"))?;
            experiments::transport_capacity(d, &bds, &marks, &mut text)?;
            emit(&a.common, &r, &text)?;
        }
        Cmd::MaxDistance(a) => {
            let r = Resolve::new(&a.common)?;
            let d = dimension(&r, &a.d, "2")?;
            let alpha = grid::positive("alpha", &r.get(&a.alpha, "alpha", "2"))?;
            let marks = grid::marks("m", &r.get(&a.m, "m", "1"))?;
            let ss = grid::reals("s", &r.get(&a.s, "s", "0.05:1:20"))?;
            experiments::max_distance_summary(d, alpha, &marks, &ss, &mut text)?;
            emit(&a.common, &r, &text)?;
        }
        Cmd::RetransDensities(a) => {
            let r = Resolve::new(&a.common)?;
            let d = dimension(&r, &a.d, "2")?;
            let alpha = grid::positive("alpha", &r.get(&a.alpha, "alpha", "2"))?;
            let s = grid::positive("s", &r.get(&a.s, "s", "1"))?;
            let n = grid::uint("n", &r.get(&a.n, "n", "3"))? as u32;
            let k = match r.opt(&a.k, "k") {
                Some(text) => Some(grid::uint("k", &text)? as u32),
                None => None,
            };
            let xs = grid::reals("x", &r.get(&a.x, "x", "0:5:101"))?;
            experiments::retrans_densities(d, alpha, s, n, k, &xs, &mut text)?;
            emit(&a.common, &r, &text)?;
        }
        Cmd::ReachProbability(a) => {
            let r = Resolve::new(&a.common)?;
            let shapes = integer_shapes(&r, &a.m, "1,2,4,8")?;
            let ss = grid::reals("s", &r.get(&a.s, "s", "0.1:3:30"))?;
            let eps = match r.opt(&a.eps, "eps") {
                Some(text) => Some(grid::reals("eps", &text)?),
                None => None,
            };
            experiments::reach_probability(&shapes, &ss, eps.as_deref(), &mut text)?;
            emit(&a.common, &r, &text)?;
        }
        Cmd::Validate(a) => {
            let r = Resolve::new(&a.common)?;
            // same default lane as the packaged cross-check suite
            let seed = grid::uint("seed", &r.get(&a.seed, "seed", "1592598566"))?;
            let trials = match r.opt(&a.trials, "trials") {
                Some(text) => Some(grid::uint("trials", &text)?),
                None => None,
            };
            failures = experiments::validate(seed, trials, &mut text)?;
            emit(&a.common, &r, &text)?;
        }
        Cmd::Sample(a) => {
            let r = Resolve::new(&a.common)?;
            let d = dimension(&r, &a.d, "2")?;
            let alpha = grid::positive("alpha", &r.get(&a.alpha, "alpha", "2"))?;
            let mark = experiments::single_mark(&grid::marks("m", &r.get(&a.m, "m", "1"))?)?;
            let mean_count = grid::positive("n", &r.get(&a.n, "n", "100"))?;
            let seed = grid::uint("seed", &r.get(&a.seed, "seed", "0"))?;
            experiments::sample(d, alpha, mark, mean_count, seed, &mut text)?;
            emit(&a.common, &r, &text)?;
        }
    }
    Ok(failures)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli.cmd) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(_) => ExitCode::FAILURE,
        Err(e) => {
            if e.is::<UsageError>() {
                eprintln!("usage error: {e:#}");
                ExitCode::from(2)
            } else {
                eprintln!("error: {e:#}");
                ExitCode::FAILURE
            }
        }
    }
}
