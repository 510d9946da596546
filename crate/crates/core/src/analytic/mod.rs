//! Closed-form operations on the path-loss process.
//!
//! Every quantity here is a pure function of the network configuration, the
//! fading spec, and a handful of scalars. Closed forms are used wherever one
//! exists; everything else goes through the adaptive quadrature in [`crate::quad`],
//! and each such operation keeps an always-integral twin so the two paths can
//! be cross-checked against each other.
//!
//! Quantities that genuinely diverge (heavy-tail moments, unbounded capacity)
//! come back as explicit [`AnalyticError::Divergent`] values or as a cleared
//! `bounded` flag — never as infinities posing as numbers.

use std::fmt;

use crate::fading::FadingError;
use crate::geometry::GeometryError;
use crate::quad::QuadError;
use crate::specfun::SpecfunError;

pub mod applications;
pub mod broadcast;
pub mod connectivity;
pub mod point_process;

pub use applications::{
    localize, localize_ml, max_distance, probabilistic_progress, progress_g,
    retransmission_distribution, MaxDistanceLaw, Progress, RetransmissionDistribution,
};
pub use broadcast::{
    broadcast_reach_bounds, broadcast_reach_probability, broadcast_sum_distance,
    broadcast_transport_capacity, capacity_at_rate, capacity_lower_bound,
    epsilon_reachability_threshold, optimal_rate, r_opt_lower_bound, s_opt_lower_bound,
    superposition_capacity_lower_bound, superposition_near_field_term, ThresholdReport,
};
pub use connectivity::{
    connectivity_gain, connectivity_gain_min_delta, expected_connected,
    expected_connected_within, isolation_probability, mean_connected_node,
    retransmission_connectivity, retransmission_connectivity_varying, RetransmissionConnectivity,
};
pub use point_process::{
    conditioned_plpf_cdf, conditioned_plpf_cdf_integral, distance_pdf, intensity, mean_measure,
    path_gain_entropy, path_gain_mean, path_gain_second_moment, path_gain_variance,
    plp_cdf_and_mean, plpf_cdf, plpf_cdf_integral, plpf_entropy, plpf_mean, plpf_moments,
    plpf_pdf, plpf_variance, reorder_among_next, reorder_probability,
    reorder_probability_quadrature, PlpLaw,
};

/// Failure modes shared by the whole layer.
#[derive(Debug, Clone, PartialEq)]
pub enum AnalyticError {
    /// An argument violates an operation's precondition.
    Domain(&'static str),
    /// The combination of parameters has no implemented formula.
    Unsupported(&'static str),
    /// The quantity does not exist (divergent integral or moment).
    Divergent(&'static str),
    /// An internal solver or self-check failed to converge.
    Numeric(&'static str),
    Quad(QuadError),
    Fading(FadingError),
    Specfun(SpecfunError),
}

impl fmt::Display for AnalyticError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnalyticError::Domain(msg) => write!(f, "domain error: {msg}"),
            AnalyticError::Unsupported(msg) => write!(f, "unsupported: {msg}"),
            AnalyticError::Divergent(msg) => write!(f, "divergent: {msg}"),
            AnalyticError::Numeric(msg) => write!(f, "numeric failure: {msg}"),
            AnalyticError::Quad(e) => write!(f, "{e}"),
            AnalyticError::Fading(e) => write!(f, "{e}"),
            AnalyticError::Specfun(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for AnalyticError {}

impl From<QuadError> for AnalyticError {
    fn from(e: QuadError) -> Self {
        AnalyticError::Quad(e)
    }
}

impl From<FadingError> for AnalyticError {
    fn from(e: FadingError) -> Self {
        match e {
            FadingError::DivergentMoment => {
                AnalyticError::Divergent("fading moment of this order does not exist")
            }
            other => AnalyticError::Fading(other),
        }
    }
}

impl From<SpecfunError> for AnalyticError {
    fn from(e: SpecfunError) -> Self {
        AnalyticError::Specfun(e)
    }
}

impl From<GeometryError> for AnalyticError {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::Domain(msg) => AnalyticError::Domain(msg),
            GeometryError::Quad(q) => AnalyticError::Quad(q),
            GeometryError::Fading(f) => AnalyticError::Fading(f),
            _ => AnalyticError::Numeric("geometry layer reported a sampling-only failure"),
        }
    }
}

/// Fading gain of a count-like quantity: the with-fading value over the
/// degenerate-fading value at the same threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainReport<R> {
    pub with_fading: R,
    pub without_fading: R,
    /// `with_fading / without_fading`, exactly.
    pub gain: R,
}

/// Outcome of the broadcast rate optimization.
///
/// When `bounded` is false the capacity grows without limit as the rate is
/// lowered; the numeric fields are zero placeholders in that case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityResult<R> {
    /// Maximizing rate in bits per channel use; 0 when the supremum sits at rate 0.
    pub r_opt: R,
    /// Threshold at the maximizing rate, `2^r_opt - 1`.
    pub s_opt: R,
    /// Rate-weighted sum-distance at the optimum.
    pub capacity: R,
    pub bounded: bool,
}
