//! Closed-form and simulated behavior of wireless networks whose nodes form a
//! Poisson process and whose links fade: the path-loss process x_i = r_i^α,
//! its faded counterpart ξ_i = x_i / f_i, and everything the model answers —
//! connectivity, broadcast reach, transport capacity, retransmission gains,
//! and range-free localization.
//!
//! Layering, bottom up: [`scalar`] (generic f32/f64 arithmetic), [`specfun`]
//! and [`quad`] (numerics), [`fading`] (the mark distribution), [`geometry`]
//! (exact sampling), [`mc`] (reproducible parallel estimation), [`analytic`]
//! (the closed forms), [`validation`] (closed form vs simulation, end to end).
//!
//! Everything is generic over the scalar; the aliases at the root pin f64 for
//! callers that just want numbers.

// reference constants keep every frozen digit even past f64 precision
#![allow(clippy::excessive_precision)]

pub mod scalar;
pub mod specfun;
pub mod quad;
pub mod fading;
pub mod geometry;
pub mod mc;
pub mod analytic;
pub mod validation;

pub use analytic::{AnalyticError, CapacityResult, GainReport};
pub use fading::FadingSpec;
pub use geometry::{NetworkConfig, PlpfRealization};

/// f64 network configuration.
pub type Network = NetworkConfig<f64>;
/// f64 fading mark distribution.
pub type Fading = FadingSpec<f64>;
/// f64 sampled realization.
pub type Realization = PlpfRealization<f64>;
