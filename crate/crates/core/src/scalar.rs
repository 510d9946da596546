//! Scalar abstraction for the numeric layer.
//!
//! Everything downstream — special functions, quadrature, closed forms, samplers —
//! is generic over [`Real`] so the same code instantiates at `f64` and `f32`.
//! All stated accuracy targets are calibrated for `f64`; `f32` is offered for
//! callers that trade precision for footprint and gets proportionally looser
//! guarantees (tolerances scale with the epsilon of the type).
//!
//! [`SampleReal`] adds the random draws the samplers need. The implementations
//! delegate to `rand_distr`, which uses a squeeze/acceptance gamma sampler valid
//! for every shape ≥ 0.5 we admit.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};
use rand::distr::uniform::SampleUniform;
use rand::Rng;
use rand_distr::{Distribution, Gamma, Poisson};

/// Floating-point scalar with the constants and conversions the library needs.
///
/// Implemented for `f64` and `f32` only; the explicit impls keep the conversion
/// semantics obvious (literals are written in `f64` and narrowed at the edge).
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum<Self>
    + SampleUniform
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Narrowing cast from an `f64` literal.
    fn of(v: f64) -> Self;
    /// Widening cast for reporting and formatting.
    fn as_f64(self) -> f64;

    fn pi() -> Self {
        Self::of(std::f64::consts::PI)
    }
    fn ln_2() -> Self {
        Self::of(std::f64::consts::LN_2)
    }
    /// Euler–Mascheroni constant γ.
    fn euler_gamma() -> Self {
        Self::of(0.577_215_664_901_532_9)
    }
    /// Machine epsilon scaled by `n` — the working tolerance for iterative loops.
    fn eps_n(n: f64) -> Self {
        Self::of(n) * Self::epsilon()
    }
}

impl Real for f64 {
    fn of(v: f64) -> Self {
        v
    }
    fn as_f64(self) -> f64 {
        self
    }
}

impl Real for f32 {
    fn of(v: f64) -> Self {
        v as f32
    }
    fn as_f64(self) -> f64 {
        self as f64
    }
}

/// Scalars that can drive the samplers.
///
/// Each method takes the RNG by `&mut`: a random stream is single-owner and
/// never shared between concurrent draws.
pub trait SampleReal: Real {
    /// Uniform draw from [0, 1).
    fn uniform_01<G: Rng + ?Sized>(rng: &mut G) -> Self;
    /// Gamma(shape, scale) draw; callers guarantee shape > 0 and scale > 0.
    fn gamma_draw<G: Rng + ?Sized>(shape: Self, scale: Self, rng: &mut G) -> Self;
    /// Poisson(mean) count; callers guarantee mean > 0 and finite.
    fn poisson_draw<G: Rng + ?Sized>(mean: Self, rng: &mut G) -> u64;
}

impl SampleReal for f64 {
    fn uniform_01<G: Rng + ?Sized>(rng: &mut G) -> Self {
        rng.random()
    }
    fn gamma_draw<G: Rng + ?Sized>(shape: Self, scale: Self, rng: &mut G) -> Self {
        Gamma::new(shape, scale)
            .expect("gamma parameters validated by caller")
            .sample(rng)
    }
    fn poisson_draw<G: Rng + ?Sized>(mean: Self, rng: &mut G) -> u64 {
        let draw: f64 = Poisson::new(mean)
            .expect("poisson mean validated by caller")
            .sample(rng);
        draw as u64
    }
}

impl SampleReal for f32 {
    fn uniform_01<G: Rng + ?Sized>(rng: &mut G) -> Self {
        rng.random()
    }
    fn gamma_draw<G: Rng + ?Sized>(shape: Self, scale: Self, rng: &mut G) -> Self {
        Gamma::new(shape, scale)
            .expect("gamma parameters validated by caller")
            .sample(rng)
    }
    fn poisson_draw<G: Rng + ?Sized>(mean: Self, rng: &mut G) -> u64 {
        let draw: f32 = Poisson::new(mean)
            .expect("poisson mean validated by caller")
            .sample(rng);
        draw as u64
    }
}
