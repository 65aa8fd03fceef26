//! Transformation group acting on Riccati equations, and the Bäcklund and
//! generalized Darboux transformations of one-dimensional Schrödinger
//! problems built on top of it.
//!
//! The numerical core is generic over the scalar type (see [`Real`]); the
//! aliases at the bottom of this file fix it to `f64`, which is what the
//! command-line driver and the acceptance suite use.

pub mod cli;
pub mod darboux;
pub mod error;
pub mod fnspace;
pub mod potentials;
pub mod reduction;
pub mod riccati;
pub mod scalar;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Real;

/// Real function on a union of open intervals, double precision.
pub type Function = fnspace::ScalarFunction<f64>;
/// Open interval, double precision.
pub type Interval = fnspace::Interval<f64>;
/// Union of open intervals, double precision.
pub type Domain = fnspace::Domain<f64>;
/// Riccati equation with double-precision coefficients.
pub type RiccatiEquation = riccati::RiccatiEquation<f64>;
/// SL(2,R)-valued curve, double precision.
pub type GaugeCurve = riccati::GaugeCurve<f64>;
/// Pointwise coefficient triple (a₂, a₁, a₀), double precision.
pub type CoefficientTriple = riccati::CoefficientTriple<f64>;
/// Output of a transformation, double precision.
pub type TransformReport = darboux::TransformReport<f64>;
/// Known eigenpair of a solvable potential, double precision.
pub type EigenPair = potentials::EigenPair<f64>;

/// Single-precision variants, mostly useful for quick sweeps.
pub mod f32 {
    pub type Function = crate::fnspace::ScalarFunction<f32>;
    pub type Interval = crate::fnspace::Interval<f32>;
    pub type Domain = crate::fnspace::Domain<f32>;
}
