//! Numerical laboratory for the radial defocusing energy-critical nonlinear
//! Schrödinger equation `i u_t + Δu = μ|u|^{4/(n-2)} u`.
//!
//! Radial fields live on a uniform grid ([`radial`]) and are propagated by a
//! discrete Hankel transform ([`spectral`]). [`dynamics`] runs the Strang-split
//! nonlinear flow, [`functionals`] evaluates the conserved quantities, norms
//! and Morawetz-type bounds, and [`concentration`] implements the interval
//! combinatorics.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod concentration;
pub mod dynamics;
pub mod error;
pub mod functionals;
pub mod radial;
pub mod scalar;
pub mod spectral;

use num_rational::Ratio;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use concentration::{ConcentrationConfig, NestConfig};
pub use dynamics::{EvolutionConfig, Sign, Trajectory};
pub use radial::{RadialField, RadialGrid};
pub use spectral::SpectralTransform;

/// Floating-point interval decomposition, as produced from trajectories.
pub type IntervalDecomposition = concentration::Decomposition<f64>;
/// Exact interval decomposition for combinatorial checks.
pub type ExactDecomposition = concentration::Decomposition<Ratio<i64>>;
pub type NestResult = concentration::NestResult<f64>;
pub type Bump = functionals::BumpFunction<f64>;
pub type Weight = functionals::MorawetzWeight<f64>;
/// Admissible pair with exact rational exponents.
pub type ExactPair = functionals::AdmissiblePair<Ratio<i64>>;
pub type Pair = functionals::AdmissiblePair<f64>;
