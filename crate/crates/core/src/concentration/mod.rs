//! Interval machinery for concentration arguments: greedy subdivision by
//! critical spacetime mass, exceptional intervals, bubble search, window
//! ratios and the nesting algorithm.
//!
//! The combinatorial parts are generic over [`Scalar`](crate::scalar::Scalar)
//! so they can be checked in exact rational arithmetic.

mod bubble;
mod config;
mod decomposition;
mod exceptional;
mod nest;
mod windows;

pub use bubble::{find_bubble, radius_ladder, BubbleReport};
pub use config::{ConcentrationConfig, NestConfig};
pub use decomposition::{critical_density, greedy_subdivide, greedy_subdivide_density, Decomposition};
pub use exceptional::{classify_exceptional, technical_check, ExceptionalReport, TechnicalReport};
pub use nest::{bourgain_nest, closeness, is_dyadic_chain, longest_chain, NestResult};
pub use windows::{
    cauchy_schwarz_certificate, half_norm_ratio, largest_fraction, min_largest_fraction,
    sup_half_norm_ratio, Window,
};
