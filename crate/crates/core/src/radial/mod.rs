//! Radial grids, quadrature, finite-difference and fractional operators, and
//! the critical scaling symmetry.

mod field;
mod fractional;
mod grid;

pub use field::{RadialField, Rescaled, DEFAULT_DECAY_THRESHOLD};
pub use fractional::{fractional_power, riesz_constant};
pub use grid::{sphere_area, GridSpec, RadialGrid};
