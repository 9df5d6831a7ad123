//! Strang-split evolution of the energy-critical NLS with Duhamel, linear-flow
//! and blowup diagnostics, plus trajectory persistence.

mod blowup;
mod config;
mod duhamel;
mod evolve;
mod flows;
pub mod store;
mod trajectory;

pub use blowup::{blowup_monitor, BlowupRecord};
pub use config::{EvolutionConfig, Sign};
pub use duhamel::{duhamel_residual, nonlinearity};
pub use evolve::{evolve, nonlinear_phase_step};
pub use flows::{linear_flow_range, linear_flow_series, linear_flows, Endpoint};
pub use trajectory::{Provenance, Status, Trajectory};
pub(crate) use trajectory::trapezoid_weights;
