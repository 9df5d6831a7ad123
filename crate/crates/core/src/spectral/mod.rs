//! Discrete Hankel transform and the free Schrödinger propagator.

mod bessel;
mod propagator;
mod transform;

pub use propagator::{dispersive_decay_fit, DispersiveFit};
pub use transform::{Certification, CertificationSpec, SpectralTransform};
