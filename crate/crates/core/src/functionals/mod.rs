//! Energy, local mass, spacetime and Strichartz norms, admissibility and the
//! Morawetz apparatus.

pub mod admissible;
mod bump;
mod energy;
mod mass;
mod morawetz;
mod spacetime;
mod weight;

pub use admissible::{default_pairs, is_admissible, AdmissiblePair, Exponent};
pub use bump::BumpFunction;
pub use energy::{critical_exponent, energy, potential_magnitude, Energy};
pub use mass::{
    hardy_constant, hardy_ratio, local_mass, mass_flux_check, mass_flux_constant, MassFluxReport,
};
pub use morawetz::{
    momentum_flux_identity_check, morawetz_check, MomentumIdentityReport, MorawetzReport,
    MORAWETZ_RATIO_BOUND,
};
pub use spacetime::{spacetime_norm, strichartz_norm, StrichartzNorm};
pub use weight::{morawetz_weight_eval, MorawetzWeight, WeightJet, WeightValues};
