use serde::{Deserialize, Serialize};

use crate::dynamics::Sign;
use crate::error::Result;
use crate::radial::RadialField;
use crate::spectral::SpectralTransform;

/// Conserved energy split into its kinetic and signed potential parts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Energy {
    pub kinetic: f64,
    pub potential: f64,
    pub total: f64,
}

/// Critical Sobolev exponent `2n/(n-2)`.
pub fn critical_exponent(dimension: usize) -> f64 {
    let n = dimension as f64;
    2.0 * n / (n - 2.0)
}

/// `((n-2)/2n) int |u|^{2n/(n-2)} dx`, unsigned.
pub fn potential_magnitude(u: &RadialField) -> f64 {
    let n = u.grid().dimension();
    let p = critical_exponent(n);
    u.modulus_power_integral(p) / p
}

/// `E(u) = int 1/2 |grad u|^2 + mu (n-2)/(2n) |u|^{2n/(n-2)} dx`.
pub fn energy(transform: &SpectralTransform, u: &RadialField, sign: Sign) -> Result<Energy> {
    let kinetic = transform.kinetic_energy(u)?;
    let potential = match sign {
        Sign::Free => 0.0,
        s => s.coefficient() * potential_magnitude(u),
    };
    Ok(Energy {
        kinetic,
        potential,
        total: kinetic + potential,
    })
}
