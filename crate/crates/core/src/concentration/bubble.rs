use serde::{Deserialize, Serialize};

use super::Decomposition;
use crate::dynamics::Trajectory;
use crate::error::{invalid, Result};
use crate::functionals::{energy, local_mass};
use crate::spectral::SpectralTransform;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BubbleReport {
    pub interval_id: usize,
    pub interval: (f64, f64),
    /// Snapshot time where the local mass at `radius` is smallest.
    pub witness_time: f64,
    pub radius: f64,
    /// `1 / radius`.
    pub frequency: f64,
    pub attained_mass: f64,
    pub threshold: f64,
}

/// Radii `h 2^{k/2}` up to `r_max`.
pub fn radius_ladder(step: f64, r_max: f64) -> Vec<f64> {
    (0..)
        .map(|k| step * std::f64::consts::SQRT_2.powi(k))
        .take_while(|&r| r <= r_max)
        .collect()
}

/// Smallest ladder radius `R` with `min_t local_mass(u(t), R) >= fraction E^{1/2} |I|^{1/2}`
/// over the snapshots of interval `id`; `None` if no radius qualifies or the
/// attained mass is zero.
pub fn find_bubble(
    transform: &SpectralTransform,
    traj: &Trajectory,
    decomp: &Decomposition<f64>,
    id: usize,
    fraction: f64,
) -> Result<Option<BubbleReport>> {
    if id >= decomp.len() {
        return Err(invalid("interval", format!("{id} out of {}", decomp.len())));
    }
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(invalid("fraction", format!("{fraction} is not in (0, 1)")));
    }
    let interval = decomp.interval(id);
    let (a, b) = traj.index_range(interval.0, interval.1)?;
    let e = energy(transform, &traj.snapshots()[a], traj.config().sign)?.total;
    let threshold = fraction * e.max(0.0).sqrt() * (interval.1 - interval.0).sqrt();
    let grid = traj.grid();
    for radius in radius_ladder(grid.step(), grid.r_max()) {
        let mut worst = (f64::INFINITY, interval.0);
        for i in a..=b {
            let m = local_mass(&traj.snapshots()[i], radius)?;
            if m < worst.0 {
                worst = (m, traj.times()[i]);
            }
        }
        if worst.0 > 0.0 && worst.0 >= threshold {
            return Ok(Some(BubbleReport {
                interval_id: id,
                interval,
                witness_time: worst.1,
                radius,
                frequency: 1.0 / radius,
                attained_mass: worst.0,
                threshold,
            }));
        }
    }
    Ok(None)
}
