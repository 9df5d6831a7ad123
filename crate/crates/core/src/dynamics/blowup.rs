use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Sign, Trajectory};
use crate::error::Result;
use crate::functionals::potential_magnitude;
use crate::spectral::SpectralTransform;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlowupRecord {
    pub flagged: bool,
    pub first_alarm_time: Option<f64>,
    pub factor: f64,
    /// `||grad u(t)||_2` at every snapshot.
    pub gradient_history: Vec<f64>,
    /// Focusing data whose potential energy exceeds its kinetic energy at `t_-`.
    pub glassey_indicator: bool,
}

/// Flags the first snapshot where `||grad u||_2` exceeds `factor` times its initial value.
pub fn blowup_monitor(transform: &SpectralTransform, traj: &Trajectory) -> Result<BlowupRecord> {
    let factor = traj.config().blowup_factor;
    let gradient_history: Vec<f64> = traj
        .snapshots()
        .par_iter()
        .map(|u| transform.gradient_norm(u))
        .collect::<Result<_>>()?;
    let sign = traj.config().sign;
    let g0 = gradient_history[0];
    let first_alarm_time = if sign == Sign::Free || g0 == 0.0 {
        None
    } else {
        gradient_history
            .iter()
            .position(|g| !(*g <= factor * g0))
            .map(|i| traj.times()[i])
    };
    let u0 = &traj.snapshots()[0];
    let glassey_indicator = sign == Sign::Focusing
        && potential_magnitude(u0) > 0.5 * g0 * g0;
    Ok(BlowupRecord {
        flagged: first_alarm_time.is_some(),
        first_alarm_time,
        factor,
        gradient_history,
        glassey_indicator,
    })
}
