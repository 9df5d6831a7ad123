use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Trajectory;
use crate::error::Result;
use crate::radial::RadialField;
use crate::spectral::SpectralTransform;

/// Which endpoint a linear flow is anchored at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Endpoint {
    Minus,
    Plus,
}

/// `(u_-(t), u_+(t))` with `u_pm(t) = e^{i(t - t_pm)Delta} u(t_pm)`.
pub fn linear_flows(
    transform: &SpectralTransform,
    traj: &Trajectory,
    t: f64,
) -> Result<(RadialField, RadialField)> {
    let i = traj.index_of(t)?;
    Ok((
        flow_at(transform, traj, Endpoint::Minus, i)?,
        flow_at(transform, traj, Endpoint::Plus, i)?,
    ))
}

fn anchor(traj: &Trajectory, endpoint: Endpoint) -> usize {
    match endpoint {
        Endpoint::Minus => 0,
        Endpoint::Plus => traj.len() - 1,
    }
}

fn flow_at(
    transform: &SpectralTransform,
    traj: &Trajectory,
    endpoint: Endpoint,
    index: usize,
) -> Result<RadialField> {
    let a = anchor(traj, endpoint);
    if a == index {
        return Ok(traj.snapshots()[a].clone());
    }
    transform.free_evolve(&traj.snapshots()[a], traj.times()[index] - traj.times()[a])
}

/// The linear flow from one endpoint at every snapshot time.
pub fn linear_flow_series(
    transform: &SpectralTransform,
    traj: &Trajectory,
    endpoint: Endpoint,
) -> Result<Vec<RadialField>> {
    linear_flow_range(transform, traj, endpoint, 0, traj.len() - 1)
}

/// The linear flow from one endpoint at snapshots `first..=last`.
pub fn linear_flow_range(
    transform: &SpectralTransform,
    traj: &Trajectory,
    endpoint: Endpoint,
    first: usize,
    last: usize,
) -> Result<Vec<RadialField>> {
    if first > last || last >= traj.len() {
        return Err(crate::error::invalid(
            "range",
            format!("{first}..={last} outside 0..{}", traj.len()),
        ));
    }
    let a = anchor(traj, endpoint);
    let ta = traj.times()[a];
    transform.check_time(traj.t_last() - traj.t_minus())?;
    let c = transform.forward(&traj.snapshots()[a])?;
    Ok((first..=last)
        .into_par_iter()
        .map(|i| {
            if i == a {
                traj.snapshots()[a].clone()
            } else {
                transform.backward(&transform.propagate_coefficients(&c, traj.times()[i] - ta))
            }
        })
        .collect())
}
