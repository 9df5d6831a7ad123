use serde::{Deserialize, Serialize};

use super::decomposition::{critical_density_of, trapezoid_sum};
use super::Decomposition;
use crate::dynamics::{linear_flow_range, Endpoint, Trajectory};
use crate::error::{Error, Result};
use crate::spectral::SpectralTransform;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExceptionalReport {
    pub threshold: f64,
    /// Critical masses of `(u_-, u_+)` per interval.
    pub linear_masses: Vec<[f64; 2]>,
    pub flags: Vec<bool>,
    pub count: usize,
    /// Sum of both linear masses over all intervals.
    pub total_linear: f64,
    /// `total_linear / threshold`, an upper bound for `count`.
    pub count_bound: f64,
}

fn snapshot_range(traj: &Trajectory, interval: (f64, f64)) -> Result<(usize, usize)> {
    let first = traj.index_of(interval.0)?;
    let last = traj.index_of(interval.1)?;
    Ok((first, last))
}

/// An interval is exceptional when the critical mass of either linear flow on
/// it exceeds `threshold`.
pub fn classify_exceptional(
    transform: &SpectralTransform,
    decomp: &Decomposition<f64>,
    traj: &Trajectory,
    threshold: f64,
) -> Result<ExceptionalReport> {
    if threshold.is_nan() || threshold <= 0.0 {
        return Err(crate::error::invalid("threshold", format!("{threshold} is not positive")));
    }
    let n = traj.grid().dimension();
    let (first, last) = snapshot_range(traj, (decomp.boundaries()[0], decomp.boundaries()[decomp.len()]))?;
    let times = traj.times();
    let mut densities = Vec::with_capacity(2);
    for endpoint in [Endpoint::Minus, Endpoint::Plus] {
        let flows = linear_flow_range(transform, traj, endpoint, first, last)?;
        let mut d = vec![0.0; first];
        d.extend(critical_density_of(n, &flows));
        densities.push(d);
    }
    let mut linear_masses = Vec::with_capacity(decomp.len());
    for j in 0..decomp.len() {
        let (a, b) = snapshot_range(traj, decomp.interval(j))?;
        linear_masses.push([
            trapezoid_sum(times, &densities[0], a, b),
            trapezoid_sum(times, &densities[1], a, b),
        ]);
    }
    let flags: Vec<bool> = linear_masses.iter().map(|m| m[0] > threshold || m[1] > threshold).collect();
    let total_linear: f64 = linear_masses.iter().map(|m| m[0] + m[1]).sum();
    Ok(ExceptionalReport {
        threshold,
        count: flags.iter().filter(|&&f| f).count(),
        count_bound: total_linear / threshold,
        total_linear,
        flags,
        linear_masses,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TechnicalReport {
    pub interval: (f64, f64),
    pub nonlinear_mass: f64,
    /// Critical masses of `(u_-, u_+)` on the interval.
    pub linear_masses: [f64; 2],
    /// `linear / nonlinear` for each endpoint.
    pub ratios: [f64; 2],
    pub linear_positive: bool,
}

/// Both sides of the lower bound on linear-flow mass, on an interval whose
/// critical mass lies in `[eta/2, 2 eta]`.
pub fn technical_check(
    transform: &SpectralTransform,
    traj: &Trajectory,
    interval: (f64, f64),
    eta: f64,
) -> Result<TechnicalReport> {
    let (a, b) = snapshot_range(traj, interval)?;
    if a >= b {
        return Err(Error::EmptyInterval {
            start: interval.0,
            end: interval.1,
        });
    }
    let n = traj.grid().dimension();
    let times = &traj.times()[a..=b];
    let nonlinear = critical_density_of(n, &traj.snapshots()[a..=b]);
    let nonlinear_mass = trapezoid_sum(times, &nonlinear, 0, times.len() - 1);
    if !(nonlinear_mass >= eta / 2.0 && nonlinear_mass <= 2.0 * eta) {
        return Err(Error::HypothesisViolated {
            mass: nonlinear_mass,
            low: eta / 2.0,
            high: 2.0 * eta,
        });
    }
    let mut linear_masses = [0.0; 2];
    for (k, endpoint) in [Endpoint::Minus, Endpoint::Plus].into_iter().enumerate() {
        let flows = linear_flow_range(transform, traj, endpoint, a, b)?;
        linear_masses[k] = trapezoid_sum(times, &critical_density_of(n, &flows), 0, times.len() - 1);
    }
    Ok(TechnicalReport {
        interval,
        nonlinear_mass,
        ratios: linear_masses.map(|m| m / nonlinear_mass),
        linear_positive: linear_masses.iter().all(|&m| m > 0.0),
        linear_masses,
    })
}
