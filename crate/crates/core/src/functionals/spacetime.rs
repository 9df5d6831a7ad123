use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::AdmissiblePair;
use crate::dynamics::{trapezoid_weights, Trajectory};
use crate::error::{Error, Result};
use crate::radial::{fractional_power, RadialField};
use crate::spectral::SpectralTransform;

use super::admissible::Exponent;

fn check_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    Ok(())
}

/// `(int_I ||u(t)||_{L^r}^q dt)^{1/q}` by the trapezoid rule over the
/// snapshots in `I = [a, b]`; `q = inf` takes the maximum over those snapshots.
pub fn spacetime_norm(traj: &Trajectory, q: f64, r: f64, interval: (f64, f64)) -> Result<f64> {
    let (i, j) = traj.index_range(interval.0, interval.1)?;
    let norms = traj.snapshots()[i..=j]
        .iter()
        .map(|u| u.lp_norm(r))
        .collect::<Result<Vec<_>>>()?;
    time_norm(&norms, &traj.times()[i..=j], q)
}

pub(crate) fn time_norm(norms: &[f64], times: &[f64], q: f64) -> Result<f64> {
    check_exponent(q)?;
    if q.is_infinite() {
        return Ok(norms.iter().copied().fold(0.0, f64::max));
    }
    let weights = trapezoid_weights(times);
    let sum: f64 = weights
        .iter()
        .zip(norms)
        .map(|(w, n)| w * n.powf(q))
        .sum();
    Ok(sum.powf(1.0 / q))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrichartzNorm {
    pub order: u32,
    pub value: f64,
    pub components: Vec<(AdmissiblePair<f64>, f64)>,
}

/// `sup` over `pairs` of `|| |grad|^k u ||_{L^q_t L^r_x(I)}` for `k in {0, 1}`.
pub fn strichartz_norm(
    transform: &SpectralTransform,
    traj: &Trajectory,
    interval: (f64, f64),
    order: u32,
    pairs: &[AdmissiblePair<f64>],
) -> Result<StrichartzNorm> {
    if order > 1 {
        return Err(crate::error::invalid("order", "must be 0 or 1"));
    }
    for p in pairs {
        AdmissiblePair::new(p.q, p.r, p.dimension)?;
    }
    let (i, j) = traj.index_range(interval.0, interval.1)?;
    let fields: Vec<RadialField> = if order == 0 {
        traj.snapshots()[i..=j].to_vec()
    } else {
        traj.snapshots()[i..=j]
            .par_iter()
            .map(|u| fractional_power(transform, u, 1.0))
            .collect::<Result<_>>()?
    };
    let times = &traj.times()[i..=j];
    let components = pairs
        .iter()
        .map(|p| {
            let r = p.r.to_f64();
            let norms = fields.iter().map(|u| u.lp_norm(r)).collect::<Result<Vec<_>>>()?;
            let q = match p.q {
                Exponent::Finite(q) => q,
                Exponent::Infinite => f64::INFINITY,
            };
            Ok((*p, time_norm(&norms, times, q)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let value = components.iter().map(|c| c.1).fold(0.0, f64::max);
    Ok(StrichartzNorm {
        order,
        value,
        components,
    })
}
