use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{critical_exponent, energy, MorawetzWeight, WeightJet};
use crate::dynamics::{trapezoid_weights, Trajectory};
use crate::error::{invalid, Error, Result};
use crate::spectral::SpectralTransform;

/// Frozen bound for `MorawetzReport::ratio`. The estimate's constant is not
/// explicit; this value is twice the largest ratio observed on Gaussian, ring
/// and sech data in three dimensions over unit time, `A in {1, 2, 4}`.
pub const MORAWETZ_RATIO_BOUND: f64 = 0.6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MorawetzReport {
    pub interval: (f64, f64),
    pub a_factor: f64,
    /// Cutoff radius `A |I|^{1/2}`.
    pub radius: f64,
    /// `int_I int_{|x| <= A|I|^{1/2}} |u|^{2n/(n-2)} / |x| dx dt`.
    pub lhs: f64,
    pub energy: f64,
    /// `A |I|^{1/2} E`.
    pub rhs: f64,
    pub ratio: f64,
    /// The left side with `1/|x|` replaced by `(eps^2 + |x|^2)^{-1/2}`.
    pub regularized: Vec<(f64, f64)>,
    /// Richardson extrapolation of the two smallest `eps` values to `eps = 0`, order 2.
    pub extrapolated: Option<f64>,
}

pub fn morawetz_check(
    transform: &SpectralTransform,
    traj: &Trajectory,
    interval: (f64, f64),
    a_factor: f64,
    epsilons: &[f64],
) -> Result<MorawetzReport> {
    if !(a_factor >= 1.0) {
        return Err(invalid("A", format!("{a_factor} < 1")));
    }
    if epsilons.iter().any(|e| !(*e > 0.0)) {
        return Err(invalid("epsilon", "must be positive"));
    }
    let (i, j) = traj.index_range(interval.0, interval.1)?;
    let length = interval.1 - interval.0;
    let radius = a_factor * length.sqrt();
    let grid = traj.grid();
    let p = critical_exponent(grid.dimension());
    let times = &traj.times()[i..=j];
    let weights = trapezoid_weights(times);

    let spatial = |kernel: &(dyn Fn(f64) -> f64 + Sync)| -> f64 {
        let per_time: Vec<f64> = traj.snapshots()[i..=j]
            .par_iter()
            .map(|u| {
                grid.sum_weighted(grid.radii().iter().zip(u.values()).map(|(&r, v)| {
                    if r > 0.0 && r <= radius {
                        v.norm().powf(p) * kernel(r)
                    } else {
                        0.0
                    }
                }))
            })
            .collect();
        weights.iter().zip(&per_time).map(|(w, f)| w * f).sum()
    };

    let lhs = spatial(&|r| 1.0 / r);
    let mut sorted = epsilons.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let regularized: Vec<(f64, f64)> = sorted
        .iter()
        .map(|&e| (e, spatial(&move |r| 1.0 / (e * e + r * r).sqrt())))
        .collect();
    let extrapolated = match regularized.as_slice() {
        [.., (e1, l1), (e2, l2)] => {
            let ratio = (e1 / e2).powi(2);
            Some(l2 + (l2 - l1) / (ratio - 1.0))
        }
        _ => None,
    };
    let e = energy(transform, &traj.snapshots()[i], traj.config().sign)?.total;
    let rhs = radius * e;
    let ratio = if lhs == 0.0 { 0.0 } else { lhs / rhs };
    Ok(MorawetzReport {
        interval,
        a_factor,
        radius,
        lhs,
        energy: e,
        rhs,
        ratio,
        regularized,
        extrapolated,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentumIdentityReport {
    pub epsilon: f64,
    pub scale: f64,
    /// `max_t |d/dt P - RHS| / scale` over interior snapshots.
    pub normalized_defect: f64,
    /// Largest magnitude among the time derivative and the three right-hand terms.
    pub magnitude: f64,
    pub times: Vec<f64>,
    pub time_derivative: Vec<f64>,
    pub right_side: Vec<f64>,
}

/// Compares `d/dt int a_r Im(u_r conj u)` (central differences) with
/// `2 int a_rr |u_r|^2 + 1/2 int (-Delta Delta a) |u|^2 + (2 mu / n) int Delta a |u|^{2n/(n-2)}`
/// for the weight `L a(|x| / L)` at length scale `L = scale`.
pub fn momentum_flux_identity_check(
    transform: &SpectralTransform,
    traj: &Trajectory,
    epsilon: f64,
    scale: f64,
) -> Result<MomentumIdentityReport> {
    if traj.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "{} snapshots, need at least 3",
            traj.len()
        )));
    }
    if !(epsilon > 0.0) {
        return Err(invalid("epsilon", "must be positive"));
    }
    if !(scale > 0.0) {
        return Err(invalid("scale", "must be positive"));
    }
    let grid = traj.grid();
    let n = grid.dimension();
    let p = critical_exponent(n);
    let mu = traj.config().sign.coefficient();
    let weight = MorawetzWeight::new(epsilon, n);
    let jets: Vec<_> = grid
        .radii()
        .iter()
        .map(|&r| {
            let j = weight.jet(r / scale);
            WeightJet {
                a: scale * j.a,
                first: j.first,
                second: j.second / scale,
                laplacian: j.laplacian / scale,
                neg_bilaplacian: j.neg_bilaplacian / scale.powi(3),
            }
        })
        .collect();

    let per_snapshot: Vec<(f64, [f64; 3])> = traj
        .snapshots()
        .par_iter()
        .map(|u| {
            let c = transform.forward(u)?;
            let du = transform.radial_derivative(&c);
            let momentum = grid.sum_weighted(
                jets.iter()
                    .zip(du.iter().zip(u.values()))
                    .map(|(jet, (d, v))| jet.first * (d * v.conj()).im),
            );
            let convexity = 2.0
                * grid.sum_weighted(jets.iter().zip(&du).map(|(jet, d)| jet.second * d.norm_sqr()));
            let bilaplacian = 0.5
                * grid.sum_weighted(
                    jets.iter()
                        .zip(u.values())
                        .map(|(jet, v)| jet.neg_bilaplacian * v.norm_sqr()),
                );
            let nonlinear = if mu == 0.0 {
                0.0
            } else {
                2.0 * mu / n as f64
                    * grid.sum_weighted(
                        jets.iter()
                            .zip(u.values())
                            .map(|(jet, v)| jet.laplacian * v.norm().powf(p)),
                    )
            };
            Ok((momentum, [convexity, bilaplacian, nonlinear]))
        })
        .collect::<Result<_>>()?;

    let t = traj.times();
    let mut times = Vec::new();
    let mut time_derivative: Vec<f64> = Vec::new();
    let mut right_side: Vec<f64> = Vec::new();
    let mut magnitude: f64 = 0.0;
    for i in 1..t.len() - 1 {
        let lhs = (per_snapshot[i + 1].0 - per_snapshot[i - 1].0) / (t[i + 1] - t[i - 1]);
        let terms = per_snapshot[i].1;
        magnitude = terms.iter().fold(magnitude.max(lhs.abs()), |m, v| m.max(v.abs()));
        times.push(t[i]);
        time_derivative.push(lhs);
        right_side.push(terms.iter().sum());
    }
    let max_defect = time_derivative
        .iter()
        .zip(&right_side)
        .map(|(l, r)| (l - r).abs())
        .fold(0.0, f64::max);
    Ok(MomentumIdentityReport {
        epsilon,
        scale,
        normalized_defect: if magnitude > 0.0 { max_defect / magnitude } else { 0.0 },
        magnitude,
        times,
        time_derivative,
        right_side,
    })
}
