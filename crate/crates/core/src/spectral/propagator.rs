use serde::{Deserialize, Serialize};

use super::SpectralTransform;
use crate::error::{invalid, Error, Result};
use crate::radial::RadialField;

/// Measured `L^1 -> L^inf` decay of the free evolution of one profile.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DispersiveFit {
    /// Least-squares slope of `log ||e^{it Delta} u||_inf` against `log t`.
    pub slope: f64,
    /// `max_t ||e^{it Delta} u||_inf t^{n/2} / ||u||_{L^1}`.
    pub constant: f64,
    pub times: Vec<f64>,
    pub sup_norms: Vec<f64>,
}

pub fn dispersive_decay_fit(
    transform: &SpectralTransform,
    u: &RadialField,
    times: &[f64],
) -> Result<DispersiveFit> {
    if times.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "{} sample times, need at least 3",
            times.len()
        )));
    }
    if times[0] <= 0.0 || times.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("times", "must be positive and strictly increasing"));
    }
    let l1 = u.modulus_power_integral(1.0);
    if !(l1.is_finite() && l1 > 0.0) {
        return Err(invalid("u", "L^1 norm must be finite and positive"));
    }
    let half_n = transform.grid().dimension() as f64 / 2.0;
    let coeffs = transform.forward(u)?;
    let mut sup_norms = Vec::with_capacity(times.len());
    for &t in times {
        transform.check_time(t)?;
        let evolved = transform.backward(&transform.propagate_coefficients(&coeffs, t));
        sup_norms.push(evolved.max_modulus());
    }
    let xs: Vec<f64> = times.iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = sup_norms.iter().map(|s| s.ln()).collect();
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let constant = times
        .iter()
        .zip(&sup_norms)
        .map(|(t, s)| s * t.powf(half_n) / l1)
        .fold(0.0, f64::max);
    Ok(DispersiveFit {
        slope: sxy / sxx,
        constant,
        times: times.to_vec(),
        sup_norms,
    })
}
