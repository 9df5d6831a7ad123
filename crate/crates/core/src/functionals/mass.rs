use serde::{Deserialize, Serialize};

use super::{energy, BumpFunction};
use crate::dynamics::Trajectory;
use crate::error::{invalid, Error, Result};
use crate::radial::RadialField;
use crate::spectral::SpectralTransform;

/// `(int chi^2(|x|/R) |u|^2 dx)^{1/2}` with the default quintic bump.
pub fn local_mass(u: &RadialField, radius: f64) -> Result<f64> {
    if !(radius > 0.0) {
        return Err(invalid("radius", format!("{radius} is not positive")));
    }
    let chi = BumpFunction::<f64>::default();
    Ok(u
        .grid()
        .sum_weighted(u.grid().radii().iter().zip(u.values()).map(|(&r, v)| {
            let c = chi.value(r / radius);
            c * c * v.norm_sqr()
        }))
        .sqrt())
}

/// `C_chi` in `|d/dt Mass(u(t), B(0,R))| <= C_chi E^{1/2} / R`.
///
/// `d/dt Mass^2 = (4/R) int chi chi'(|x|/R) Im(u_r conj u)`, so Cauchy-Schwarz
/// gives `|d/dt Mass| <= (2/R) sup|chi'| ||grad u||_2 <= (2 sqrt 2 / R) sup|chi'| E^{1/2}`.
pub fn mass_flux_constant() -> f64 {
    2.0 * std::f64::consts::SQRT_2 * BumpFunction::<f64>::default().sup_derivative()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MassFluxReport {
    pub radius: f64,
    /// `max_t |d/dt Mass|` by central differences.
    pub max_rate: f64,
    /// `C_chi E(t_-)^{1/2} / R`.
    pub bound: f64,
    pub ratio: f64,
    pub constant: f64,
}

pub fn mass_flux_check(
    transform: &SpectralTransform,
    traj: &Trajectory,
    radius: f64,
) -> Result<MassFluxReport> {
    if traj.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "{} snapshots, need at least 3",
            traj.len()
        )));
    }
    let masses = traj
        .snapshots()
        .iter()
        .map(|u| local_mass(u, radius))
        .collect::<Result<Vec<_>>>()?;
    let t = traj.times();
    let max_rate = (1..t.len() - 1)
        .map(|i| ((masses[i + 1] - masses[i - 1]) / (t[i + 1] - t[i - 1])).abs())
        .fold(0.0, f64::max);
    let e = energy(transform, &traj.snapshots()[0], traj.config().sign)?.total;
    if e < 0.0 || (e == 0.0 && max_rate > 0.0) {
        return Err(invalid("energy", format!("{e} is not positive")));
    }
    let constant = mass_flux_constant();
    let bound = constant * e.sqrt() / radius;
    Ok(MassFluxReport {
        radius,
        max_rate,
        bound,
        ratio: if max_rate == 0.0 { 0.0 } else { max_rate / bound },
        constant,
    })
}

/// `C_H` in `Mass(u, B(0,R)) <= C_H E^{1/2} R` for defocusing data.
///
/// `chi` vanishes outside `B(0,R)`, so Hölder and the sharp Sobolev inequality
/// give `Mass <= |B_1|^{1/n} R S_n ||grad u||_2` with the Aubin-Talenti constant
/// `S_n = (pi n (n-2))^{-1/2} (Gamma(n) / Gamma(n/2))^{1/n}`, and `||grad u||_2^2 <= 2E`.
pub fn hardy_constant(dimension: usize) -> f64 {
    let n = dimension as f64;
    let ball = crate::radial::sphere_area(dimension) / n;
    let sobolev = (std::f64::consts::PI * n * (n - 2.0)).powf(-0.5)
        * (libm::tgamma(n) / libm::tgamma(n / 2.0)).powf(1.0 / n);
    ball.powf(1.0 / n) * sobolev * std::f64::consts::SQRT_2
}

/// `Mass(u, B(0,R)) / (E^{1/2} R)`; zero for the zero field.
pub fn hardy_ratio(
    transform: &SpectralTransform,
    u: &RadialField,
    radius: f64,
    sign: crate::dynamics::Sign,
) -> Result<f64> {
    let mass = local_mass(u, radius)?;
    if mass == 0.0 {
        return Ok(0.0);
    }
    let e = energy(transform, u, sign)?.total;
    if !(e > 0.0) {
        return Err(invalid("energy", format!("{e} is not positive")));
    }
    Ok(mass / (e.sqrt() * radius))
}
