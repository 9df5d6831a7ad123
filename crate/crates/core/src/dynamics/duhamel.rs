use num_complex::Complex64;
use rayon::prelude::*;

use super::trajectory::trapezoid_weights;
use super::Trajectory;
use crate::error::Result;
use crate::radial::RadialField;
use crate::spectral::SpectralTransform;

/// `F(u) = mu |u|^{4/(n-2)} u` at every node.
pub fn nonlinearity(u: &RadialField, mu: f64) -> RadialField {
    let n = u.grid().dimension() as f64;
    let half = 2.0 / (n - 2.0);
    let values = u
        .values()
        .iter()
        .map(|v| *v * (mu * v.norm_sqr().powf(half)))
        .collect();
    RadialField::from_parts(u.grid().clone(), values)
}

/// `||u(t) - e^{i(t-t0)Delta} u(t0) + i int_{t0}^t e^{i(t-s)Delta} F(u(s)) ds||_2`
/// with the time integral by the trapezoid rule over stored snapshots.
pub fn duhamel_residual(
    transform: &SpectralTransform,
    traj: &Trajectory,
    t0: f64,
    t: f64,
) -> Result<f64> {
    let i0 = traj.index_of(t0)?;
    let i1 = traj.index_of(t)?;
    if i0 == i1 {
        return Ok(0.0);
    }
    let (t0, t) = (traj.times()[i0], traj.times()[i1]);
    transform.check_time(t - t0)?;
    let mu = traj.config().sign.coefficient();
    let (lo, hi) = (i0.min(i1), i0.max(i1));
    let orientation = if i1 > i0 { 1.0 } else { -1.0 };

    let mut acc: Vec<Complex64> = {
        let ct = transform.forward(&traj.snapshots()[i1])?;
        let c0 = transform.propagate_coefficients(&transform.forward(&traj.snapshots()[i0])?, t - t0);
        ct.iter().zip(&c0).map(|(a, b)| a - b).collect()
    };
    if mu != 0.0 {
        let times = &traj.times()[lo..=hi];
        let weights = trapezoid_weights(times);
        let forced: Vec<Vec<Complex64>> = (lo..=hi)
            .into_par_iter()
            .map(|j| {
                let f = transform.forward(&nonlinearity(&traj.snapshots()[j], mu))?;
                Ok(transform.propagate_coefficients(&f, t - traj.times()[j]))
            })
            .collect::<Result<_>>()?;
        for (w, f) in weights.iter().zip(&forced) {
            let factor = Complex64::new(0.0, orientation * w);
            for (a, b) in acc.iter_mut().zip(f) {
                *a += factor * b;
            }
        }
    }
    Ok(acc.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt())
}
