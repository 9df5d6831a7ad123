use num_complex::Complex64;

use super::{EvolutionConfig, Provenance, Sign, Status, Trajectory};
use crate::error::{invalid, Error, Result};
use crate::functionals::energy;
use crate::radial::RadialField;
use crate::spectral::SpectralTransform;

/// Exact flow of `i u_t = mu |u|^{4/(n-2)} u` over time `tau`:
/// `u -> exp(-i mu tau |u|^{4/(n-2)}) u`.
pub fn nonlinear_phase_step(u: &RadialField, sign: Sign, tau: f64) -> Result<RadialField> {
    if !tau.is_finite() {
        return Err(invalid("tau", "must be finite"));
    }
    let mut values = u.values().to_vec();
    let n = u.grid().dimension() as f64;
    apply_phase(&mut values, sign.coefficient() * tau, 4.0 / (n - 2.0));
    RadialField::new(u.grid().clone(), values)
}

fn apply_phase(values: &mut [Complex64], mu_tau: f64, exponent: f64) {
    if mu_tau == 0.0 {
        return;
    }
    let half = exponent / 2.0;
    for v in values.iter_mut() {
        let m = v.norm_sqr();
        if m > 0.0 {
            *v *= Complex64::from_polar(1.0, -mu_tau * m.powf(half));
        }
    }
}

/// Strang splitting `N(dt/2) L(dt) N(dt/2)` from `t_minus` to `t_plus`.
///
/// The step count is `(t_plus - t_minus) / dt`, which must be an integer up to
/// a relative `1e-9`. Energy and `||grad u||_2` are monitored at every stored
/// snapshot; an alarm or blowup truncates the trajectory at that snapshot and
/// is recorded in its [`Status`].
pub fn evolve(
    transform: &SpectralTransform,
    u0: &RadialField,
    t_minus: f64,
    t_plus: f64,
    config: &EvolutionConfig,
    initial_data: serde_json::Value,
) -> Result<Trajectory> {
    config.validate()?;
    if **u0.grid() != **transform.grid() {
        return Err(Error::GridMismatch);
    }
    let span = t_plus - t_minus;
    if !(span > 0.0) {
        return Err(Error::EmptyInterval {
            start: t_minus,
            end: t_plus,
        });
    }
    transform.check_time(span)?;
    let steps = (span / config.dt).round();
    if steps < 1.0 || (steps * config.dt - span).abs() > 1e-9 * span {
        return Err(invalid(
            "dt",
            format!("{} does not divide the span {span}", config.dt),
        ));
    }
    let steps = steps as usize;
    let sign = config.sign;
    let exponent = config.phase_exponent();
    let half_tau = sign.coefficient() * config.dt / 2.0;

    let e0 = energy(transform, u0, sign)?;
    let g0 = (2.0 * e0.kinetic).sqrt();
    let scale = e0.total.abs().max(e0.kinetic);

    let grid = transform.grid().clone();
    let mut times = vec![t_minus];
    let mut snapshots = vec![u0.clone()];
    let mut status = Status::Completed;
    let mut values = u0.values().to_vec();
    for step in 1..=steps {
        apply_phase(&mut values, half_tau, exponent);
        let field = RadialField::from_parts(grid.clone(), values);
        let c = transform.forward(&field)?;
        values = transform
            .backward(&transform.propagate_coefficients(&c, config.dt))
            .into_values();
        apply_phase(&mut values, half_tau, exponent);

        if step % config.snapshot_stride != 0 && step != steps {
            continue;
        }
        let t = if step == steps {
            t_plus
        } else {
            t_minus + step as f64 * config.dt
        };
        let field = RadialField::from_parts(grid.clone(), values.clone());
        let e = energy(transform, &field, sign)?;
        times.push(t);
        snapshots.push(field);

        let growth = (2.0 * e.kinetic).sqrt() / g0;
        if sign != Sign::Free && g0 > 0.0 && !(growth <= config.blowup_factor) {
            status = Status::Blowup { time: t, growth };
            break;
        }
        let drift = if scale > 0.0 {
            (e.total - e0.total).abs() / scale
        } else {
            e.total.abs()
        };
        if !(drift <= config.energy_drift_alarm) {
            status = Status::EnergyAlarm { time: t, drift };
            break;
        }
    }
    let provenance = Provenance {
        grid: grid.spec(),
        initial_data,
    };
    Trajectory::from_parts(*config, provenance, times, snapshots, status, t_plus)
}
