use std::sync::Arc;

use num_complex::Complex64;
use radial_nls::dynamics::{
    blowup_monitor, duhamel_residual, evolve, linear_flow_series, linear_flows,
    nonlinear_phase_step, store, Endpoint, EvolutionConfig, Sign, Status, Trajectory,
};
use radial_nls::radial::{RadialField, RadialGrid};
use radial_nls::spectral::SpectralTransform;
use serde_json::Value;

fn transform(n: usize, nodes: usize, r_max: f64) -> SpectralTransform {
    SpectralTransform::new(Arc::new(RadialGrid::new(n, nodes, r_max).unwrap())).unwrap()
}

fn gaussian(tf: &SpectralTransform, amplitude: f64) -> RadialField {
    RadialField::from_real_fn(tf.grid().clone(), |r| amplitude * (-r * r).exp()).unwrap()
}

fn run(tf: &SpectralTransform, u0: &RadialField, sign: Sign, dt: f64, stride: usize, t: f64) -> Trajectory {
    let cfg = EvolutionConfig::new(tf.grid().dimension(), sign, dt).with_stride(stride);
    evolve(tf, u0, 0.0, t, &cfg, Value::Null).unwrap()
}

#[test]
fn phase_step_preserves_modulus() {
    let tf = transform(3, 64, 8.0);
    let u = RadialField::from_fn(tf.grid().clone(), |r| Complex64::new(2.0 - r / 4.0, r.sin())).unwrap();
    assert_eq!(nonlinear_phase_step(&u, Sign::Defocusing, 0.0).unwrap(), u);
    let v = nonlinear_phase_step(&u, Sign::Focusing, 0.37).unwrap();
    for (a, b) in u.values().iter().zip(v.values()) {
        assert!((a.norm() - b.norm()).abs() <= 4.0 * f64::EPSILON * a.norm());
    }
    assert!(nonlinear_phase_step(&u, Sign::Focusing, f64::NAN).is_err());
}

#[test]
fn phase_step_half_turn_in_four_dimensions() {
    let tf = transform(4, 32, 4.0);
    let u = RadialField::from_real_fn(tf.grid().clone(), |r| if r < 2.0 { 1.0 } else { 0.0 }).unwrap();
    let v = nonlinear_phase_step(&u, Sign::Defocusing, std::f64::consts::PI).unwrap();
    for (a, b) in u.values().iter().zip(v.values()) {
        assert!((b + a).norm() < 1e-15);
    }
}

#[test]
fn zero_data_stays_zero() {
    let tf = transform(3, 128, 16.0);
    let traj = run(&tf, &RadialField::zeros(tf.grid().clone()), Sign::Defocusing, 0.01, 5, 0.5);
    assert_eq!(traj.status(), Status::Completed);
    assert!(traj.snapshots().iter().all(|u| u.max_modulus() == 0.0));
    assert_eq!(duhamel_residual(&tf, &traj, 0.0, 0.5).unwrap(), 0.0);
}

#[test]
fn small_amplitude_is_free() {
    let tf = transform(3, 512, 32.0);
    let u0 = gaussian(&tf, 1e-3);
    let traj = run(&tf, &u0, Sign::Defocusing, 1e-2, 10, 1.0);
    let free = tf.free_evolve(&u0, 1.0).unwrap();
    assert!(traj.snapshots().last().unwrap().l2_distance(&free).unwrap() < 1e-5);
}

#[test]
fn strang_splitting_is_second_order() {
    let tf = transform(3, 1024, 32.0);
    let u0 = gaussian(&tf, 1.0);
    let last = |dt: f64| run(&tf, &u0, Sign::Defocusing, dt, 1000, 1.0).snapshots().last().unwrap().clone();
    let (a, b, c) = (last(4e-3), last(2e-3), last(1e-3));
    let ratio = a.l2_distance(&b).unwrap() / b.l2_distance(&c).unwrap();
    assert!((ratio - 4.0).abs() < 0.8, "ratio {ratio}");
}

#[test]
fn mass_is_conserved() {
    let tf = transform(4, 512, 32.0);
    let u0 = gaussian(&tf, 1.0);
    let traj = run(&tf, &u0, Sign::Defocusing, 2e-3, 25, 1.0);
    let m0 = u0.l2_norm();
    for u in traj.snapshots() {
        assert!((u.l2_norm() - m0).abs() < 1e-10);
    }
}

#[test]
fn free_duhamel_is_group_law() {
    let tf = transform(3, 512, 32.0);
    let traj = run(&tf, &gaussian(&tf, 1.0), Sign::Free, 1e-2, 10, 1.0);
    assert!(duhamel_residual(&tf, &traj, 0.0, 1.0).unwrap() < 1e-9);
    assert!(duhamel_residual(&tf, &traj, 0.7, 0.2).unwrap() < 1e-9);
    assert!(duhamel_residual(&tf, &traj, 0.0, 0.55).is_err());
}

#[test]
fn duhamel_residual_converges_at_second_order() {
    let tf = transform(3, 512, 32.0);
    let u0 = gaussian(&tf, 1.0);
    let res: Vec<f64> = [4e-3, 2e-3, 1e-3]
        .iter()
        .map(|&dt| duhamel_residual(&tf, &run(&tf, &u0, Sign::Defocusing, dt, 10, 1.0), 0.0, 1.0).unwrap())
        .collect();
    let order1 = (res[0] / res[1]).log2();
    let order2 = (res[1] / res[2]).log2();
    assert!(order1 >= 1.8 && order2 >= 1.8, "{res:?}");
    // backwards in time as well
    let traj = run(&tf, &u0, Sign::Defocusing, 1e-3, 10, 1.0);
    assert!(duhamel_residual(&tf, &traj, 1.0, 0.0).unwrap() < 1e-3 * u0.l2_norm());
}

#[test]
fn linear_flows_at_endpoints() {
    let tf = transform(3, 512, 32.0);
    let traj = run(&tf, &gaussian(&tf, 1.0), Sign::Defocusing, 1e-2, 10, 1.0);
    let (minus, _) = linear_flows(&tf, &traj, 0.0).unwrap();
    assert_eq!(minus, traj.snapshots()[0]);
    let (_, plus) = linear_flows(&tf, &traj, 1.0).unwrap();
    assert_eq!(&plus, traj.snapshots().last().unwrap());
    assert!(linear_flows(&tf, &traj, 0.123).is_err());
    let series = linear_flow_series(&tf, &traj, Endpoint::Plus).unwrap();
    let (_, at) = linear_flows(&tf, &traj, 0.5).unwrap();
    assert!(series[5].l2_distance(&at).unwrap() < 1e-13);
}

#[test]
fn free_linear_flows_coincide_with_solution() {
    let tf = transform(3, 512, 32.0);
    let traj = run(&tf, &gaussian(&tf, 1.0), Sign::Free, 1e-2, 10, 1.0);
    for (i, &t) in traj.times().iter().enumerate() {
        let (m, p) = linear_flows(&tf, &traj, t).unwrap();
        assert!(m.l2_distance(&traj.snapshots()[i]).unwrap() < 1e-9);
        assert!(p.l2_distance(&traj.snapshots()[i]).unwrap() < 1e-9);
    }
}

#[test]
fn quiet_blowup_monitor_without_focusing() {
    let tf = transform(3, 512, 32.0);
    for sign in [Sign::Defocusing, Sign::Free] {
        let traj = run(&tf, &gaussian(&tf, 1.0), sign, 2e-3, 10, 1.0);
        let rec = blowup_monitor(&tf, &traj).unwrap();
        assert!(!rec.flagged && !rec.glassey_indicator);
        assert_eq!(rec.gradient_history.len(), traj.len());
    }
}

#[test]
fn evolve_rejects_bad_input() {
    let tf = transform(3, 128, 16.0);
    let u0 = gaussian(&tf, 1.0);
    let cfg = EvolutionConfig::new(3, Sign::Defocusing, 0.3);
    assert!(evolve(&tf, &u0, 0.0, 1.0, &cfg, Value::Null).is_err());
    let cfg = EvolutionConfig::new(3, Sign::Defocusing, 0.1);
    assert!(evolve(&tf, &u0, 0.0, 100.0, &cfg, Value::Null).is_err());
    assert!(evolve(&tf, &u0, 1.0, 1.0, &cfg, Value::Null).is_err());
    let other = transform(3, 64, 16.0);
    assert!(evolve(&tf, &gaussian(&other, 1.0), 0.0, 1.0, &cfg, Value::Null).is_err());
}

#[test]
fn store_round_trip_is_bit_exact() {
    let tf = transform(5, 128, 16.0);
    let u0 = RadialField::from_fn(tf.grid().clone(), |r| Complex64::new((-r * r).exp(), 0.1 * (-r).exp())).unwrap();
    let traj = run(&tf, &u0, Sign::Defocusing, 1e-2, 7, 0.3);
    let dir = tempfile::tempdir().unwrap();
    store::save(&traj, dir.path()).unwrap();
    assert!(dir.path().join("snapshot_000000.bin").exists());
    let back = store::load(dir.path()).unwrap();
    assert_eq!(back, traj);
    for (a, b) in back.snapshots().iter().zip(traj.snapshots()) {
        for (x, y) in a.values().iter().zip(b.values()) {
            assert_eq!(x.re.to_bits(), y.re.to_bits());
            assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
    }
}

#[test]
fn store_rejects_truncated_snapshot() {
    let tf = transform(3, 128, 16.0);
    let traj = run(&tf, &gaussian(&tf, 1.0), Sign::Free, 0.1, 1, 0.2);
    let dir = tempfile::tempdir().unwrap();
    store::save(&traj, dir.path()).unwrap();
    std::fs::write(dir.path().join("snapshot_000001.bin"), [0u8; 10]).unwrap();
    assert!(store::load(dir.path()).is_err());
}
