use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use num_complex::Complex64;
use radial_nls::dynamics::store;
use radial_nls_cli::pipeline::{analyze, run_scenario, transform};
use radial_nls_cli::Scenario;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_radial-nls"))
}

fn shipped(name: &str) -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "scenarios", name].iter().collect()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn small(dir: &Path) -> PathBuf {
    let path = dir.join("small.toml");
    fs::write(
        &path,
        r#"
id = "small"
dimension = 3
sign = "defocusing"
[grid]
nodes = 256
r_max = 16.0
[time]
t_plus = 0.2
dt = 2e-3
stride = 2
[initial]
family = "gaussian"
amplitude = 1.0
width = 1.0
"#,
    )
    .unwrap();
    path
}

#[test]
fn invalid_scenario_lists_every_violation() {
    let out = run(&[
        "verify",
        "--config",
        shipped("zero.toml").to_str().unwrap(),
        "--override",
        "time.dt=-1",
        "--override",
        "grid.nodes=2",
        "--override",
        "tolerances.mass_drift=0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    for key in ["dt", "nodes", "mass_drift"] {
        assert!(err.contains(key), "{key} missing from {err}");
    }
}

#[test]
fn unknown_keys_are_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    let text = fs::read_to_string(shipped("zero.toml")).unwrap() + "\n[extra]\nx = 1\n";
    fs::write(&path, text).unwrap();
    assert_eq!(run(&["verify", "--config", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn zero_scenario_verifies() {
    let out = run(&["verify", "--config", shipped("zero.toml").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.lines().all(|l| l.starts_with("PASS")), "{text}");
    assert!(text.contains("conservation.mass_drift"));
}

#[test]
fn coarse_scenario_fails_its_order_check() {
    let out = run(&["verify", "--config", shipped("coarse.toml").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("FAIL refinement.duhamel_order"), "{text}");
    assert!(text.contains("PASS conservation.energy_drift"), "{text}");
}

#[test]
fn focusing_simulation_exits_with_alarm() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "simulate",
        "--config",
        shipped("focusing.toml").to_str().unwrap(),
        "--override",
        "time.stride=20",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    let traj = store::load(dir.path()).unwrap();
    assert!(traj.t_last() < traj.requested_t_plus());
}

#[test]
fn simulate_then_analyze_matches_verify() {
    let dir = tempfile::tempdir().unwrap();
    let config = small(dir.path());
    let config = config.to_str().unwrap();
    let traj = dir.path().join("traj");
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert_eq!(run(&["simulate", "--config", config, "--out", traj.to_str().unwrap()]).status.code(), Some(0));
    let out = run(&[
        "analyze",
        "--config",
        config,
        "--trajectory",
        traj.to_str().unwrap(),
        "--out",
        a.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["verify", "--config", config, "--out", b.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let ra = fs::read(a.join("report.json")).unwrap();
    assert_eq!(ra, fs::read(b.join("report.json")).unwrap());
    for table in ["conserved", "gradient", "hardy", "intervals"] {
        assert!(a.join("series").join(format!("{table}.csv")).exists(), "{table}");
    }

    let plots = dir.path().join("plots");
    let out = run(&[
        "export-plots",
        "--report",
        a.join("report.json").to_str().unwrap(),
        "--out",
        plots.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        fs::read(plots.join("conserved.csv")).unwrap(),
        fs::read(a.join("series/conserved.csv")).unwrap()
    );

    let out = run(&["verify", "--report", a.join("report.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verify_rejects_tampered_and_incomplete_reports() {
    let dir = tempfile::tempdir().unwrap();
    let config = small(dir.path());
    let out_dir = dir.path().join("r");
    run(&["verify", "--config", config.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    let mut report: Value = serde_json::from_slice(&fs::read(out_dir.join("report.json")).unwrap()).unwrap();

    report["checks"][0]["measured"] = Value::from(1.0);
    let tampered = dir.path().join("tampered.json");
    fs::write(&tampered, report.to_string()).unwrap();
    let out = run(&["verify", "--report", tampered.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL conservation.mass_drift"));

    report.as_object_mut().unwrap().remove("hardy");
    fs::write(&tampered, report.to_string()).unwrap();
    let out = run(&["verify", "--report", tampered.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("hardy"));
}

#[test]
fn corrupted_snapshot_is_a_numerics_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = small(dir.path());
    let traj = dir.path().join("traj");
    run(&["simulate", "--config", config.to_str().unwrap(), "--out", traj.to_str().unwrap()]);
    let victim = traj.join(store::snapshot_file_name(3));
    let bytes = fs::read(&victim).unwrap();
    fs::write(&victim, &bytes[..bytes.len() - 5]).unwrap();
    let out = run(&[
        "analyze",
        "--config",
        config.to_str().unwrap(),
        "--trajectory",
        traj.to_str().unwrap(),
        "--out",
        dir.path().join("r").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn sweep_orders_results_by_id() {
    let dir = tempfile::tempdir().unwrap();
    small(dir.path());
    fs::copy(shipped("zero.toml"), dir.path().join("zero.toml")).unwrap();
    let sweep = dir.path().join("sweep.toml");
    fs::write(&sweep, "scenarios = [\"zero.toml\", \"small.toml\"]\n").unwrap();
    let out_dir = dir.path().join("out");
    let out = run(&["sweep", "--config", sweep.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let rows: Vec<Value> = serde_json::from_slice(&fs::read(out_dir.join("sweep.json")).unwrap()).unwrap();
    let ids: Vec<&str> = rows.iter().map(|r| r["id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["small", "zero"]);
    assert!(out_dir.join("zero/report.json").exists());
}

#[test]
fn injected_mass_fault_is_measured() {
    let dir = tempfile::tempdir().unwrap();
    let s = Scenario::load(&small(dir.path()), &[], None).unwrap();
    let clean = run_scenario(&s).unwrap();
    let delta = 1e-6;
    let u = &clean.trajectory.snapshots()[10];
    let faulty = clean.trajectory.with_snapshot(10, u.scale(Complex64::from(1.0 + delta))).unwrap();
    let report = analyze(&s, &transform(&s).unwrap(), &faulty).unwrap();
    let check = report.checks.iter().find(|c| c.id == "conservation.mass_drift").unwrap();
    assert!(!check.passed);
    assert!((check.measured - delta).abs() < 1e-9, "{}", check.measured);
}

#[test]
fn seed_override_changes_only_the_synthetic_block() {
    let dir = tempfile::tempdir().unwrap();
    let path = small(dir.path());
    let a = run_scenario(&Scenario::load(&path, &[], Some(1)).unwrap()).unwrap().report;
    let b = run_scenario(&Scenario::load(&path, &[], Some(2)).unwrap()).unwrap().report;
    assert_eq!(a.synthetic.seed, 1);
    assert_eq!(b.synthetic.seed, 2);
    assert_eq!(a.conserved.energy, b.conserved.energy);
}
