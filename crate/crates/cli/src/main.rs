use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Deserialize;

use radial_nls::dynamics::{store, Status};
use radial_nls_cli::pipeline::{analyze, run_scenario, simulate, transform};
use radial_nls_cli::report::write_series;
use radial_nls_cli::{exit, verify_report, CliError, DiagnosticsReport, Scenario};

#[derive(Parser)]
#[command(name = "radial-nls", version, about = "Radial energy-critical NLS laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ScenarioArgs {
    /// Scenario TOML file.
    #[arg(long)]
    config: PathBuf,
    /// `key.path=value` override, applied before validation.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Replaces the scenario seed.
    #[arg(long)]
    seed: Option<u64>,
}

impl ScenarioArgs {
    fn load(&self) -> Result<Scenario, CliError> {
        Scenario::load(&self.config, &self.overrides, self.seed)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evolve the initial data and store the trajectory.
    Simulate {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run every diagnostic on a stored trajectory.
    Analyze {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Trajectory directory written by `simulate`.
        #[arg(long)]
        trajectory: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print one line per check; exit 1 if any fails.
    Verify {
        /// Scenario TOML file.
        #[arg(long, required_unless_present = "report")]
        config: Option<PathBuf>,
        #[arg(long = "override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// Verify an existing report instead of running a scenario.
        #[arg(long, conflicts_with = "config")]
        report: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a list of scenarios in parallel.
    Sweep {
        /// TOML file with `scenarios = ["a.toml", ...]`.
        #[arg(long)]
        config: PathBuf,
        #[arg(long = "override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the CSV series of a report.
    ExportPlots {
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepFile {
    scenarios: Vec<PathBuf>,
}

fn alarm_code(status: Status) -> i32 {
    if status == Status::Completed {
        exit::PASS
    } else {
        exit::ALARM
    }
}

fn print_checks(report: &DiagnosticsReport) -> i32 {
    for c in &report.checks {
        println!("{}", c.line());
    }
    if let Some(t) = &report.truncated {
        println!("NOTE truncated: {t}");
    }
    if report.all_passed() {
        exit::PASS
    } else {
        exit::FAILURES
    }
}

fn sweep(config: &Path, overrides: &[String], seed: Option<u64>, out: &Path) -> Result<i32, CliError> {
    let text = fs::read_to_string(config)?;
    let file: SweepFile = toml::from_str(&text).map_err(|e| CliError::Config(vec![e.to_string()]))?;
    let base = config.parent().unwrap_or(Path::new("."));
    let scenarios = file
        .scenarios
        .iter()
        .map(|p| Scenario::load(&base.join(p), overrides, seed))
        .collect::<Result<Vec<_>, _>>()?;
    let mut ids: Vec<&str> = scenarios.iter().map(|s| s.id.as_str()).collect();
    ids.sort_unstable();
    if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
        return Err(CliError::Config(vec![format!("duplicate scenario id {:?}", w[0])]));
    }
    let mut rows = scenarios
        .par_iter()
        .map(|s| {
            let run = run_scenario(s)?;
            run.report.write(&out.join(&s.id))?;
            let failed: Vec<String> = run.report.checks.iter().filter(|c| !c.passed).map(|c| c.id.clone()).collect();
            Ok(serde_json::json!({
                "id": s.id,
                "status": run.report.status,
                "passed": failed.is_empty(),
                "failed_checks": failed,
            }))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    rows.sort_by(|a, b| a["id"].as_str().cmp(&b["id"].as_str()));
    let all = rows.iter().all(|r| r["passed"] == true);
    for r in &rows {
        println!("{} {}", if r["passed"] == true { "PASS" } else { "FAIL" }, r["id"].as_str().unwrap_or(""));
    }
    fs::write(out.join("sweep.json"), serde_json::to_string_pretty(&rows)? + "\n")?;
    Ok(if all { exit::PASS } else { exit::FAILURES })
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Simulate { scenario, out } => {
            let s = scenario.load()?;
            let tf = transform(&s)?;
            let traj = simulate(&s, &tf)?;
            store::save(&traj, &out)?;
            if let Status::EnergyAlarm { time, drift } | Status::Blowup { time, growth: drift } = traj.status() {
                eprintln!("stopped at t = {time}: {:?} ({drift:e})", traj.status());
            }
            Ok(alarm_code(traj.status()))
        }
        Command::Analyze {
            scenario,
            trajectory,
            out,
        } => {
            let s = scenario.load()?;
            let tf = transform(&s)?;
            let traj = store::load(&trajectory)?;
            let report = analyze(&s, &tf, &traj)?;
            report.write(&out)?;
            Ok(exit::PASS)
        }
        Command::Verify {
            config,
            overrides,
            seed,
            report,
            out,
        } => {
            if let Some(path) = report {
                let value: serde_json::Value = serde_json::from_str(&fs::read_to_string(path)?)?;
                let checks = verify_report(&value)?;
                for c in &checks {
                    println!("{}", c.line());
                }
                return Ok(if checks.iter().all(|c| c.passed) { exit::PASS } else { exit::FAILURES });
            }
            let Some(config) = config else {
                return Err(CliError::Config(vec!["verify needs --config or --report".into()]));
            };
            let run = run_scenario(&Scenario::load(&config, &overrides, seed)?)?;
            if let Some(out) = out {
                run.report.write(&out)?;
            }
            Ok(print_checks(&run.report))
        }
        Command::Sweep {
            config,
            overrides,
            seed,
            out,
        } => sweep(&config, &overrides, seed, &out),
        Command::ExportPlots { report, out } => {
            let report: DiagnosticsReport = serde_json::from_str(&fs::read_to_string(report)?)?;
            write_series(&report, &out)?;
            Ok(exit::PASS)
        }
    }
}

fn main() -> ExitCode {
    let code = match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
