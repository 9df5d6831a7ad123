//! The diagnostics report and its CSV series.

use std::fs;
use std::path::Path;

use radial_nls::concentration::{
    BubbleReport, Decomposition, ExceptionalReport, NestResult, TechnicalReport, Window,
};
use radial_nls::dynamics::{BlowupRecord, Status};
use radial_nls::functionals::{
    Energy, MassFluxReport, MomentumIdentityReport, MorawetzReport, StrichartzNorm,
};
use radial_nls::spectral::Certification;
use serde::{Deserialize, Serialize};

use crate::checks::Check;
use crate::scenario::Scenario;
use crate::CliError;

pub const FORMAT: &str = "radial-nls-report/1";

/// Top-level sections every report carries; `verify` rejects a report missing any.
pub const SECTIONS: [&str; 15] = [
    "format",
    "scenario",
    "status",
    "certification",
    "conserved",
    "duhamel",
    "blowup",
    "morawetz",
    "mass_flux",
    "hardy",
    "strichartz",
    "concentration",
    "synthetic",
    "notes",
    "checks",
];

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub format: String,
    pub scenario: Scenario,
    pub status: Status,
    /// Why the trajectory ends before `t_+`, if it does.
    pub truncated: Option<String>,
    /// Sections skipped and why.
    pub notes: Vec<String>,
    pub certification: CertificationBlock,
    pub conserved: ConservedBlock,
    pub duhamel: DuhamelBlock,
    pub blowup: BlowupRecord,
    pub morawetz: Vec<MorawetzReport>,
    pub identity: Option<MomentumIdentityReport>,
    pub mass_flux: Vec<MassFluxReport>,
    pub hardy: HardyBlock,
    pub strichartz: Vec<StrichartzNorm>,
    pub concentration: Option<ConcentrationBlock>,
    pub synthetic: SyntheticBlock,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificationBlock {
    pub transform: Certification,
    /// Largest `|u(r_max - h)| / max |u|` over snapshots.
    pub max_boundary_ratio: f64,
    pub refinement: Option<Refinement>,
}

/// The same scenario rerun at twice the step, same snapshot stride.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Refinement {
    pub coarse_dt: f64,
    pub time: f64,
    pub duhamel_coarse: f64,
    pub duhamel_fine: f64,
    pub duhamel_order: f64,
    pub identity_coarse: Option<f64>,
    pub identity_fine: Option<f64>,
    pub identity_order: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConservedBlock {
    pub times: Vec<f64>,
    pub energy: Vec<f64>,
    pub kinetic: Vec<f64>,
    pub potential: Vec<f64>,
    pub mass: Vec<f64>,
    pub initial: Energy,
    /// `max(|E_0|, K_0)`, the scale for relative energy drift.
    pub energy_scale: f64,
    pub max_energy_drift: f64,
    pub max_mass_drift: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DuhamelBlock {
    pub t0: f64,
    pub t: f64,
    pub residual: f64,
    /// `residual / ||u(t0)||_2`, zero for zero data.
    pub relative: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HardyEntry {
    pub radius: f64,
    pub initial: f64,
    /// Largest ratio over all snapshots.
    pub sup: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HardyBlock {
    pub constant: f64,
    pub entries: Vec<HardyEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WindowsBlock {
    pub sup_half_norm_ratio: f64,
    pub sup_window: Window,
    pub min_largest_fraction: f64,
    pub min_window: Window,
    /// Boundary windows where `largest * half^2 >= 1` lacks its certificate.
    pub certificate_failures: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConcentrationBlock {
    pub eta: f64,
    pub threshold: f64,
    pub total_mass: f64,
    pub decomposition: Decomposition<f64>,
    pub exceptional: ExceptionalReport,
    pub technical: Vec<TechnicalReport>,
    pub bubbles: Vec<BubbleReport>,
    pub windows: WindowsBlock,
    pub nest: Option<NestResult<f64>>,
    pub dyadic_violations: usize,
}

/// Seeded self-test of the combinatorial layer on synthetic data.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SyntheticBlock {
    pub seed: u64,
    pub families: usize,
    pub intervals: usize,
    pub window_mismatches: usize,
    pub nest_invariant_failures: usize,
    /// Largest ramp-boundary error in units of the sample step.
    pub ramp_boundary_error: f64,
}

impl DiagnosticsReport {
    pub fn to_json(&self) -> Result<String, CliError> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// `report.json` plus `series/*.csv` under `dir`.
    pub fn write(&self, dir: &Path) -> Result<(), CliError> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("report.json"), self.to_json()?)?;
        write_series(self, &dir.join("series"))
    }
}

fn table(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn s(x: f64) -> String {
    x.to_string()
}

/// CSV series for plotting, one file per table.
pub fn write_series(report: &DiagnosticsReport, dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    let c = &report.conserved;
    table(
        &dir.join("conserved.csv"),
        &[
            "t",
            "energy E = K + P",
            "kinetic K = (1/2)||grad u||_2^2",
            "potential P = mu (n-2)/(2n) ||u||_{2n/(n-2)}^{2n/(n-2)}",
            "mass ||u||_2",
        ],
        (0..c.times.len()).map(|i| vec![s(c.times[i]), s(c.energy[i]), s(c.kinetic[i]), s(c.potential[i]), s(c.mass[i])]),
    )?;
    table(
        &dir.join("gradient.csv"),
        &["t", "||grad u||_2"],
        c.times.iter().zip(&report.blowup.gradient_history).map(|(t, g)| vec![s(*t), s(*g)]),
    )?;
    table(
        &dir.join("morawetz.csv"),
        &[
            "A",
            "radius A|I|^{1/2}",
            "lhs int_I int_{|x|<=radius} |u|^{2n/(n-2)} / |x|",
            "rhs radius E",
            "ratio lhs/rhs",
        ],
        report.morawetz.iter().map(|m| vec![s(m.a_factor), s(m.radius), s(m.lhs), s(m.rhs), s(m.ratio)]),
    )?;
    table(
        &dir.join("mass_flux.csv"),
        &["R", "max |d/dt Mass(u, B(0,R))|", "bound C_chi E^{1/2} / R", "ratio"],
        report.mass_flux.iter().map(|m| vec![s(m.radius), s(m.max_rate), s(m.bound), s(m.ratio)]),
    )?;
    table(
        &dir.join("hardy.csv"),
        &["R", "Mass(u(t_-), B(0,R)) / (E^{1/2} R)", "sup_t Mass(u(t), B(0,R)) / (E^{1/2} R)", "C_H"],
        report
            .hardy
            .entries
            .iter()
            .map(|h| vec![s(h.radius), s(h.initial), s(h.sup), s(report.hardy.constant)]),
    )?;
    table(
        &dir.join("strichartz.csv"),
        &["k", "q", "r", "|| |grad|^k u ||_{L^q_t L^r_x}"],
        report.strichartz.iter().flat_map(|n| {
            n.components
                .iter()
                .map(move |(p, v)| vec![n.order.to_string(), p.q.to_string(), p.r.to_string(), s(*v)])
        }),
    )?;
    if let Some(conc) = &report.concentration {
        let d = &conc.decomposition;
        table(
            &dir.join("intervals.csv"),
            &[
                "j",
                "start",
                "end",
                "critical mass int_I int |u|^{2(n+2)/(n-2)}",
                "linear mass u_-",
                "linear mass u_+",
                "exceptional",
                "tail",
            ],
            (0..d.len()).map(|j| {
                let (a, b) = d.interval(j);
                let lin = conc.exceptional.linear_masses[j];
                vec![
                    j.to_string(),
                    s(a),
                    s(b),
                    s(d.masses()[j]),
                    s(lin[0]),
                    s(lin[1]),
                    conc.exceptional.flags[j].to_string(),
                    (d.has_tail() && j + 1 == d.len()).to_string(),
                ]
            }),
        )?;
    }
    Ok(())
}
