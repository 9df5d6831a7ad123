//! Scenario → trajectory → diagnostics report.

use std::sync::Arc;

use rayon::prelude::*;
use radial_nls::concentration::{
    bourgain_nest, cauchy_schwarz_certificate, classify_exceptional, critical_density,
    find_bubble, greedy_subdivide, is_dyadic_chain, min_largest_fraction, sup_half_norm_ratio,
    technical_check, Window,
};
use radial_nls::dynamics::{blowup_monitor, duhamel_residual, evolve, Sign, Status, Trajectory};
use radial_nls::functionals::{
    energy, hardy_constant, hardy_ratio, mass_flux_check, momentum_flux_identity_check,
    morawetz_check, strichartz_norm, AdmissiblePair,
};
use radial_nls::radial::RadialGrid;
use radial_nls::spectral::SpectralTransform;

use crate::checks::Check;
use crate::initial::initial_field;
use crate::report::*;
use crate::scenario::Scenario;
use crate::synthetic::self_test;
use crate::CliError;

/// A finished scenario: the trajectory and its report.
pub struct Run {
    pub transform: SpectralTransform,
    pub trajectory: Trajectory,
    pub report: DiagnosticsReport,
}

pub fn transform(s: &Scenario) -> Result<SpectralTransform, CliError> {
    Ok(SpectralTransform::new(Arc::new(RadialGrid::from_spec(s.grid_spec())?))?)
}

/// Evolves the scenario's initial data at step `dt`.
pub fn simulate_with_dt(s: &Scenario, tf: &SpectralTransform, dt: f64) -> Result<Trajectory, CliError> {
    let u0 = initial_field(&s.initial, tf.grid())?;
    let cfg = s.evolution_config(dt);
    Ok(evolve(tf, &u0, s.time.t_minus, s.time.t_plus, &cfg, serde_json::to_value(&s.initial)?)?)
}

pub fn simulate(s: &Scenario, tf: &SpectralTransform) -> Result<Trajectory, CliError> {
    simulate_with_dt(s, tf, s.time.dt)
}

pub fn run_scenario(s: &Scenario) -> Result<Run, CliError> {
    let tf = transform(s)?;
    let trajectory = simulate(s, &tf)?;
    let report = analyze(s, &tf, &trajectory)?;
    Ok(Run {
        transform: tf,
        trajectory,
        report,
    })
}

fn truncation(status: Status) -> Option<String> {
    match status {
        Status::Completed => None,
        Status::EnergyAlarm { time, drift } => Some(format!("energy drift {drift:e} at t = {time}")),
        Status::Blowup { time, growth } => Some(format!("gradient grew by {growth} at t = {time}")),
    }
}

fn conserved(tf: &SpectralTransform, traj: &Trajectory) -> Result<ConservedBlock, CliError> {
    let sign = traj.config().sign;
    let energies = traj
        .snapshots()
        .par_iter()
        .map(|u| energy(tf, u, sign))
        .collect::<Result<Vec<_>, _>>()?;
    let mass: Vec<f64> = traj.snapshots().iter().map(|u| u.l2_norm()).collect();
    let initial = energies[0];
    let energy_scale = initial.total.abs().max(initial.kinetic);
    let max_energy_drift = if energy_scale > 0.0 {
        energies.iter().map(|e| (e.total - initial.total).abs()).fold(0.0, f64::max) / energy_scale
    } else {
        0.0
    };
    let max_mass_drift = if mass[0] > 0.0 {
        mass.iter().map(|m| (m - mass[0]).abs()).fold(0.0, f64::max) / mass[0]
    } else {
        0.0
    };
    Ok(ConservedBlock {
        times: traj.times().to_vec(),
        energy: energies.iter().map(|e| e.total).collect(),
        kinetic: energies.iter().map(|e| e.kinetic).collect(),
        potential: energies.iter().map(|e| e.potential).collect(),
        mass,
        initial,
        energy_scale,
        max_energy_drift,
        max_mass_drift,
    })
}

fn identity_defect(s: &Scenario, tf: &SpectralTransform, traj: &Trajectory) -> Result<f64, CliError> {
    Ok(momentum_flux_identity_check(tf, traj, s.analysis.identity_epsilon, s.analysis.identity_scale)?
        .normalized_defect)
}

fn refinement(
    s: &Scenario,
    tf: &SpectralTransform,
    fine: &Trajectory,
    notes: &mut Vec<String>,
) -> Option<Refinement> {
    let coarse_dt = 2.0 * s.time.dt;
    let coarse = match simulate_with_dt(s, tf, coarse_dt) {
        Ok(t) => t,
        Err(e) => {
            notes.push(format!("refinement: coarse run failed: {e}"));
            return None;
        }
    };
    let time = fine.t_last().min(coarse.t_last());
    let residuals = [&coarse, fine].map(|t| duhamel_residual(tf, t, t.t_minus(), time));
    let (duhamel_coarse, duhamel_fine) = match residuals {
        [Ok(c), Ok(f)] => (c, f),
        [Err(e), _] | [_, Err(e)] => {
            notes.push(format!("refinement: {e}"));
            return None;
        }
    };
    let (identity_coarse, identity_fine) = if s.sign == Sign::Free {
        (None, None)
    } else {
        match (identity_defect(s, tf, &coarse), identity_defect(s, tf, fine)) {
            (Ok(c), Ok(f)) => (Some(c), Some(f)),
            (Err(e), _) | (_, Err(e)) => {
                notes.push(format!("refinement: identity defect: {e}"));
                (None, None)
            }
        }
    };
    Some(Refinement {
        coarse_dt,
        time,
        duhamel_coarse,
        duhamel_fine,
        duhamel_order: (duhamel_coarse / duhamel_fine).log2(),
        identity_coarse,
        identity_fine,
        identity_order: identity_coarse.zip(identity_fine).map(|(c, f)| (c / f).log2()),
    })
}

fn concentration(
    s: &Scenario,
    tf: &SpectralTransform,
    traj: &Trajectory,
    notes: &mut Vec<String>,
) -> Result<Option<ConcentrationBlock>, CliError> {
    let cfg = &s.analysis.concentration;
    let density = critical_density(traj)?;
    let t = traj.times();
    let total_mass: f64 = (0..t.len() - 1)
        .map(|i| (density[i] + density[i + 1]) / 2.0 * (t[i + 1] - t[i]))
        .sum();
    let mut eta = cfg.resolve_eta(total_mass);
    if eta == 0.0 {
        notes.push("concentration: zero critical mass, eta set to 1/2".into());
        eta = 0.5;
    }
    cfg.validate(eta).map_err(|e| CliError::Config(vec![format!("analysis.concentration: {e}")]))?;
    let decomposition = match greedy_subdivide(traj, eta) {
        Ok(d) => d,
        Err(e @ radial_nls::Error::ResolutionTooCoarse { .. }) => {
            notes.push(format!("concentration: {e}"));
            return Ok(None);
        }
        Err(e) => return Err(e.into()),
    };
    let threshold = cfg.threshold(eta);
    let exceptional = classify_exceptional(tf, &decomposition, traj, threshold)?;
    let decomposition = decomposition.with_exceptional(exceptional.flags.clone())?;
    let regular = decomposition.regular_len();
    let technical = (0..regular)
        .into_par_iter()
        .map(|j| technical_check(tf, traj, decomposition.interval(j), eta))
        .collect::<Result<Vec<_>, _>>()?;
    let bubbles = (0..regular)
        .into_par_iter()
        .map(|j| find_bubble(tf, traj, &decomposition, j, cfg.bubble_fraction))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();
    let (sup_half, sup_window) = sup_half_norm_ratio(&decomposition);
    let (min_fraction, min_window) = min_largest_fraction(&decomposition);
    let mut certificate_failures = 0;
    for first in 0..decomposition.len() {
        for last in first..decomposition.len() {
            certificate_failures += usize::from(!cauchy_schwarz_certificate(&decomposition, Window { first, last }));
        }
    }
    let nest = match bourgain_nest(&decomposition, &cfg.nest) {
        Ok(r) => Some(r),
        Err(e) => {
            notes.push(format!("concentration: nest: {e}"));
            None
        }
    };
    let dyadic_violations = nest
        .as_ref()
        .map_or(0, |r| usize::from(!is_dyadic_chain(&decomposition, &r.chain)));
    Ok(Some(ConcentrationBlock {
        eta,
        threshold,
        total_mass,
        decomposition,
        exceptional,
        technical,
        bubbles,
        windows: WindowsBlock {
            sup_half_norm_ratio: sup_half,
            sup_window,
            min_largest_fraction: min_fraction,
            min_window,
            certificate_failures,
        },
        nest,
        dyadic_violations,
    }))
}

/// Every diagnostic on a stored trajectory. Deterministic: parallel sections
/// collect in index order and no wall-clock data is recorded.
pub fn analyze(s: &Scenario, tf: &SpectralTransform, traj: &Trajectory) -> Result<DiagnosticsReport, CliError> {
    if traj.grid().spec() != s.grid_spec() {
        return Err(CliError::Config(vec!["trajectory grid differs from the scenario grid".into()]));
    }
    let mut notes = Vec::new();
    let span = (traj.t_minus(), traj.t_last());
    let sign = s.sign;
    let conserved = conserved(tf, traj)?;

    let max_boundary_ratio = traj.snapshots().iter().map(|u| u.boundary_ratio()).fold(0.0, f64::max);
    let refinement = if s.analysis.refinement {
        refinement(s, tf, traj, &mut notes)
    } else {
        None
    };

    let residual = duhamel_residual(tf, traj, span.0, span.1)?;
    let norm0 = traj.snapshots()[0].l2_norm();
    let duhamel = DuhamelBlock {
        t0: span.0,
        t: span.1,
        residual,
        relative: if norm0 > 0.0 { residual / norm0 } else { 0.0 },
    };
    let blowup = blowup_monitor(tf, traj)?;

    let mut morawetz = Vec::new();
    if sign == Sign::Defocusing {
        for &a in &s.analysis.morawetz_a {
            match morawetz_check(tf, traj, span, a, &s.analysis.morawetz_eps) {
                Ok(r) => morawetz.push(r),
                Err(e) => notes.push(format!("morawetz A={a}: {e}")),
            }
        }
    } else {
        notes.push("morawetz: bound applies to defocusing data only".into());
    }
    let identity = match momentum_flux_identity_check(tf, traj, s.analysis.identity_epsilon, s.analysis.identity_scale) {
        Ok(r) => Some(r),
        Err(e) => {
            notes.push(format!("identity: {e}"));
            None
        }
    };
    let mut mass_flux = Vec::new();
    for &r in &s.analysis.flux_radii {
        match mass_flux_check(tf, traj, r) {
            Ok(m) => mass_flux.push(m),
            Err(e) => notes.push(format!("mass flux R={r}: {e}")),
        }
    }
    let mut hardy = HardyBlock {
        constant: hardy_constant(s.dimension),
        entries: Vec::new(),
    };
    if sign != Sign::Focusing {
        for &radius in &s.analysis.hardy_radii {
            let ratios = traj
                .snapshots()
                .par_iter()
                .map(|u| hardy_ratio(tf, u, radius, sign))
                .collect::<Result<Vec<_>, _>>();
            match ratios {
                Ok(r) => hardy.entries.push(HardyEntry {
                    radius,
                    initial: r[0],
                    sup: r.iter().copied().fold(0.0, f64::max),
                }),
                Err(e) => notes.push(format!("hardy R={radius}: {e}")),
            }
        }
    } else {
        notes.push("hardy: bound applies to non-focusing data only".into());
    }
    let pairs: Vec<AdmissiblePair<f64>> = s.pairs()?.iter().map(|p| p.to_f64()).collect();
    let strichartz = [0, 1]
        .into_iter()
        .map(|k| strichartz_norm(tf, traj, span, k, &pairs))
        .collect::<Result<Vec<_>, _>>()?;
    let concentration = concentration(s, tf, traj, &mut notes)?;
    let synthetic = self_test(s.seed, 20, 50, &s.analysis.concentration.nest);

    let mut report = DiagnosticsReport {
        format: FORMAT.into(),
        scenario: s.clone(),
        status: traj.status(),
        truncated: truncation(traj.status()),
        notes,
        certification: CertificationBlock {
            transform: *tf.certification(),
            max_boundary_ratio,
            refinement,
        },
        conserved,
        duhamel,
        blowup,
        morawetz,
        identity,
        mass_flux,
        hardy,
        strichartz,
        concentration,
        synthetic,
        checks: Vec::new(),
    };
    report.checks = checks(&report);
    Ok(report)
}

/// Every check that applies to the report's scenario.
pub fn checks(r: &DiagnosticsReport) -> Vec<Check> {
    let t = &r.scenario.tolerances;
    let sign = r.scenario.sign;
    let mut c = vec![
        Check::at_most("conservation.mass_drift", r.conserved.max_mass_drift, t.mass_drift),
        Check::at_most("conservation.energy_drift", r.conserved.max_energy_drift, t.energy_drift),
        Check::at_most("duhamel.relative_residual", r.duhamel.relative, t.duhamel),
    ];
    if let Some(refine) = &r.certification.refinement {
        if sign != Sign::Free {
            c.push(Check::at_least("refinement.duhamel_order", refine.duhamel_order, t.duhamel_order));
        }
        if let Some(order) = refine.identity_order {
            c.push(Check::at_least("refinement.identity_order", order, t.identity_order));
        }
    }
    if let Some(id) = &r.identity {
        c.push(Check::at_most("identity.normalized_defect", id.normalized_defect, t.identity_defect));
    }
    for m in &r.morawetz {
        c.push(Check::at_most(format!("morawetz.ratio[A={}]", m.a_factor), m.ratio, t.morawetz));
    }
    for m in &r.mass_flux {
        c.push(Check::at_most(format!("mass_flux.ratio[R={}]", m.radius), m.ratio, t.mass_flux));
    }
    for h in &r.hardy.entries {
        c.push(Check::at_most(format!("hardy.sup_ratio[R={}]", h.radius), h.sup, r.hardy.constant));
    }
    let flagged = f64::from(u8::from(r.blowup.flagged));
    c.push(if t.expect_blowup {
        Check::at_least("blowup.flagged", flagged, 1.0)
    } else {
        Check::at_most("blowup.flagged", flagged, 0.0)
    });
    let non_finite = r
        .strichartz
        .iter()
        .flat_map(|n| n.components.iter().map(|(_, v)| *v))
        .filter(|v| !v.is_finite())
        .count();
    c.push(Check::at_most("strichartz.non_finite", non_finite as f64, 0.0));
    if let Some(k) = &r.concentration {
        let d = &k.decomposition;
        let outside = (0..d.regular_len())
            .filter(|&j| !(d.masses()[j] >= k.eta && d.masses()[j] <= 2.0 * k.eta))
            .count();
        c.push(Check::at_most("concentration.mass_window_violations", outside as f64, 0.0));
        let times = &r.conserved.times;
        let gap = (d.boundaries()[0] - times[0]).abs() + (d.boundaries()[d.len()] - times[times.len() - 1]).abs();
        c.push(Check::at_most("concentration.coverage_gap", gap, 0.0));
        c.push(Check::at_most(
            "concentration.exceptional_count_excess",
            k.exceptional.count as f64 - k.exceptional.count_bound,
            0.0,
        ));
        let nonpositive = k.technical.iter().filter(|x| !x.linear_positive).count();
        c.push(Check::at_most("concentration.technical_nonpositive", nonpositive as f64, 0.0));
        let short = k.bubbles.iter().filter(|b| b.attained_mass < b.threshold).count();
        c.push(Check::at_most("concentration.bubble_below_threshold", short as f64, 0.0));
        c.push(Check::at_most(
            "concentration.cauchy_schwarz_failures",
            k.windows.certificate_failures as f64,
            0.0,
        ));
        c.push(Check::at_most("concentration.nest_dyadic_violations", k.dyadic_violations as f64, 0.0));
        if let Some(n) = &k.nest {
            c.push(Check::at_most("concentration.nest_kappa", n.achieved_kappa, n.kappa));
        }
    }
    let syn = &r.synthetic;
    c.push(Check::at_most("synthetic.window_mismatches", syn.window_mismatches as f64, 0.0));
    c.push(Check::at_most("synthetic.nest_invariant_failures", syn.nest_invariant_failures as f64, 0.0));
    c.push(Check::at_most("synthetic.ramp_boundary_error_steps", syn.ramp_boundary_error, 1.0));
    c
}
