//! Scenario files: one TOML document per run, with dotted-key overrides.

use std::path::{Path, PathBuf};

use num_rational::Ratio;
use radial_nls::concentration::{ConcentrationConfig, NestConfig};
use radial_nls::dynamics::{EvolutionConfig, Sign};
use radial_nls::functionals::{default_pairs, AdmissiblePair, Exponent};
use radial_nls::radial::GridSpec;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub id: String,
    pub dimension: usize,
    pub sign: Sign,
    #[serde(default)]
    pub seed: u64,
    pub grid: GridSection,
    pub time: TimeSection,
    pub initial: InitialData,
    #[serde(default)]
    pub evolution: EvolutionSection,
    #[serde(default)]
    pub analysis: AnalysisSection,
    #[serde(default)]
    pub tolerances: Tolerances,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub nodes: usize,
    pub r_max: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSection {
    #[serde(default)]
    pub t_minus: f64,
    pub t_plus: f64,
    pub dt: f64,
    #[serde(default = "one")]
    pub stride: usize,
}

fn one() -> usize {
    1
}

/// Named initial-data families, all real-valued and radial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase", deny_unknown_fields)]
pub enum InitialData {
    /// `amplitude exp(-r^2 / width^2)`
    Gaussian { amplitude: f64, width: f64 },
    /// `amplitude exp(-(r - center)^2 / width^2)`
    Ring { amplitude: f64, center: f64, width: f64 },
    /// `amplitude sech(r / width)`
    Sech { amplitude: f64, width: f64 },
    /// Snapshot file in the trajectory store format, on the scenario grid.
    File { path: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvolutionSection {
    pub energy_drift_alarm: f64,
    pub blowup_factor: f64,
}

impl Default for EvolutionSection {
    fn default() -> Self {
        let base = EvolutionConfig::new(3, Sign::Defocusing, 1.0);
        Self {
            energy_drift_alarm: base.energy_drift_alarm,
            blowup_factor: base.blowup_factor,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnalysisSection {
    /// Rerun at twice the step to measure convergence orders.
    pub refinement: bool,
    pub concentration: ConcentrationConfig,
    pub morawetz_a: Vec<f64>,
    pub morawetz_eps: Vec<f64>,
    pub flux_radii: Vec<f64>,
    pub hardy_radii: Vec<f64>,
    pub identity_epsilon: f64,
    pub identity_scale: f64,
    /// `(q, r)` as strings such as `"inf"`, `"10/3"`; empty means the default set.
    pub pairs: Vec<(String, String)>,
}

impl Default for AnalysisSection {
    fn default() -> Self {
        Self {
            refinement: false,
            concentration: ConcentrationConfig::default(),
            morawetz_a: vec![1.0, 2.0, 4.0],
            morawetz_eps: vec![1e-2, 1e-3],
            flux_radii: vec![1.0, 2.0, 4.0],
            hardy_radii: (0..=10).map(|k| 0.25 * 2f64.powf(k as f64 / 2.0)).collect(),
            identity_epsilon: 1.0,
            identity_scale: 4.0,
            pairs: Vec::new(),
        }
    }
}

/// Thresholds every check is evaluated against.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Relative L^2 mass drift.
    pub mass_drift: f64,
    /// Energy drift relative to `max(|E_0|, K_0)`.
    pub energy_drift: f64,
    /// Duhamel residual relative to `||u_0||_2`.
    pub duhamel: f64,
    pub duhamel_order: f64,
    pub identity_defect: f64,
    pub identity_order: f64,
    pub mass_flux: f64,
    pub morawetz: f64,
    pub expect_blowup: bool,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            mass_drift: 1e-10,
            energy_drift: 1e-5,
            duhamel: 1e-3,
            duhamel_order: 1.8,
            identity_defect: 1e-2,
            identity_order: 1.5,
            mass_flux: 1.05,
            morawetz: radial_nls::functionals::MORAWETZ_RATIO_BOUND,
            expect_blowup: false,
        }
    }
}

pub type ExactPair = AdmissiblePair<Ratio<i64>>;

fn parse_exponent(s: &str) -> Option<Exponent<Ratio<i64>>> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("inf") {
        return Some(Exponent::Infinite);
    }
    let value = match s.split_once('/') {
        Some((n, d)) => {
            let d: i64 = d.trim().parse().ok()?;
            if d == 0 {
                return None;
            }
            Ratio::new(n.trim().parse().ok()?, d)
        }
        None => Ratio::from_integer(s.parse().ok()?),
    };
    Some(Exponent::Finite(value))
}

impl Scenario {
    /// Parses TOML text, applies `key=value` overrides, and validates.
    pub fn from_toml(text: &str, overrides: &[String], seed: Option<u64>) -> Result<Self, CliError> {
        let mut doc: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| CliError::Config(vec![e.to_string()]))?;
        for o in overrides {
            apply_override(&mut doc, o)?;
        }
        if let Some(seed) = seed {
            doc.insert("seed".into(), toml::Value::Integer(seed as i64));
        }
        let scenario: Scenario = toml::Value::Table(doc)
            .try_into()
            .map_err(|e: toml::de::Error| CliError::Config(vec![e.to_string()]))?;
        let violations = scenario.violations();
        if violations.is_empty() {
            Ok(scenario)
        } else {
            Err(CliError::Config(violations))
        }
    }

    pub fn load(path: &Path, overrides: &[String], seed: Option<u64>) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(vec![format!("{}: {e}", path.display())]))?;
        let mut s = Self::from_toml(&text, overrides, seed)?;
        if let InitialData::File { path: p } = &mut s.initial {
            if p.is_relative() {
                *p = path.parent().unwrap_or(Path::new(".")).join(&*p);
            }
        }
        Ok(s)
    }

    pub fn grid_spec(&self) -> GridSpec {
        GridSpec {
            dimension: self.dimension,
            nodes: self.grid.nodes,
            r_max: self.grid.r_max,
        }
    }

    pub fn evolution_config(&self, dt: f64) -> EvolutionConfig {
        let mut cfg = EvolutionConfig::new(self.dimension, self.sign, dt).with_stride(self.time.stride);
        cfg.energy_drift_alarm = self.evolution.energy_drift_alarm;
        cfg.blowup_factor = self.evolution.blowup_factor;
        cfg
    }

    /// Configured Strichartz pairs, or the default set for the dimension.
    pub fn pairs(&self) -> Result<Vec<ExactPair>, CliError> {
        if self.analysis.pairs.is_empty() {
            return Ok(default_pairs(self.dimension));
        }
        self.analysis
            .pairs
            .iter()
            .map(|(q, r)| {
                let bad = || CliError::Config(vec![format!("analysis.pairs: cannot parse ({q}, {r})")]);
                let q = parse_exponent(q).ok_or_else(bad)?;
                let r = parse_exponent(r).ok_or_else(bad)?;
                AdmissiblePair::new(q, r, self.dimension)
                    .map_err(|e| CliError::Config(vec![format!("analysis.pairs: {e}")]))
            })
            .collect()
    }

    /// Every violated constraint, as `field: reason`.
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        let mut need = |ok: bool, field: &str, reason: String| {
            if !ok {
                v.push(format!("{field}: {reason}"));
            }
        };
        let positive = |x: f64| x.is_finite() && x > 0.0;
        need(!self.id.is_empty(), "id", "must be nonempty".into());
        need(self.dimension >= 3, "dimension", format!("{} < 3", self.dimension));
        need(self.grid.nodes >= 3, "grid.nodes", format!("{} < 3", self.grid.nodes));
        need(positive(self.grid.r_max), "grid.r_max", format!("{} is not positive", self.grid.r_max));
        need(
            self.time.t_minus.is_finite() && self.time.t_plus.is_finite() && self.time.t_plus > self.time.t_minus,
            "time",
            format!("span [{}, {}] is empty", self.time.t_minus, self.time.t_plus),
        );
        need(positive(self.time.dt), "time.dt", format!("{} is not positive", self.time.dt));
        need(self.time.stride >= 1, "time.stride", "must be at least 1".into());
        match &self.initial {
            InitialData::Gaussian { amplitude, width } | InitialData::Sech { amplitude, width } => {
                need(amplitude.is_finite() && *amplitude >= 0.0, "initial.amplitude", format!("{amplitude} is negative or not finite"));
                need(positive(*width), "initial.width", format!("{width} is not positive"));
            }
            InitialData::Ring { amplitude, center, width } => {
                need(amplitude.is_finite() && *amplitude >= 0.0, "initial.amplitude", format!("{amplitude} is negative or not finite"));
                need(center.is_finite() && *center >= 0.0, "initial.center", format!("{center} is negative or not finite"));
                need(positive(*width), "initial.width", format!("{width} is not positive"));
            }
            InitialData::File { path } => {
                need(path.is_file(), "initial.path", format!("{} is not a file", path.display()));
            }
        }
        need(positive(self.evolution.energy_drift_alarm), "evolution.energy_drift_alarm", "must be positive".into());
        need(
            self.evolution.blowup_factor.is_finite() && self.evolution.blowup_factor > 1.0,
            "evolution.blowup_factor",
            "must exceed 1".into(),
        );
        let a = &self.analysis;
        let c = &a.concentration;
        if let Some(eta) = c.eta {
            if let Err(e) = c.validate(eta) {
                need(false, "analysis.concentration", e.to_string());
            }
        } else {
            need(positive(c.c1) && c.c1 > 1.0, "analysis.concentration.c1", "must exceed 1 so that eta^c1 < eta".into());
            need(
                c.bubble_fraction > 0.0 && c.bubble_fraction < 1.0,
                "analysis.concentration.bubble_fraction",
                "must lie in (0, 1)".into(),
            );
            if let Err(e) = NestConfig::validate(&c.nest) {
                need(false, "analysis.concentration.nest", e.to_string());
            }
        }
        let lists: [(&str, &Vec<f64>); 4] = [
            ("analysis.morawetz_a", &a.morawetz_a),
            ("analysis.morawetz_eps", &a.morawetz_eps),
            ("analysis.flux_radii", &a.flux_radii),
            ("analysis.hardy_radii", &a.hardy_radii),
        ];
        for (field, list) in lists {
            need(list.iter().all(|&x| positive(x)), field, "entries must be positive".into());
        }
        need(positive(a.identity_epsilon), "analysis.identity_epsilon", "must be positive".into());
        need(positive(a.identity_scale), "analysis.identity_scale", "must be positive".into());
        if let Err(CliError::Config(e)) = self.pairs() {
            v.extend(e);
        }
        let t = &self.tolerances;
        for (field, x) in [
            ("tolerances.mass_drift", t.mass_drift),
            ("tolerances.energy_drift", t.energy_drift),
            ("tolerances.duhamel", t.duhamel),
            ("tolerances.duhamel_order", t.duhamel_order),
            ("tolerances.identity_defect", t.identity_defect),
            ("tolerances.identity_order", t.identity_order),
            ("tolerances.mass_flux", t.mass_flux),
            ("tolerances.morawetz", t.morawetz),
        ] {
            if !positive(x) {
                v.push(format!("{field}: {x} is not positive"));
            }
        }
        v
    }
}

/// `a.b.c=value`, with `value` parsed as a TOML value and kept as a string otherwise.
fn apply_override(doc: &mut toml::Table, spec: &str) -> Result<(), CliError> {
    let (key, raw) = spec
        .split_once('=')
        .ok_or_else(|| CliError::Config(vec![format!("override `{spec}` is not key=value")]))?;
    let value = format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()));
    let parts: Vec<&str> = key.trim().split('.').collect();
    let mut table = doc;
    for part in &parts[..parts.len() - 1] {
        let entry = table
            .entry(part.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        table = entry
            .as_table_mut()
            .ok_or_else(|| CliError::Config(vec![format!("override `{key}`: `{part}` is not a table")]))?;
    }
    table.insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
id = "t"
dimension = 3
sign = "defocusing"
[grid]
nodes = 64
r_max = 8.0
[time]
t_plus = 0.5
dt = 0.01
stride = 5
[initial]
family = "gaussian"
amplitude = 1.0
width = 1.0
"#;

    #[test]
    fn parses_and_overrides() {
        let s = Scenario::from_toml(BASE, &["grid.nodes=128".into(), "analysis.concentration.nest.kappa=8".into()], Some(7))
            .unwrap();
        assert_eq!(s.grid.nodes, 128);
        assert_eq!(s.analysis.concentration.nest.kappa, 8.0);
        assert_eq!(s.seed, 7);
        assert_eq!(s.pairs().unwrap().len(), default_pairs(3).len());
    }

    #[test]
    fn lists_every_violation() {
        let err = Scenario::from_toml(
            BASE,
            &["grid.r_max=-1".into(), "time.dt=0".into(), "initial.width=0".into()],
            None,
        )
        .unwrap_err();
        match err {
            CliError::Config(v) => {
                assert_eq!(v.len(), 3, "{v:?}");
                assert!(v[0].starts_with("grid.r_max"));
            }
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn rejects_unknown_family_and_keys() {
        assert!(Scenario::from_toml(BASE, &["initial.family=\"soliton\"".into()], None).is_err());
        assert!(Scenario::from_toml(BASE, &["grid.spacing=1".into()], None).is_err());
    }

    #[test]
    fn parses_pairs() {
        let s = Scenario::from_toml(BASE, &[r#"analysis.pairs=[["inf","2"],["10/3","10/3"]]"#.into()], None).unwrap();
        assert_eq!(s.pairs().unwrap().len(), 2);
        let bad = Scenario::from_toml(BASE, &[r#"analysis.pairs=[["4","4"]]"#.into()], None);
        assert!(matches!(bad, Err(CliError::Config(_))));
    }
}
