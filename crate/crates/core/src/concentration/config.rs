use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Knobs of the interval machinery. The defaults are chosen so desk-scale
/// runs produce nonempty output, not to match any asymptotic regime.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ConcentrationConfig {
    /// Subdivision mass. `None` means a tenth of the total critical mass.
    pub eta: Option<f64>,
    /// Exceptional threshold is `eta^c1`.
    pub c1: f64,
    /// Bubble mass fraction, in `(0, 1)`.
    pub bubble_fraction: f64,
    pub nest: NestConfig,
}

impl Default for ConcentrationConfig {
    fn default() -> Self {
        Self {
            eta: None,
            c1: 1.25,
            bubble_fraction: 0.5,
            nest: NestConfig::default(),
        }
    }
}

impl ConcentrationConfig {
    /// `eta` if configured, else `min(total / 10, 1/2)` so that `eta^c1 < eta`.
    pub fn resolve_eta(&self, total: f64) -> f64 {
        self.eta.unwrap_or((total / 10.0).min(0.5))
    }

    pub fn threshold(&self, eta: f64) -> f64 {
        eta.powf(self.c1)
    }

    /// Checks everything independent of the data; `eta` is the resolved value.
    pub fn validate(&self, eta: f64) -> Result<()> {
        if !(eta.is_finite() && eta > 0.0) {
            return Err(invalid("eta", format!("{eta} is not positive")));
        }
        if !(self.c1.is_finite() && self.c1 > 0.0) {
            return Err(invalid("c1", format!("{} is not positive", self.c1)));
        }
        let threshold = self.threshold(eta);
        if !(threshold < eta) {
            return Err(invalid(
                "c1",
                format!("threshold eta^c1 = {threshold} is not below eta = {eta}"),
            ));
        }
        if !(self.bubble_fraction > 0.0 && self.bubble_fraction < 1.0) {
            return Err(invalid(
                "bubble_fraction",
                format!("{} is not in (0, 1)", self.bubble_fraction),
            ));
        }
        self.nest.validate()
    }
}

/// Parameters of the nesting algorithm.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NestConfig {
    /// Closeness bound checked against the achieved value.
    pub kappa: f64,
    /// Intervals longer than `half_factor` times the selected one are removed.
    pub half_factor: f64,
    /// The recursion stops on a component with fewer intervals than this.
    pub floor: usize,
}

impl Default for NestConfig {
    fn default() -> Self {
        Self {
            kappa: 64.0,
            half_factor: 0.5,
            floor: 1,
        }
    }
}

impl NestConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.kappa.is_finite() && self.kappa > 0.0) {
            return Err(invalid("kappa", format!("{} is not positive", self.kappa)));
        }
        if !(self.half_factor > 0.0 && self.half_factor <= 0.5) {
            return Err(invalid(
                "half_factor",
                format!("{} is not in (0, 1/2]", self.half_factor),
            ));
        }
        if self.floor == 0 {
            return Err(invalid("floor", "must be at least 1"));
        }
        Ok(())
    }
}
