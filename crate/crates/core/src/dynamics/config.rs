use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Sign of the nonlinearity in `i u_t + Delta u = mu |u|^{4/(n-2)} u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Defocusing,
    Focusing,
    /// `mu = 0`: the free Schrödinger equation.
    Free,
}

impl Sign {
    pub fn coefficient(self) -> f64 {
        match self {
            Sign::Defocusing => 1.0,
            Sign::Focusing => -1.0,
            Sign::Free => 0.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvolutionConfig {
    pub dimension: usize,
    pub sign: Sign,
    pub dt: f64,
    /// Store every `snapshot_stride`-th step; the final step is always stored.
    pub snapshot_stride: usize,
    /// Relative energy drift that aborts the evolution.
    pub energy_drift_alarm: f64,
    /// Multiple of the initial `||grad u||_2` that raises the blowup flag.
    pub blowup_factor: f64,
}

impl EvolutionConfig {
    pub fn new(dimension: usize, sign: Sign, dt: f64) -> Self {
        Self {
            dimension,
            sign,
            dt,
            snapshot_stride: 1,
            energy_drift_alarm: 1e-3,
            blowup_factor: 10.0,
        }
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.snapshot_stride = stride;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.dimension < 3 {
            return Err(invalid("dimension", format!("{} < 3", self.dimension)));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(invalid("dt", format!("{} is not positive", self.dt)));
        }
        if self.snapshot_stride == 0 {
            return Err(invalid("snapshot_stride", "must be at least 1"));
        }
        if !(self.energy_drift_alarm > 0.0) {
            return Err(invalid("energy_drift_alarm", "must be positive"));
        }
        if !(self.blowup_factor > 0.0) {
            return Err(invalid("blowup_factor", "must be positive"));
        }
        Ok(())
    }

    /// Exponent `4/(n-2)` of the phase `|u|^{4/(n-2)}`.
    pub fn phase_exponent(&self) -> f64 {
        4.0 / (self.dimension as f64 - 2.0)
    }
}
