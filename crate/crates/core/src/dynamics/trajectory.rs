use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::EvolutionConfig;
use crate::error::{invalid, Error, Result};
use crate::radial::{GridSpec, RadialField, RadialGrid};

/// Where a trajectory came from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub grid: GridSpec,
    /// Free-form description of the initial data.
    pub initial_data: serde_json::Value,
}

/// How an evolution ended.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Status {
    Completed,
    /// Relative energy drift exceeded the alarm at `time`; snapshots stop there.
    EnergyAlarm { time: f64, drift: f64 },
    /// `||grad u||_2` exceeded the configured multiple at `time`; snapshots stop there.
    Blowup { time: f64, growth: f64 },
}

/// Time-ordered snapshots of one solution on a common grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    config: EvolutionConfig,
    provenance: Provenance,
    times: Vec<f64>,
    snapshots: Vec<RadialField>,
    status: Status,
    /// Requested final time; differs from the last snapshot time when truncated.
    t_plus: f64,
}

impl Trajectory {
    /// Builds a trajectory from externally produced snapshots.
    pub fn from_snapshots(
        config: EvolutionConfig,
        provenance: Provenance,
        times: Vec<f64>,
        snapshots: Vec<RadialField>,
    ) -> Result<Self> {
        let t_plus = times.last().copied().unwrap_or(0.0);
        Self::from_parts(config, provenance, times, snapshots, Status::Completed, t_plus)
    }

    pub(crate) fn from_parts(
        config: EvolutionConfig,
        provenance: Provenance,
        times: Vec<f64>,
        snapshots: Vec<RadialField>,
        status: Status,
        t_plus: f64,
    ) -> Result<Self> {
        if snapshots.is_empty() {
            return Err(Error::InsufficientData("trajectory without snapshots".into()));
        }
        if times.len() != snapshots.len() {
            return Err(Error::LengthMismatch {
                expected: snapshots.len(),
                got: times.len(),
            });
        }
        if times.iter().any(|t| !t.is_finite()) || times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("times", "must be finite and strictly increasing"));
        }
        if snapshots.iter().any(|s| !s.same_grid(&snapshots[0])) {
            return Err(Error::GridMismatch);
        }
        if snapshots[0].grid().dimension() != config.dimension {
            return Err(invalid("dimension", "config and grid disagree"));
        }
        Ok(Self {
            config,
            provenance,
            times,
            snapshots,
            status,
            t_plus,
        })
    }

    pub fn config(&self) -> &EvolutionConfig {
        &self.config
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        self.snapshots[0].grid()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn snapshots(&self) -> &[RadialField] {
        &self.snapshots
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn t_minus(&self) -> f64 {
        self.times[0]
    }

    /// Last stored time.
    pub fn t_last(&self) -> f64 {
        *self.times.last().unwrap()
    }

    pub fn requested_t_plus(&self) -> f64 {
        self.t_plus
    }

    /// Index of the snapshot at time `t`, allowing a relative slack of `1e-12`.
    pub fn index_of(&self, t: f64) -> Result<usize> {
        let slack = 1e-12 * t.abs().max(1.0);
        let i = self.times.partition_point(|&s| s < t - slack);
        match self.times.get(i) {
            Some(&s) if (s - t).abs() <= slack => Ok(i),
            _ => Err(Error::NotSnapshotTime(t)),
        }
    }

    /// Indices `[i, j]` of snapshots inside the closed interval `[a, b]`.
    pub fn index_range(&self, a: f64, b: f64) -> Result<(usize, usize)> {
        if !(a < b) {
            return Err(Error::EmptyInterval { start: a, end: b });
        }
        let slack = 1e-12 * a.abs().max(b.abs()).max(1.0);
        if a < self.t_minus() - slack || b > self.t_last() + slack {
            return Err(invalid(
                "interval",
                format!("[{a}, {b}] outside [{}, {}]", self.t_minus(), self.t_last()),
            ));
        }
        let i = self.times.partition_point(|&s| s < a - slack);
        let j = self.times.partition_point(|&s| s <= b + slack);
        if j <= i {
            return Err(Error::EmptyInterval { start: a, end: b });
        }
        Ok((i, j - 1))
    }

    /// The critical rescaling `lambda^{-(n-2)/2} u(t / lambda^2, x / lambda)`:
    /// times scale by `lambda^2`, snapshots by [`RadialField::rescale`].
    /// Returns the trajectory and the largest truncated fraction among its snapshots.
    pub fn rescaled(&self, lambda: f64) -> Result<(Self, f64)> {
        let mut truncated: f64 = 0.0;
        let snapshots = self
            .snapshots
            .iter()
            .map(|u| {
                let r = u.rescale(lambda)?;
                truncated = truncated.max(r.truncated_fraction);
                Ok(r.field)
            })
            .collect::<Result<Vec<_>>>()?;
        let l2 = lambda * lambda;
        let mut config = self.config;
        config.dt *= l2;
        let times = self.times.iter().map(|t| t * l2).collect();
        let traj = Self::from_parts(
            config,
            self.provenance.clone(),
            times,
            snapshots,
            self.status,
            self.t_plus * l2,
        )?;
        Ok((traj, truncated))
    }

    /// Copy with one snapshot replaced, for fault injection and tests.
    pub fn with_snapshot(&self, index: usize, field: RadialField) -> Result<Self> {
        if !field.same_grid(&self.snapshots[0]) {
            return Err(Error::GridMismatch);
        }
        let mut out = self.clone();
        out.snapshots[index] = field;
        Ok(out)
    }
}

/// Trapezoid weights for the nodes `times[i..=j]`.
pub(crate) fn trapezoid_weights(times: &[f64]) -> Vec<f64> {
    let mut w = vec![0.0; times.len()];
    for k in 1..times.len() {
        let h = times[k] - times[k - 1];
        w[k - 1] += h / 2.0;
        w[k] += h / 2.0;
    }
    w
}
