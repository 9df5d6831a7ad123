use serde::{Deserialize, Serialize};

use crate::dynamics::Trajectory;
use crate::error::{invalid, Error, Result};
use crate::functionals::critical_exponent;
use crate::scalar::Scalar;

/// Consecutive intervals `[t_j, t_{j+1}]` covering a time span, each with its
/// critical spacetime mass. Every interval except a flagged final tail has
/// mass in `[eta, 2 eta]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Decomposition<T> {
    boundaries: Vec<T>,
    masses: Vec<T>,
    eta: T,
    exceptional: Vec<bool>,
    tail: bool,
}

impl<T: Scalar> Decomposition<T> {
    /// Validates ordering and the mass window.
    pub fn new(boundaries: Vec<T>, masses: Vec<T>, eta: T, tail: bool) -> Result<Self> {
        if masses.is_empty() || boundaries.len() != masses.len() + 1 {
            return Err(Error::LengthMismatch {
                expected: masses.len() + 1,
                got: boundaries.len(),
            });
        }
        if !(eta > T::zero()) {
            return Err(invalid("eta", "must be positive"));
        }
        if let Some(i) = (0..masses.len()).find(|&i| !(boundaries[i] < boundaries[i + 1])) {
            return Err(Error::EmptyInterval {
                start: boundaries[i].to_f64(),
                end: boundaries[i + 1].to_f64(),
            });
        }
        let two_eta = eta + eta;
        let regular = masses.len() - usize::from(tail);
        for (i, &m) in masses.iter().enumerate() {
            let inside = if i < regular {
                m >= eta && m <= two_eta
            } else {
                m >= T::zero() && m < eta
            };
            if !inside {
                return Err(Error::HypothesisViolated {
                    mass: m.to_f64(),
                    low: if i < regular { eta.to_f64() } else { 0.0 },
                    high: if i < regular { two_eta.to_f64() } else { eta.to_f64() },
                });
            }
        }
        let exceptional = vec![false; masses.len()];
        Ok(Self {
            boundaries,
            masses,
            eta,
            exceptional,
            tail,
        })
    }

    /// Synthetic decomposition with the given lengths, each carrying mass `eta`.
    pub fn from_lengths(start: T, lengths: &[T], eta: T) -> Result<Self> {
        let mut boundaries = Vec::with_capacity(lengths.len() + 1);
        boundaries.push(start);
        for &l in lengths {
            let last = *boundaries.last().expect("nonempty");
            boundaries.push(last + l);
        }
        Self::new(boundaries, vec![eta; lengths.len()], eta, false)
    }

    pub fn with_exceptional(mut self, flags: Vec<bool>) -> Result<Self> {
        if flags.len() != self.masses.len() {
            return Err(Error::LengthMismatch {
                expected: self.masses.len(),
                got: flags.len(),
            });
        }
        self.exceptional = flags;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn boundaries(&self) -> &[T] {
        &self.boundaries
    }

    pub fn masses(&self) -> &[T] {
        &self.masses
    }

    pub fn eta(&self) -> T {
        self.eta
    }

    pub fn exceptional(&self) -> &[bool] {
        &self.exceptional
    }

    /// Whether the last interval is a tail with mass below `eta`.
    pub fn has_tail(&self) -> bool {
        self.tail
    }

    /// Number of intervals meeting the `[eta, 2 eta]` window.
    pub fn regular_len(&self) -> usize {
        self.len() - usize::from(self.tail)
    }

    pub fn interval(&self, j: usize) -> (T, T) {
        (self.boundaries[j], self.boundaries[j + 1])
    }

    pub fn length(&self, j: usize) -> T {
        self.boundaries[j + 1] - self.boundaries[j]
    }

    pub fn lengths(&self) -> Vec<T> {
        (0..self.len()).map(|j| self.length(j)).collect()
    }

    pub fn total_mass(&self) -> T {
        self.masses.iter().fold(T::zero(), |acc, &m| acc + m)
    }
}

/// Greedy left-to-right subdivision of the sampled density `f(t_i)`, integrated
/// by the trapezoid rule. An interval closes at the first sample where its mass
/// reaches `eta`, so boundaries are sample times; leftover mass below `eta`
/// becomes a flagged tail.
pub fn greedy_subdivide_density<T: Scalar>(
    times: &[T],
    density: &[T],
    eta: T,
) -> Result<Decomposition<T>> {
    if times.len() != density.len() {
        return Err(Error::LengthMismatch {
            expected: times.len(),
            got: density.len(),
        });
    }
    if times.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "{} samples, need at least 2",
            times.len()
        )));
    }
    if !(eta > T::zero()) {
        return Err(invalid("eta", "must be positive"));
    }
    if let Some(i) = density.iter().position(|&f| f < T::zero()) {
        return Err(invalid("density", format!("negative at sample {i}")));
    }
    let two = T::one() + T::one();
    let two_eta = eta + eta;
    let mut boundaries = vec![times[0]];
    let mut masses = Vec::new();
    let mut mass = T::zero();
    for i in 0..times.len() - 1 {
        let dt = times[i + 1] - times[i];
        if !(dt > T::zero()) {
            return Err(Error::EmptyInterval {
                start: times[i].to_f64(),
                end: times[i + 1].to_f64(),
            });
        }
        mass = mass + (density[i] + density[i + 1]) / two * dt;
        if mass >= eta {
            if mass > two_eta {
                return Err(Error::ResolutionTooCoarse {
                    index: i + 1,
                    mass: mass.to_f64(),
                    limit: two_eta.to_f64(),
                });
            }
            boundaries.push(times[i + 1]);
            masses.push(mass);
            mass = T::zero();
        }
    }
    let last = times[times.len() - 1];
    let tail = *boundaries.last().expect("nonempty") < last;
    if tail {
        boundaries.push(last);
        masses.push(mass);
    }
    Decomposition::new(boundaries, masses, eta, tail)
}

/// `int |u(t_i)|^{2(n+2)/(n-2)} dx` at every snapshot.
pub fn critical_density(traj: &Trajectory) -> Result<Vec<f64>> {
    Ok(critical_density_of(traj.grid().dimension(), traj.snapshots()))
}

pub(crate) fn critical_density_of(dimension: usize, fields: &[crate::radial::RadialField]) -> Vec<f64> {
    let p = 2.0 * critical_exponent(dimension) - 2.0;
    fields.iter().map(|u| u.modulus_power_integral(p)).collect()
}

/// Sequential trapezoid sum of `f` over samples `first..=last`, accumulated
/// the same way as the greedy sweep.
pub(crate) fn trapezoid_sum(times: &[f64], density: &[f64], first: usize, last: usize) -> f64 {
    let mut mass = 0.0;
    for i in first..last {
        mass += (density[i] + density[i + 1]) / 2.0 * (times[i + 1] - times[i]);
    }
    mass
}

/// Greedy subdivision of `[t_-, t_last]` by critical spacetime mass.
pub fn greedy_subdivide(traj: &Trajectory, eta: f64) -> Result<Decomposition<f64>> {
    greedy_subdivide_density(traj.times(), &critical_density(traj)?, eta)
}
