use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Construction parameters of a [`RadialGrid`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub dimension: usize,
    pub nodes: usize,
    pub r_max: f64,
}

/// Uniform radial grid with volume quadrature for radial functions on the
/// ball of radius `r_max` in `R^n`.
///
/// Nodes sit at `r_i = i h` for `i = 0..N`, with `h = r_max / N`, so the
/// truncation sphere lies one step beyond the last node and fields vanish
/// there. Weights are trapezoid weights times the surface measure
/// `omega_{n-1} r^{n-1}`; the origin node therefore carries weight zero and
/// its value enters only through interpolation and the Laplacian stencil.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialGrid {
    spec: GridSpec,
    step: f64,
    radii: Vec<f64>,
    weights: Vec<f64>,
}

impl RadialGrid {
    pub fn new(dimension: usize, nodes: usize, r_max: f64) -> Result<Self> {
        Self::from_spec(GridSpec {
            dimension,
            nodes,
            r_max,
        })
    }

    pub fn from_spec(spec: GridSpec) -> Result<Self> {
        if spec.dimension < 3 {
            return Err(invalid("dimension", format!("{} < 3", spec.dimension)));
        }
        if spec.nodes < 3 {
            return Err(Error::GridTooCoarse {
                nodes: spec.nodes,
                required: 3,
            });
        }
        if !(spec.r_max.is_finite() && spec.r_max > 0.0) {
            return Err(invalid("r_max", format!("{} is not positive", spec.r_max)));
        }
        let step = spec.r_max / spec.nodes as f64;
        let omega = sphere_area(spec.dimension);
        let radii: Vec<f64> = (0..spec.nodes).map(|i| i as f64 * step).collect();
        let weights = radii
            .iter()
            .map(|&r| omega * step * r.powi(spec.dimension as i32 - 1))
            .collect();
        Ok(Self {
            spec,
            step,
            radii,
            weights,
        })
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    pub fn dimension(&self) -> usize {
        self.spec.dimension
    }

    pub fn len(&self) -> usize {
        self.spec.nodes
    }

    pub fn is_empty(&self) -> bool {
        self.spec.nodes == 0
    }

    pub fn r_max(&self) -> f64 {
        self.spec.r_max
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Volume of the truncation ball.
    pub fn ball_volume(&self) -> f64 {
        sphere_area(self.spec.dimension) * self.spec.r_max.powi(self.spec.dimension as i32)
            / self.spec.dimension as f64
    }

    /// `sum_i w_i f_i`, the quadrature approximation of `int_{R^n} f dx`.
    pub fn integrate(&self, samples: &[f64]) -> Result<f64> {
        if samples.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: samples.len(),
            });
        }
        if let Some(index) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(self.sum_weighted(samples.iter().copied()))
    }

    /// Quadrature over an iterator of samples; callers guarantee length and finiteness.
    pub(crate) fn sum_weighted(&self, samples: impl Iterator<Item = f64>) -> f64 {
        self.weights
            .iter()
            .zip(samples)
            .map(|(w, f)| w * f)
            .sum()
    }
}

/// Surface area `omega_{n-1} = 2 pi^{n/2} / Gamma(n/2)` of the unit sphere in `R^n`.
pub fn sphere_area(dimension: usize) -> f64 {
    let half = dimension as f64 / 2.0;
    2.0 * std::f64::consts::PI.powf(half) / libm::tgamma(half)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sphere_areas() {
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-13);
        assert!((sphere_area(4) - 2.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn zero_integrand() {
        let g = RadialGrid::new(3, 64, 8.0).unwrap();
        assert_eq!(g.integrate(&vec![0.0; 64]).unwrap(), 0.0);
    }

    #[test]
    fn gaussian_moment_three_dimensions() {
        let g = RadialGrid::new(3, 512, 8.0).unwrap();
        let f: Vec<f64> = g.radii().iter().map(|r| (-r * r).exp()).collect();
        let v = g.integrate(&f).unwrap();
        assert!((v - PI.powf(1.5)).abs() < 1e-8, "{v}");
    }

    #[test]
    fn exponential_moment_three_dimensions() {
        let g = RadialGrid::new(3, 4096, 40.0).unwrap();
        let f: Vec<f64> = g.radii().iter().map(|r| (-r).exp()).collect();
        let v = g.integrate(&f).unwrap();
        assert!((v - 8.0 * PI).abs() < 1e-6, "{}", v - 8.0 * PI);
    }

    #[test]
    fn weights_cover_ball() {
        for n in 3..=8 {
            let g = RadialGrid::new(n, 400, 10.0).unwrap();
            let total: f64 = g.weights().iter().sum();
            let rel = (total - g.ball_volume()).abs() / g.ball_volume();
            assert!(rel <= n as f64 * g.step() / g.r_max(), "n={n} rel={rel}");
            assert!(g.weights()[1..].iter().all(|&w| w > 0.0));
            assert!(g.radii().windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn rejects_non_finite() {
        let g = RadialGrid::new(3, 8, 1.0).unwrap();
        let mut f = vec![1.0; 8];
        f[3] = f64::NAN;
        assert!(matches!(g.integrate(&f), Err(Error::NonFinite { index: 3 })));
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(RadialGrid::new(2, 16, 1.0).is_err());
        assert!(RadialGrid::new(3, 2, 1.0).is_err());
        assert!(RadialGrid::new(3, 16, -1.0).is_err());
    }
}
