use std::sync::Arc;

use num_complex::Complex64;

use super::grid::RadialGrid;
use crate::error::{invalid, Error, Result};

/// Default relative amplitude below which a field counts as decayed at `r_max`.
pub const DEFAULT_DECAY_THRESHOLD: f64 = 1e-8;

/// One complex radial snapshot `u(t, |x|)` sampled on a [`RadialGrid`].
#[derive(Clone, Debug, PartialEq)]
pub struct RadialField {
    grid: Arc<RadialGrid>,
    values: Vec<Complex64>,
}

impl RadialField {
    pub fn new(grid: Arc<RadialGrid>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Arc<RadialGrid>) -> Self {
        let values = vec![Complex64::new(0.0, 0.0); grid.len()];
        Self { grid, values }
    }

    pub fn from_fn(grid: Arc<RadialGrid>, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = grid.radii().iter().map(|&r| f(r)).collect();
        Self::new(grid, values)
    }

    pub fn from_real_fn(grid: Arc<RadialGrid>, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_fn(grid, |r| Complex64::new(f(r), 0.0))
    }

    /// Internal constructor for values produced by trusted numerics.
    pub(crate) fn from_parts(grid: Arc<RadialGrid>, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn same_grid(&self, other: &RadialField) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid
    }

    pub fn max_modulus(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `int |u|^p dx` by grid quadrature.
    pub fn modulus_power_integral(&self, p: f64) -> f64 {
        self.grid
            .sum_weighted(self.values.iter().map(|v| v.norm().powf(p)))
    }

    /// `(int |u|^p dx)^{1/p}`; `p = inf` gives `max |u_i|`.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidExponent(p));
        }
        if p.is_infinite() {
            return Ok(self.max_modulus());
        }
        Ok(self.modulus_power_integral(p).powf(1.0 / p))
    }

    pub fn l2_norm(&self) -> f64 {
        self.grid
            .sum_weighted(self.values.iter().map(|v| v.norm_sqr()))
            .sqrt()
    }

    /// Discrete `L^2` distance to another field on the same grid.
    pub fn l2_distance(&self, other: &RadialField) -> Result<f64> {
        if !self.same_grid(other) {
            return Err(Error::GridMismatch);
        }
        Ok(self
            .grid
            .sum_weighted(
                self.values
                    .iter()
                    .zip(&other.values)
                    .map(|(a, b)| (a - b).norm_sqr()),
            )
            .sqrt())
    }

    pub fn scale(&self, factor: Complex64) -> RadialField {
        Self::from_parts(
            self.grid.clone(),
            self.values.iter().map(|v| v * factor).collect(),
        )
    }

    pub fn sub(&self, other: &RadialField) -> Result<RadialField> {
        if !self.same_grid(other) {
            return Err(Error::GridMismatch);
        }
        Ok(Self::from_parts(
            self.grid.clone(),
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        ))
    }

    /// Ratio `|u(r_last)| / max |u|`, or zero for the zero field.
    pub fn boundary_ratio(&self) -> f64 {
        let max = self.max_modulus();
        if max == 0.0 {
            return 0.0;
        }
        self.values.last().map_or(0.0, |v| v.norm()) / max
    }

    /// Whether the field fails to decay below `threshold` (relative) at `r_max`.
    pub fn decay_violation(&self, threshold: f64) -> bool {
        self.boundary_ratio() > threshold
    }

    /// Second-order finite-difference radial Laplacian `u_rr + (n-1)/r u_r`.
    ///
    /// The origin uses the symmetric limit `n u_rr(0)` with even reflection;
    /// the node past the last one is the Dirichlet wall `u(r_max) = 0`.
    pub fn laplacian(&self) -> Result<RadialField> {
        let len = self.values.len();
        if len < 3 {
            return Err(Error::GridTooCoarse {
                nodes: len,
                required: 3,
            });
        }
        let h = self.grid.step();
        let n = self.grid.dimension() as f64;
        let u = &self.values;
        let zero = Complex64::new(0.0, 0.0);
        let mut out = Vec::with_capacity(len);
        out.push(2.0 * n * (u[1] - u[0]) / (h * h));
        for i in 1..len {
            let right = if i + 1 < len { u[i + 1] } else { zero };
            let r = self.grid.radii()[i];
            let second = (right - 2.0 * u[i] + u[i - 1]) / (h * h);
            let first = (right - u[i - 1]) / (2.0 * h);
            out.push(second + first * ((n - 1.0) / r));
        }
        Ok(Self::from_parts(self.grid.clone(), out))
    }

    /// Spatial part of the critical scaling: `lambda^{-(n-2)/2} u(r / lambda)`,
    /// resampled onto the same grid by cubic spline interpolation.
    pub fn rescale(&self, lambda: f64) -> Result<Rescaled> {
        self.rescale_with_threshold(lambda, DEFAULT_DECAY_THRESHOLD)
    }

    pub fn rescale_with_threshold(&self, lambda: f64, threshold: f64) -> Result<Rescaled> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(invalid("lambda", format!("{lambda} is not positive")));
        }
        let n = self.grid.dimension() as f64;
        let amplitude = lambda.powf(-(n - 2.0) / 2.0);
        if lambda == 1.0 {
            return Ok(Rescaled {
                field: self.clone(),
                truncated_fraction: 0.0,
            });
        }
        let spline = CubicSpline::new(self.grid.step(), &self.values);
        let values = self
            .grid
            .radii()
            .iter()
            .map(|&r| spline.eval(r / lambda) * amplitude)
            .collect();

        // mass of the source that the rescaled grid cannot hold
        let cutoff = self.grid.r_max() / lambda;
        let max = self.max_modulus();
        let lost = self
            .grid
            .radii()
            .iter()
            .zip(&self.values)
            .filter(|(r, _)| **r > cutoff)
            .map(|(_, v)| v.norm())
            .fold(0.0, f64::max);
        let truncated_fraction = if max > 0.0 { lost / max } else { 0.0 };
        let truncated_fraction = if truncated_fraction > threshold {
            truncated_fraction
        } else {
            0.0
        };
        Ok(Rescaled {
            field: Self::from_parts(self.grid.clone(), values),
            truncated_fraction,
        })
    }
}

/// Result of [`RadialField::rescale`]; a nonzero `truncated_fraction` records
/// that part of the source support was pushed past `r_max`.
#[derive(Clone, Debug)]
pub struct Rescaled {
    pub field: RadialField,
    pub truncated_fraction: f64,
}

impl Rescaled {
    pub fn truncated(&self) -> bool {
        self.truncated_fraction > 0.0
    }
}

/// Cubic spline on the uniform nodes plus the wall node `r_max` (value zero),
/// clamped to zero slope at the origin and natural at the wall.
struct CubicSpline<'a> {
    step: f64,
    values: &'a [Complex64],
    second: Vec<Complex64>,
}

impl<'a> CubicSpline<'a> {
    fn new(step: f64, values: &'a [Complex64]) -> Self {
        let len = values.len() + 1;
        let zero = Complex64::new(0.0, 0.0);
        let y = |i: usize| if i < values.len() { values[i] } else { zero };
        let h2 = step * step;

        // Tridiagonal system for the second derivatives M_0..M_{len-1}; M_last = 0.
        let mut diag = vec![0.0; len];
        let mut upper = vec![0.0; len];
        let mut lower = vec![0.0; len];
        let mut rhs = vec![zero; len];
        diag[0] = 2.0;
        upper[0] = 1.0;
        rhs[0] = (y(1) - y(0)) * (6.0 / h2);
        for i in 1..len - 1 {
            lower[i] = 1.0;
            diag[i] = 4.0;
            upper[i] = 1.0;
            rhs[i] = (y(i + 1) - y(i) * 2.0 + y(i - 1)) * (6.0 / h2);
        }
        diag[len - 1] = 1.0;

        // Thomas algorithm.
        for i in 1..len {
            let m = lower[i] / diag[i - 1];
            diag[i] -= m * upper[i - 1];
            let prev = rhs[i - 1];
            rhs[i] -= prev * m;
        }
        let mut second = vec![zero; len];
        second[len - 1] = rhs[len - 1] / diag[len - 1];
        for i in (0..len - 1).rev() {
            second[i] = (rhs[i] - second[i + 1] * upper[i]) / diag[i];
        }
        Self {
            step,
            values,
            second,
        }
    }

    fn eval(&self, x: f64) -> Complex64 {
        let zero = Complex64::new(0.0, 0.0);
        let wall = self.values.len();
        let pos = x / self.step;
        if pos >= wall as f64 {
            return zero;
        }
        let i = (pos.floor() as usize).min(wall - 1);
        let h = self.step;
        let left = x - i as f64 * h;
        let right = h - left;
        let yi = self.values[i];
        let yj = if i + 1 < wall { self.values[i + 1] } else { zero };
        let mi = self.second[i];
        let mj = self.second[i + 1];
        mi * (right.powi(3) / (6.0 * h))
            + mj * (left.powi(3) / (6.0 * h))
            + (yi - mi * (h * h / 6.0)) * (right / h)
            + (yj - mj * (h * h / 6.0)) * (left / h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid(n: usize, nodes: usize, r_max: f64) -> Arc<RadialGrid> {
        Arc::new(RadialGrid::new(n, nodes, r_max).unwrap())
    }

    #[test]
    fn lp_norms_of_gaussian() {
        let g = grid(3, 512, 8.0);
        let u = RadialField::from_real_fn(g.clone(), |r| (-r * r).exp()).unwrap();
        let l2 = u.lp_norm(2.0).unwrap();
        assert!((l2 - (PI / 2.0).powf(0.75)).abs() < 1e-8);
        assert_eq!(u.lp_norm(f64::INFINITY).unwrap(), 1.0);
        assert_eq!(RadialField::zeros(g).lp_norm(3.0).unwrap(), 0.0);
    }

    #[test]
    fn lp_norm_rejects_small_exponent() {
        let u = RadialField::zeros(grid(3, 16, 1.0));
        assert!(matches!(u.lp_norm(0.5), Err(Error::InvalidExponent(_))));
    }

    #[test]
    fn laplacian_annihilates_constants() {
        let g = grid(4, 64, 4.0);
        let u = RadialField::from_real_fn(g, |_| 3.5).unwrap();
        let lap = u.laplacian().unwrap();
        // last node sees the Dirichlet wall
        for v in &lap.values()[..63] {
            assert_eq!(v.norm(), 0.0);
        }
    }

    #[test]
    fn laplacian_exact_on_quadratic() {
        for n in 3..=6 {
            let g = grid(n, 64, 4.0);
            let u = RadialField::from_real_fn(g, |r| r * r).unwrap();
            let lap = u.laplacian().unwrap();
            for v in &lap.values()[..63] {
                assert!((v.re - 2.0 * n as f64).abs() < 1e-10, "n={n} {v}");
            }
        }
    }

    #[test]
    fn laplacian_second_order_on_gaussian() {
        let err = |nodes: usize| {
            let g = grid(5, nodes, 8.0);
            let u = RadialField::from_real_fn(g.clone(), |r| (-r * r).exp()).unwrap();
            let lap = u.laplacian().unwrap();
            g.radii()
                .iter()
                .zip(lap.values())
                .map(|(r, v)| (v.re - (4.0 * r * r - 10.0) * (-r * r).exp()).abs())
                .fold(0.0, f64::max)
        };
        let coarse = err(256);
        let fine = err(512);
        assert!(coarse < 0.05);
        let ratio = coarse / fine;
        assert!((ratio - 4.0).abs() < 0.4, "ratio {ratio}");
    }

    #[test]
    fn laplacian_needs_three_nodes() {
        let g = Arc::new(RadialGrid::new(3, 3, 1.0).unwrap());
        let u = RadialField::zeros(g);
        assert!(u.laplacian().is_ok());
        let short = RadialField {
            grid: u.grid().clone(),
            values: vec![Complex64::new(0.0, 0.0); 2],
        };
        assert!(matches!(short.laplacian(), Err(Error::GridTooCoarse { .. })));
    }

    #[test]
    fn rescale_identity_and_critical_norm() {
        let g = grid(3, 1024, 32.0);
        let u = RadialField::from_real_fn(g, |r| (-r * r).exp()).unwrap();
        let same = u.rescale(1.0).unwrap();
        assert_eq!(same.field, u);
        let p = 6.0;
        let base = u.lp_norm(p).unwrap();
        for lambda in [0.5, 0.8, 1.3, 2.0] {
            let v = u.rescale(lambda).unwrap();
            assert!(!v.truncated());
            let rel = (v.field.lp_norm(p).unwrap() - base).abs() / base;
            assert!(rel < 1e-6, "lambda={lambda} rel={rel}");
        }
    }

    #[test]
    fn rescale_flags_truncation() {
        let g = grid(3, 128, 8.0);
        let u = RadialField::from_real_fn(g, |r| (-(r - 5.0).powi(2)).exp()).unwrap();
        assert!(u.rescale(4.0).unwrap().truncated());
        assert!(!u.rescale(0.5).unwrap().truncated());
    }

    #[test]
    fn spline_reproduces_nodes() {
        let g = grid(3, 64, 8.0);
        let u = RadialField::from_real_fn(g.clone(), |r| (-r * r / 4.0).exp() * (1.0 + r)).unwrap();
        let s = CubicSpline::new(g.step(), u.values());
        for (r, v) in g.radii().iter().zip(u.values()) {
            assert!((s.eval(*r) - v).norm() < 1e-14);
        }
        assert_eq!(s.eval(8.0).norm(), 0.0);
    }
}
