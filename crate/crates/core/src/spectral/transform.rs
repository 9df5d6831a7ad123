use std::sync::Arc;

use nalgebra::{Cholesky, DMatrix};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bessel::{bessel_j, bessel_zeros, scaled_bessel_at_origin};
use crate::error::{invalid, Error, Result};
use crate::radial::{sphere_area, RadialField, RadialGrid};

/// Parameters of the construction-time self-test that certifies how long
/// free evolution on the truncated ball stays faithful to evolution on `R^n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificationSpec {
    /// Width `s` of the reference profile `exp(-r^2 / s^2)`; `None` uses `r_max / 16`.
    pub reference_width: Option<f64>,
    /// Pointwise error allowed against the closed-form evolution.
    pub tolerance: f64,
}

impl Default for CertificationSpec {
    fn default() -> Self {
        Self {
            reference_width: None,
            tolerance: 1e-6,
        }
    }
}

/// Outcome of the self-test run when a [`SpectralTransform`] is built.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certification {
    pub reference_width: f64,
    pub tolerance: f64,
    /// Largest `|t|` for which free evolution is accepted.
    pub horizon: f64,
    /// `max |B F u - u|` on the reference profile.
    pub round_trip_error: f64,
    /// `max |G - I|` of the raw Bessel-mode Gram matrix before orthogonalization.
    pub gram_defect: f64,
}

/// Discrete Hankel transform of order `n/2 - 1` on a [`RadialGrid`].
///
/// The modes are the Dirichlet eigenfunctions `r^{-nu} J_nu(k_m r)` of the
/// ball, `k_m = j_{nu,m} / r_max`, sampled on the grid and orthonormalized
/// in the grid's weighted inner product by a Cholesky factor of their Gram
/// matrix. Forward and backward maps are therefore exact adjoints, and the
/// free propagator `exp(-i k^2 t)` is unitary in discrete `L^2`.
pub struct SpectralTransform {
    grid: Arc<RadialGrid>,
    twice_order: u32,
    frequencies: Vec<f64>,
    /// modes x (nodes - 1), row-major: `w_i psi_m(r_i)` for `i >= 1`.
    analysis: Vec<f64>,
    /// nodes x modes, row-major: `psi_m(r_i)`.
    synthesis: Vec<f64>,
    /// nodes x modes, row-major: `psi_m'(r_i)`.
    derivative: Vec<f64>,
    certification: Certification,
}

impl std::fmt::Debug for SpectralTransform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralTransform")
            .field("grid", &self.grid.spec())
            .field("modes", &self.frequencies.len())
            .field("certification", &self.certification)
            .finish()
    }
}

impl SpectralTransform {
    pub fn new(grid: Arc<RadialGrid>) -> Result<Self> {
        Self::with_certification(grid, CertificationSpec::default())
    }

    pub fn with_certification(grid: Arc<RadialGrid>, spec: CertificationSpec) -> Result<Self> {
        let nodes = grid.len();
        let modes = nodes - 1;
        let n = grid.dimension();
        let twice_order = (n - 2) as u32;
        let nu = twice_order as f64 / 2.0;
        let r_max = grid.r_max();
        let omega = sphere_area(n);

        let zeros = bessel_zeros(twice_order, modes);
        let frequencies: Vec<f64> = zeros.iter().map(|z| z / r_max).collect();
        let norms: Vec<f64> = zeros
            .iter()
            .map(|&z| (omega * r_max * r_max / 2.0).sqrt() * bessel_j(twice_order + 2, z).abs())
            .collect();

        let radii = grid.radii();
        let rows: Vec<(Vec<f64>, Vec<f64>)> = radii
            .par_iter()
            .map(|&r| {
                let mut value = Vec::with_capacity(modes);
                let mut slope = Vec::with_capacity(modes);
                for (k, norm) in frequencies.iter().zip(&norms) {
                    if r == 0.0 {
                        value.push(scaled_bessel_at_origin(twice_order, *k) / norm);
                        slope.push(0.0);
                    } else {
                        let scale = r.powf(-nu) / norm;
                        value.push(bessel_j(twice_order, k * r) * scale);
                        slope.push(-k * bessel_j(twice_order + 2, k * r) * scale);
                    }
                }
                (value, slope)
            })
            .collect();
        let psi = DMatrix::from_fn(nodes, modes, |i, m| rows[i].0[m]);
        let dpsi = DMatrix::from_fn(nodes, modes, |i, m| rows[i].1[m]);
        drop(rows);

        let weights = grid.weights();
        let weighted = DMatrix::from_fn(modes, modes, |i, m| weights[i + 1].sqrt() * psi[(i + 1, m)]);
        let gram = weighted.tr_mul(&weighted);
        let gram_defect = gram
            .iter()
            .enumerate()
            .map(|(idx, g)| {
                let (i, j) = (idx % modes, idx / modes);
                (g - if i == j { 1.0 } else { 0.0 }).abs()
            })
            .fold(0.0, f64::max);
        let chol = Cholesky::new(gram)
            .ok_or_else(|| invalid("grid", "Bessel-mode Gram matrix is not positive definite"))?;
        let lower_inv = chol
            .l()
            .solve_lower_triangular(&DMatrix::identity(modes, modes))
            .ok_or_else(|| invalid("grid", "singular Cholesky factor"))?;
        let psi = psi * lower_inv.transpose();
        let dpsi = dpsi * lower_inv.transpose();

        let synthesis: Vec<f64> = (0..nodes)
            .flat_map(|i| (0..modes).map(move |m| (i, m)))
            .map(|(i, m)| psi[(i, m)])
            .collect();
        let derivative: Vec<f64> = (0..nodes)
            .flat_map(|i| (0..modes).map(move |m| (i, m)))
            .map(|(i, m)| dpsi[(i, m)])
            .collect();
        let analysis: Vec<f64> = (0..modes)
            .flat_map(|m| (1..nodes).map(move |i| (i, m)))
            .map(|(i, m)| weights[i] * psi[(i, m)])
            .collect();

        let mut transform = Self {
            grid,
            twice_order,
            frequencies,
            analysis,
            synthesis,
            derivative,
            certification: Certification {
                reference_width: 0.0,
                tolerance: spec.tolerance,
                horizon: 0.0,
                round_trip_error: 0.0,
                gram_defect,
            },
        };
        transform.certify(spec)?;
        Ok(transform)
    }

    fn certify(&mut self, spec: CertificationSpec) -> Result<()> {
        if !(spec.tolerance > 0.0) {
            return Err(invalid("tolerance", "must be positive"));
        }
        let width = spec
            .reference_width
            .unwrap_or(self.grid.r_max() / 16.0);
        if !(width > 0.0) {
            return Err(invalid("reference_width", "must be positive"));
        }
        let n = self.grid.dimension() as f64;
        let s2 = width * width;
        let reference = RadialField::from_real_fn(self.grid.clone(), |r| (-r * r / s2).exp())?;
        let coeffs = self.forward(&reference)?;
        let back = self.backward(&coeffs);
        let round_trip_error = max_difference(back.values(), reference.values());

        let mut horizon = 0.0;
        for j in 0..=80 {
            let t = s2 * 2f64.powf(j as f64 / 4.0) / 16.0;
            let evolved = self.backward(&self.propagate_coefficients(&coeffs, t));
            let err = self
                .grid
                .radii()
                .iter()
                .zip(evolved.values())
                .map(|(&r, v)| {
                    let denom = Complex64::new(s2, 4.0 * t);
                    let exact = (Complex64::new(1.0, 4.0 * t / s2)).powf(-n / 2.0)
                        * (-(r * r) / denom).exp();
                    (v - exact).norm()
                })
                .fold(0.0, f64::max);
            if err > spec.tolerance {
                break;
            }
            horizon = t;
        }
        self.certification = Certification {
            reference_width: width,
            tolerance: spec.tolerance,
            horizon,
            round_trip_error,
            gram_defect: self.certification.gram_defect,
        };
        Ok(())
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    /// Bessel order `nu = n/2 - 1`.
    pub fn order(&self) -> f64 {
        self.twice_order as f64 / 2.0
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn certification(&self) -> &Certification {
        &self.certification
    }

    pub fn horizon(&self) -> f64 {
        self.certification.horizon
    }

    fn check_grid(&self, u: &RadialField) -> Result<()> {
        if Arc::ptr_eq(u.grid(), &self.grid) || **u.grid() == *self.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    /// Spectral coefficients `c_m = sum_i w_i psi_m(r_i) u_i`.
    pub fn forward(&self, u: &RadialField) -> Result<Vec<Complex64>> {
        self.check_grid(u)?;
        Ok(apply(&self.analysis, self.grid.len() - 1, &u.values()[1..]))
    }

    /// Field `u_i = sum_m psi_m(r_i) c_m`.
    pub fn backward(&self, coeffs: &[Complex64]) -> RadialField {
        assert_eq!(coeffs.len(), self.frequencies.len(), "coefficient count");
        RadialField::from_parts(
            self.grid.clone(),
            apply(&self.synthesis, self.frequencies.len(), coeffs),
        )
    }

    /// Radial derivative `u_r` at every node, from spectral coefficients.
    pub fn radial_derivative(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(coeffs.len(), self.frequencies.len(), "coefficient count");
        apply(&self.derivative, self.frequencies.len(), coeffs)
    }

    /// Multiplies every coefficient by `exp(-i k^2 t)`.
    pub fn propagate_coefficients(&self, coeffs: &[Complex64], t: f64) -> Vec<Complex64> {
        coeffs
            .iter()
            .zip(&self.frequencies)
            .map(|(c, k)| c * Complex64::from_polar(1.0, -k * k * t))
            .collect()
    }

    /// `exp(i t Delta) u`. Times beyond the certified horizon are refused.
    pub fn free_evolve(&self, u: &RadialField, t: f64) -> Result<RadialField> {
        self.check_grid(u)?;
        self.check_time(t)?;
        if t == 0.0 {
            return Ok(u.clone());
        }
        let c = self.forward(u)?;
        Ok(self.backward(&self.propagate_coefficients(&c, t)))
    }

    pub(crate) fn check_time(&self, t: f64) -> Result<()> {
        if !t.is_finite() || t.abs() > self.certification.horizon {
            return Err(Error::BeyondHorizon {
                t,
                horizon: self.certification.horizon,
            });
        }
        Ok(())
    }

    /// Applies the Fourier multiplier `f(k)` mode by mode.
    pub fn apply_multiplier(&self, u: &RadialField, f: impl Fn(f64) -> f64) -> Result<RadialField> {
        let c = self.forward(u)?;
        let scaled: Vec<Complex64> = c
            .iter()
            .zip(&self.frequencies)
            .map(|(c, &k)| c * f(k))
            .collect();
        Ok(self.backward(&scaled))
    }

    /// `sum_m k_m^2 |c_m|^2`, the discrete `||grad u||_{L^2}^2`.
    pub fn gradient_norm_sq_from(&self, coeffs: &[Complex64]) -> f64 {
        coeffs
            .iter()
            .zip(&self.frequencies)
            .map(|(c, k)| k * k * c.norm_sqr())
            .sum()
    }

    pub fn gradient_norm(&self, u: &RadialField) -> Result<f64> {
        Ok(self.gradient_norm_sq_from(&self.forward(u)?).sqrt())
    }

    /// `1/2 ||grad u||_{L^2}^2`.
    pub fn kinetic_energy(&self, u: &RadialField) -> Result<f64> {
        Ok(0.5 * self.gradient_norm_sq_from(&self.forward(u)?))
    }
}

fn max_difference(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Row-major real matrix times complex vector.
fn apply(matrix: &[f64], cols: usize, input: &[Complex64]) -> Vec<Complex64> {
    debug_assert_eq!(input.len(), cols);
    let re: Vec<f64> = input.iter().map(|c| c.re).collect();
    let im: Vec<f64> = input.iter().map(|c| c.im).collect();
    let row = |row: &[f64]| {
        let (a, b) = dot2(row, &re, &im);
        Complex64::new(a, b)
    };
    if matrix.len() >= 1 << 16 {
        matrix.par_chunks_exact(cols).map(row).collect()
    } else {
        matrix.chunks_exact(cols).map(row).collect()
    }
}

fn dot2(row: &[f64], re: &[f64], im: &[f64]) -> (f64, f64) {
    let mut acc_re = [0.0f64; 4];
    let mut acc_im = [0.0f64; 4];
    let chunks = row.len() / 4;
    for c in 0..chunks {
        let base = c * 4;
        for l in 0..4 {
            acc_re[l] += row[base + l] * re[base + l];
            acc_im[l] += row[base + l] * im[base + l];
        }
    }
    let mut sum_re = (acc_re[0] + acc_re[1]) + (acc_re[2] + acc_re[3]);
    let mut sum_im = (acc_im[0] + acc_im[1]) + (acc_im[2] + acc_im[3]);
    for i in chunks * 4..row.len() {
        sum_re += row[i] * re[i];
        sum_im += row[i] * im[i];
    }
    (sum_re, sum_im)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn transform(n: usize, nodes: usize, r_max: f64) -> SpectralTransform {
        let grid = Arc::new(RadialGrid::new(n, nodes, r_max).unwrap());
        SpectralTransform::new(grid).unwrap()
    }

    fn gaussian(tf: &SpectralTransform) -> RadialField {
        RadialField::from_real_fn(tf.grid().clone(), |r| (-r * r).exp()).unwrap()
    }

    #[test]
    fn round_trip_is_identity() {
        for n in 3..=6 {
            let tf = transform(n, 256, 16.0);
            assert!(tf.certification().round_trip_error < 1e-9, "n={n}");
            let u = gaussian(&tf);
            let back = tf.backward(&tf.forward(&u).unwrap());
            assert!(max_difference(back.values(), u.values()) < 1e-9);
        }
    }

    #[test]
    fn frequencies_increase() {
        let tf = transform(4, 128, 8.0);
        assert!(tf.frequencies().windows(2).all(|w| w[0] < w[1]));
        assert!(tf.frequencies()[0] > 0.0);
        assert_eq!(tf.order(), 1.0);
    }

    #[test]
    fn analysis_is_adjoint_of_synthesis() {
        // orthonormality: forward(backward(e_m)) = e_m
        let tf = transform(5, 96, 8.0);
        let modes = tf.frequencies().len();
        for m in [0, 7, modes - 1] {
            let mut e = vec![Complex64::new(0.0, 0.0); modes];
            e[m] = Complex64::new(1.0, 0.0);
            let back = tf.forward(&tf.backward(&e)).unwrap();
            for (j, c) in back.iter().enumerate() {
                let expected = if j == m { 1.0 } else { 0.0 };
                assert!((c.re - expected).abs() < 1e-11 && c.im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_time_is_exact_identity() {
        let tf = transform(3, 128, 16.0);
        let u = gaussian(&tf);
        assert_eq!(tf.free_evolve(&u, 0.0).unwrap(), u);
    }

    #[test]
    fn refuses_beyond_horizon() {
        let tf = transform(3, 128, 16.0);
        let u = gaussian(&tf);
        let h = tf.horizon();
        assert!(h > 0.0);
        assert!(matches!(
            tf.free_evolve(&u, 2.0 * h + 1.0),
            Err(Error::BeyondHorizon { .. })
        ));
    }

    #[test]
    fn derivative_of_gaussian() {
        let tf = transform(3, 256, 16.0);
        let u = gaussian(&tf);
        let du = tf.radial_derivative(&tf.forward(&u).unwrap());
        for (r, d) in tf.grid().radii().iter().zip(&du) {
            assert!((d.re + 2.0 * r * (-r * r).exp()).abs() < 1e-9);
        }
    }

    #[test]
    fn kinetic_energy_of_gaussian() {
        // 1/2 int |2 r e^{-r^2}|^2 dx in n = 3: 8 pi * 3 sqrt(pi) / (8 * 2^{5/2})
        let tf = transform(3, 512, 16.0);
        let u = gaussian(&tf);
        let pi = std::f64::consts::PI;
        let exact = 8.0 * pi * 3.0 * pi.sqrt() / (8.0 * 2f64.powf(2.5));
        assert!((tf.kinetic_energy(&u).unwrap() - exact).abs() < 1e-10);
    }
}
