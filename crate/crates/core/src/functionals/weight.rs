use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Closed-form values of the Morawetz weight where the cutoff is identically one.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightValues<T> {
    pub a: T,
    pub laplacian: T,
    /// `-Delta Delta a`.
    pub neg_bilaplacian: T,
}

/// Radial derivatives of the weight used by the momentum identity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightJet<T> {
    pub a: T,
    pub first: T,
    pub second: T,
    pub laplacian: T,
    pub neg_bilaplacian: T,
}

/// `a(x) = (eps^2 + |x|^2)^{1/2} chi(x)` in dimension `n`.
///
/// On `|x| <= 1` the cutoff is one and the closed forms apply. For the
/// momentum identity the cutoff falls smoothly from one to zero on `[1, 2]`
/// and is `C^infinity`, so grid quadrature of `-Delta Delta a` stays spectrally accurate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MorawetzWeight<T> {
    pub epsilon: T,
    pub dimension: usize,
}

impl<T: Float> MorawetzWeight<T> {
    pub fn new(epsilon: T, dimension: usize) -> Self {
        Self { epsilon, dimension }
    }

    fn c(v: f64) -> T {
        T::from(v).unwrap()
    }

    /// `(a, Delta a, -Delta Delta a)` for `|x| <= 1`.
    pub fn closed_form(&self, x: T) -> Result<WeightValues<T>> {
        if !(x.abs() <= T::one()) {
            return Err(Error::OutsideClosedForm(x.to_f64().unwrap_or(f64::NAN)));
        }
        let n = Self::c(self.dimension as f64);
        let one = T::one();
        let e2 = self.epsilon * self.epsilon;
        let q = e2 + x * x;
        let s = q.sqrt();
        let laplacian = (n - one) / s + e2 / (q * s);
        let neg_bilaplacian = (n - one) * (n - Self::c(3.0)) / (q * s)
            + Self::c(6.0) * (n - Self::c(3.0)) * e2 / (q * q * s)
            + Self::c(15.0) * e2 * e2 / (q * q * q * s);
        Ok(WeightValues {
            a: s,
            laplacian,
            neg_bilaplacian,
        })
    }

    /// Derivatives of `s(r) = (eps^2 + r^2)^{1/2}` up to order four.
    fn root_jet(&self, r: T) -> [T; 5] {
        Taylor::variable(r)
            .mul(&Taylor::variable(r))
            .add_constant(self.epsilon * self.epsilon)
            .sqrt()
            .derivatives()
    }

    /// Full radial jet of `a` on `[0, inf)`.
    pub fn jet(&self, r: T) -> WeightJet<T> {
        let zero = T::zero();
        let two = Self::c(2.0);
        if r >= two {
            return WeightJet {
                a: zero,
                first: zero,
                second: zero,
                laplacian: zero,
                neg_bilaplacian: zero,
            };
        }
        if r <= T::one() {
            let closed = self.closed_form(r).unwrap();
            let s = self.root_jet(r);
            return WeightJet {
                a: closed.a,
                first: s[1],
                second: s[2],
                laplacian: closed.laplacian,
                neg_bilaplacian: closed.neg_bilaplacian,
            };
        }
        let x = Taylor::variable(r);
        let root = x.mul(&x).add_constant(self.epsilon * self.epsilon).sqrt();
        let g = root.mul(&cutoff(x.add_constant(-T::one()))).derivatives();
        let n = Self::c(self.dimension as f64);
        let k = n - T::one();
        let l = k * (n - Self::c(3.0));
        let laplacian = g[2] + k / r * g[1];
        let bilaplacian =
            g[4] + two * k / r * g[3] + l / (r * r) * g[2] - l / (r * r * r) * g[1];
        WeightJet {
            a: g[0],
            first: g[1],
            second: g[2],
            laplacian,
            neg_bilaplacian: -bilaplacian,
        }
    }
}

/// `1 - f(x) / (f(x) + f(1 - x))` with `f(x) = exp(-1/x)`: the smooth step
/// from one at `x <= 0` to zero at `x >= 1`, evaluated for `0 < x < 1`.
fn cutoff<T: Float>(x: Taylor<T>) -> Taylor<T> {
    let f = |y: &Taylor<T>| y.recip().scale(-T::one()).exp();
    let rising = f(&x);
    let falling = f(&x.scale(-T::one()).add_constant(T::one()));
    falling.mul(&rising.add(&falling).recip())
}

/// Truncated Taylor series `sum_k c_k h^k`, `k <= 4`.
#[derive(Clone, Copy, Debug)]
struct Taylor<T>([T; 5]);

impl<T: Float> Taylor<T> {
    fn variable(x: T) -> Self {
        let mut c = [T::zero(); 5];
        c[0] = x;
        c[1] = T::one();
        Self(c)
    }

    fn add(&self, o: &Self) -> Self {
        Self(std::array::from_fn(|k| self.0[k] + o.0[k]))
    }

    fn add_constant(&self, v: T) -> Self {
        let mut c = self.0;
        c[0] = c[0] + v;
        Self(c)
    }

    fn scale(&self, v: T) -> Self {
        Self(self.0.map(|c| c * v))
    }

    fn mul(&self, o: &Self) -> Self {
        Self(std::array::from_fn(|k| {
            (0..=k).fold(T::zero(), |acc, i| acc + self.0[i] * o.0[k - i])
        }))
    }

    fn recip(&self) -> Self {
        let a = &self.0;
        let mut b = [T::zero(); 5];
        b[0] = T::one() / a[0];
        for k in 1..5 {
            let s = (1..=k).fold(T::zero(), |acc, j| acc + a[j] * b[k - j]);
            b[k] = -s * b[0];
        }
        Self(b)
    }

    fn exp(&self) -> Self {
        let a = &self.0;
        let mut b = [T::zero(); 5];
        b[0] = a[0].exp();
        for k in 1..5 {
            let s = (1..=k).fold(T::zero(), |acc, j| {
                acc + T::from(j).unwrap() * a[j] * b[k - j]
            });
            b[k] = s / T::from(k).unwrap();
        }
        Self(b)
    }

    fn sqrt(&self) -> Self {
        let a = &self.0;
        let mut b = [T::zero(); 5];
        b[0] = a[0].sqrt();
        let two = T::one() + T::one();
        for k in 1..5 {
            let s = (1..k).fold(T::zero(), |acc, j| acc + b[j] * b[k - j]);
            b[k] = (a[k] - s) / (two * b[0]);
        }
        Self(b)
    }

    /// `f^{(k)} = k! c_k`.
    fn derivatives(&self) -> [T; 5] {
        let mut factorial = T::one();
        std::array::from_fn(|k| {
            if k > 1 {
                factorial = factorial * T::from(k).unwrap();
            }
            self.0[k] * factorial
        })
    }
}

/// `(a, Delta a, -Delta Delta a)` at radius `x <= 1`.
pub fn morawetz_weight_eval(
    epsilon: f64,
    dimension: usize,
    x: f64,
) -> Result<WeightValues<f64>> {
    MorawetzWeight::new(epsilon, dimension).closed_form(x)
}
