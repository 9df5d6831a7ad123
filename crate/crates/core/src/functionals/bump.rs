use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// Radial cutoff `chi(s) = 1 - S((s - inner) / (outer - inner))` with the
/// quintic smoothstep `S(x) = 6x^5 - 15x^4 + 10x^3`: one for `s <= inner`,
/// zero for `s >= outer`, `C^2` and non-increasing in between.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BumpFunction<T> {
    pub inner: T,
    pub outer: T,
}

impl<T: Scalar> Default for BumpFunction<T> {
    fn default() -> Self {
        let two = T::one() + T::one();
        Self {
            inner: T::one() / two,
            outer: T::one(),
        }
    }
}

impl<T: Scalar> BumpFunction<T> {
    fn local(&self, s: T) -> Option<T> {
        if s <= self.inner {
            None
        } else if s >= self.outer {
            Some(T::one())
        } else {
            Some((s - self.inner) / (self.outer - self.inner))
        }
    }

    pub fn value(&self, s: T) -> T {
        match self.local(s) {
            None => T::one(),
            Some(x) => T::one() - smoothstep(x),
        }
    }

    pub fn derivative(&self, s: T) -> T {
        match self.local(s) {
            Some(x) if x < T::one() => {
                T::zero() - smoothstep_derivative(x) / (self.outer - self.inner)
            }
            _ => T::zero(),
        }
    }

    /// `sup |chi'| = 15 / (8 (outer - inner))`, attained at the midpoint.
    pub fn sup_derivative(&self) -> T {
        T::from_usize_exact(15) / (T::from_usize_exact(8) * (self.outer - self.inner))
    }
}

fn smoothstep<T: Scalar>(x: T) -> T {
    let c = T::from_usize_exact;
    x * x * x * (c(10) - x * (c(15) - c(6) * x))
}

fn smoothstep_derivative<T: Scalar>(x: T) -> T {
    let c = T::from_usize_exact;
    let y = T::one() - x;
    c(30) * x * x * y * y
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    type Q = Ratio<i64>;

    #[test]
    fn exact_plateaus_and_midpoint() {
        let b = BumpFunction::<Q>::default();
        assert_eq!(b.value(Q::new(1, 2)), Q::from_integer(1));
        assert_eq!(b.value(Q::from_integer(1)), Q::from_integer(0));
        assert_eq!(b.value(Q::new(3, 4)), Q::new(1, 2));
        assert_eq!(b.derivative(Q::new(3, 4)), -Q::new(15, 4));
        assert_eq!(b.sup_derivative(), Q::new(15, 4));
    }

    #[test]
    fn monotone_on_rational_ladder() {
        let b = BumpFunction::<Q>::default();
        let values: Vec<Q> = (0..=64).map(|i| b.value(Q::new(i, 64))).collect();
        assert!(values.windows(2).all(|w| w[0] >= w[1]));
        assert!(values.iter().all(|v| *v >= Q::from_integer(0) && *v <= Q::from_integer(1)));
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        let b = BumpFunction::<f64>::default();
        for i in 1..50 {
            let s = 0.5 + i as f64 / 100.0;
            let h = 1e-6;
            let fd = (b.value(s + h) - b.value(s - h)) / (2.0 * h);
            assert!((fd - b.derivative(s)).abs() < 1e-8);
            assert!(b.derivative(s).abs() <= b.sup_derivative());
        }
    }
}
