//! Scalar abstraction shared by the exact and floating-point code paths.

use std::fmt::Debug;

use num_rational::Ratio;
use num_traits::{FromPrimitive, Num};

/// Field elements used by the combinatorial and closed-form parts of the crate.
///
/// Floating-point types carry a small slack for identities that hold exactly
/// over the reals; rational types carry none.
pub trait Scalar: Num + FromPrimitive + Copy + PartialOrd + Debug {
    fn identity_slack() -> Self;

    fn to_f64(self) -> f64;

    fn magnitude(self) -> Self {
        if self < Self::zero() {
            Self::zero() - self
        } else {
            self
        }
    }

    fn from_usize_exact(v: usize) -> Self {
        Self::from_usize(v).expect("integer representable in scalar type")
    }
}

impl Scalar for f32 {
    fn identity_slack() -> Self {
        1e-6
    }

    fn to_f64(self) -> f64 {
        self as f64
    }
}

impl Scalar for f64 {
    fn identity_slack() -> Self {
        1e-12
    }

    fn to_f64(self) -> f64 {
        self
    }
}

impl Scalar for Ratio<i64> {
    fn identity_slack() -> Self {
        Ratio::from_integer(0)
    }

    fn to_f64(self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}

impl Scalar for Ratio<i128> {
    fn identity_slack() -> Self {
        Ratio::from_integer(0)
    }

    fn to_f64(self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}
