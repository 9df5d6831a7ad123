use std::fmt;

use num_rational::Ratio;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A Lebesgue exponent in `[1, inf]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent<T> {
    Finite(T),
    Infinite,
}

impl<T: Scalar> Exponent<T> {
    /// `1/p`, zero for `p = inf`.
    pub fn reciprocal(self) -> T {
        match self {
            Exponent::Finite(p) => T::one() / p,
            Exponent::Infinite => T::zero(),
        }
    }

    pub fn at_least_two(self) -> bool {
        match self {
            Exponent::Finite(p) => p >= T::one() + T::one(),
            Exponent::Infinite => true,
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Exponent::Finite(p) => p.to_f64(),
            Exponent::Infinite => f64::INFINITY,
        }
    }
}

impl<T: fmt::Display> fmt::Display for Exponent<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinite => write!(f, "inf"),
        }
    }
}

impl<T: fmt::Display> Serialize for Exponent<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de, T: FromStr> Deserialize<'de> for Exponent<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        if text == "inf" {
            return Ok(Exponent::Infinite);
        }
        text.parse()
            .map(Exponent::Finite)
            .map_err(|_| D::Error::custom(format!("bad exponent {text:?}")))
    }
}

/// `1/q + n/(2r) - n/4`.
pub fn scaling_defect<T: Scalar>(q: Exponent<T>, r: Exponent<T>, dimension: usize) -> T {
    let n = T::from_usize_exact(dimension);
    let two = T::one() + T::one();
    q.reciprocal() + n * r.reciprocal() / two - n / (two * two)
}

/// `2 <= q, r <= inf` and `1/q + n/(2r) = n/4`, exactly for exact scalars and
/// up to the scalar's identity slack otherwise.
pub fn is_admissible<T: Scalar>(q: Exponent<T>, r: Exponent<T>, dimension: usize) -> bool {
    q.at_least_two()
        && r.at_least_two()
        && scaling_defect(q, r, dimension).magnitude() <= T::identity_slack()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: FromStr"))]
pub struct AdmissiblePair<T: fmt::Display> {
    pub q: Exponent<T>,
    pub r: Exponent<T>,
    pub dimension: usize,
}

impl<T: Scalar + fmt::Display> AdmissiblePair<T> {
    pub fn new(q: Exponent<T>, r: Exponent<T>, dimension: usize) -> Result<Self> {
        if !is_admissible(q, r, dimension) {
            return Err(Error::NotAdmissible {
                q: q.to_string(),
                r: r.to_string(),
                dimension,
            });
        }
        Ok(Self { q, r, dimension })
    }

    pub fn defect(&self) -> T {
        scaling_defect(self.q, self.r, self.dimension)
    }

    pub fn to_f64(&self) -> AdmissiblePair<f64> {
        let conv = |e: Exponent<T>| match e {
            Exponent::Finite(p) => Exponent::Finite(p.to_f64()),
            Exponent::Infinite => Exponent::Infinite,
        };
        AdmissiblePair {
            q: conv(self.q),
            r: conv(self.r),
            dimension: self.dimension,
        }
    }
}

/// `(inf, 2)`, the symmetric pair `2(n+2)/n`, `(2(n+2)/(n-2), 2n(n+2)/(n^2+4))`
/// and the endpoint `(2, 2n/(n-2))`.
pub fn default_pairs(dimension: usize) -> Vec<AdmissiblePair<Ratio<i64>>> {
    let n = dimension as i64;
    let q = |a: i64, b: i64| Exponent::Finite(Ratio::new(a, b));
    [
        (Exponent::Infinite, q(2, 1)),
        (q(2 * (n + 2), n), q(2 * (n + 2), n)),
        (q(2 * (n + 2), n - 2), q(2 * n * (n + 2), n * n + 4)),
        (q(2, 1), q(2 * n, n - 2)),
    ]
    .into_iter()
    .map(|(q, r)| AdmissiblePair::new(q, r, dimension).expect("default pair is admissible"))
    .collect()
}
