use super::Decomposition;
use crate::scalar::Scalar;

/// Indices of the intervals contained in `[a, b]`.
fn contained<T: Scalar>(decomp: &Decomposition<T>, window: (T, T)) -> impl Iterator<Item = usize> + '_ {
    (0..decomp.len()).filter(move |&j| {
        let (s, e) = decomp.interval(j);
        window.0 <= s && e <= window.1
    })
}

/// `sum_{I_j in I} |I_j|^{1/2} / |I|^{1/2}`.
pub fn half_norm_ratio<T: Scalar>(decomp: &Decomposition<T>, window: (T, T)) -> f64 {
    let sum: f64 = contained(decomp, window)
        .map(|j| decomp.length(j).to_f64().sqrt())
        .sum();
    sum / (window.1 - window.0).to_f64().sqrt()
}

/// `max_{I_j in I} |I_j| / |I|`, zero when no interval fits.
pub fn largest_fraction<T: Scalar>(decomp: &Decomposition<T>, window: (T, T)) -> T {
    let width = window.1 - window.0;
    contained(decomp, window)
        .map(|j| decomp.length(j) / width)
        .fold(T::zero(), |m, v| if v > m { v } else { m })
}

/// A window spanning intervals `first..=last`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Window {
    pub first: usize,
    pub last: usize,
}

impl Window {
    pub fn span<T: Scalar>(&self, decomp: &Decomposition<T>) -> (T, T) {
        (decomp.boundaries()[self.first], decomp.boundaries()[self.last + 1])
    }
}

/// Largest `half_norm_ratio` over all windows whose endpoints are boundaries,
/// with the first window attaining it.
pub fn sup_half_norm_ratio<T: Scalar>(decomp: &Decomposition<T>) -> (f64, Window) {
    let mut best = (0.0, Window { first: 0, last: 0 });
    for first in 0..decomp.len() {
        let mut sum = 0.0;
        for last in first..decomp.len() {
            sum += decomp.length(last).to_f64().sqrt();
            let width = decomp.boundaries()[last + 1] - decomp.boundaries()[first];
            let ratio = sum / width.to_f64().sqrt();
            if ratio > best.0 {
                best = (ratio, Window { first, last });
            }
        }
    }
    best
}

/// Smallest `largest_fraction` over all boundary windows.
pub fn min_largest_fraction<T: Scalar>(decomp: &Decomposition<T>) -> (T, Window) {
    let mut best = (T::one(), Window { first: 0, last: 0 });
    for first in 0..decomp.len() {
        let mut longest = T::zero();
        for last in first..decomp.len() {
            let l = decomp.length(last);
            if l > longest {
                longest = l;
            }
            let width = decomp.boundaries()[last + 1] - decomp.boundaries()[first];
            let fraction = longest / width;
            if fraction < best.0 {
                best = (fraction, Window { first, last });
            }
        }
    }
    best
}

/// Exact certificate for `largest_fraction * half_norm_ratio^2 >= 1` on a
/// boundary window: the lengths sum to the width, and `|I_j| M >= |I_j|^2` for
/// the longest length `M`, so `sum |I_j|^{1/2} >= sum |I_j| / M^{1/2}`.
/// Uses no square roots, so it is exact for rational `T`.
pub fn cauchy_schwarz_certificate<T: Scalar>(decomp: &Decomposition<T>, window: Window) -> bool {
    let lengths: Vec<T> = (window.first..=window.last).map(|j| decomp.length(j)).collect();
    let (a, b) = window.span(decomp);
    let total = lengths.iter().fold(T::zero(), |acc, &l| acc + l);
    let longest = lengths.iter().fold(T::zero(), |m, &l| if l > m { l } else { m });
    let slack = T::identity_slack() * (b - a);
    (total - (b - a)).magnitude() <= slack && lengths.iter().all(|&l| l * longest >= l * l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    type Q = Ratio<i64>;

    #[test]
    fn single_and_equal_windows() {
        let d = Decomposition::from_lengths(0.0, &[2.0; 9], 1.0).unwrap();
        assert_eq!(half_norm_ratio(&d, d.interval(4)), 1.0);
        assert_eq!(largest_fraction(&d, d.interval(4)), 1.0);
        let all = (0.0, 18.0);
        assert!((half_norm_ratio(&d, all) - 3.0).abs() < 1e-15);
        assert_eq!(largest_fraction(&d, all), 1.0 / 9.0);
        assert_eq!(sup_half_norm_ratio(&d).1, Window { first: 0, last: 8 });
    }

    #[test]
    fn partial_containment_is_excluded() {
        let d = Decomposition::from_lengths(Q::from_integer(0), &[Q::from_integer(1); 4], Q::from_integer(1))
            .unwrap();
        let w = (Q::new(1, 2), Q::from_integer(3));
        assert_eq!(largest_fraction(&d, w), Q::new(2, 5));
    }

    #[test]
    fn certificate_on_rationals() {
        let lengths: Vec<Q> = [3, 1, 4, 1, 5, 9, 2, 6].iter().map(|&k| Q::new(k, 7)).collect();
        let d = Decomposition::from_lengths(Q::from_integer(0), &lengths, Q::from_integer(1)).unwrap();
        for first in 0..d.len() {
            for last in first..d.len() {
                assert!(cauchy_schwarz_certificate(&d, Window { first, last }));
            }
        }
    }
}
