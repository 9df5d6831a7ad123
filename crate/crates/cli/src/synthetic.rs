//! Seeded synthetic interval families and the combinatorial self-test run
//! with every scenario.

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use radial_nls::concentration::{
    bourgain_nest, closeness, greedy_subdivide_density, half_norm_ratio, is_dyadic_chain,
    largest_fraction, min_largest_fraction, sup_half_norm_ratio, Decomposition, NestConfig,
};
use radial_nls::Scalar;

use crate::report::SyntheticBlock;

/// `j` intervals with lengths `2^U(-8, 0)`, each exceptional with probability
/// `exceptional_rate`.
pub fn random_family(seed: u64, j: usize, exceptional_rate: f64) -> Decomposition<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lengths: Vec<f64> = (0..j).map(|_| 2f64.powf(rng.random_range(-8.0..0.0))).collect();
    let flags = (0..j).map(|_| rng.random_bool(exceptional_rate)).collect();
    Decomposition::from_lengths(0.0, &lengths, 1.0)
        .and_then(|d| d.with_exceptional(flags))
        .expect("positive lengths")
}

/// Whether the window scans agree with direct enumeration, exactly.
pub fn windows_match_enumeration(d: &Decomposition<f64>) -> bool {
    let mut sup = 0.0f64;
    let mut min_fraction = 1.0f64;
    for first in 0..d.len() {
        for last in first..d.len() {
            let span = (d.boundaries()[first], d.boundaries()[last + 1]);
            let mut sum = 0.0;
            let mut longest = 0.0f64;
            for j in first..=last {
                sum += d.length(j).sqrt();
                longest = longest.max(d.length(j));
            }
            let ratio = sum / (span.1 - span.0).sqrt();
            let fraction = longest / (span.1 - span.0);
            if ratio != half_norm_ratio(d, span) || fraction != largest_fraction(d, span) {
                return false;
            }
            sup = sup.max(ratio);
            min_fraction = min_fraction.min(fraction);
        }
    }
    sup_half_norm_ratio(d).0 == sup && min_largest_fraction(d).0 == min_fraction
}

/// Whether a nest result on `d` satisfies both invariants.
pub fn nest_invariants_hold(d: &Decomposition<f64>, config: &NestConfig) -> bool {
    match bourgain_nest(d, config) {
        Ok(r) => {
            is_dyadic_chain(d, &r.chain)
                && r.chain.iter().all(|&j| !d.exceptional()[j])
                && r.chain.iter().all(|&j| closeness(r.t_star, d.interval(j)) <= r.achieved_kappa)
        }
        Err(radial_nls::Error::AllExceptional) => d.exceptional().iter().all(|&f| f),
        Err(_) => false,
    }
}

/// Largest distance, in sample steps, between the greedy boundaries for the
/// density `f(t) = t` on `[0, 2]` with `eta = 1/2` and the exact points
/// `1, sqrt 2, sqrt 3`.
pub fn ramp_boundary_error() -> f64 {
    let step = Ratio::new(1i64, 100);
    let times: Vec<Ratio<i64>> = (0..=200).map(|k| step * Ratio::from_integer(k)).collect();
    let d = greedy_subdivide_density(&times, &times, Ratio::new(1, 2)).expect("resolved ramp");
    [1.0, 2f64.sqrt(), 3f64.sqrt()]
        .iter()
        .zip(&d.boundaries()[1..])
        .map(|(exact, b)| {
            let e = (b.to_f64() - exact) / step.to_f64();
            if e < -1e-9 {
                f64::INFINITY
            } else {
                e
            }
        })
        .fold(0.0, f64::max)
}

pub fn self_test(seed: u64, families: usize, intervals: usize, config: &NestConfig) -> SyntheticBlock {
    let mut window_mismatches = 0;
    let mut nest_invariant_failures = 0;
    for k in 0..families {
        let d = random_family(seed.wrapping_add(k as u64), intervals, 0.15);
        window_mismatches += usize::from(!windows_match_enumeration(&d));
        nest_invariant_failures += usize::from(!nest_invariants_hold(&d, config));
    }
    SyntheticBlock {
        seed,
        families,
        intervals,
        window_mismatches,
        nest_invariant_failures,
        ramp_boundary_error: ramp_boundary_error(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_families() {
        assert_eq!(random_family(3, 20, 0.15), random_family(3, 20, 0.15));
        assert_ne!(random_family(3, 20, 0.15), random_family(4, 20, 0.15));
    }

    #[test]
    fn self_test_is_clean() {
        let b = self_test(0, 5, 30, &NestConfig::default());
        assert_eq!(b.window_mismatches, 0);
        assert_eq!(b.nest_invariant_failures, 0);
        assert!(b.ramp_boundary_error <= 1.0);
    }
}
