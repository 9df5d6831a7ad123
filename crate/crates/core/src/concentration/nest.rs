use serde::{Deserialize, Serialize};

use super::{Decomposition, NestConfig};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NestResult<T> {
    pub t_star: T,
    /// Selected interval indices, longest first.
    pub chain: Vec<usize>,
    /// Largest `dist(t_*, I_{j_k}) / |I_{j_k}|` along the chain.
    pub achieved_kappa: T,
    /// Configured closeness bound.
    pub kappa: f64,
    /// Whether `achieved_kappa <= kappa`.
    pub within_kappa: bool,
}

impl<T> NestResult<T> {
    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }
}

/// Maximal runs of consecutive indices, in order.
fn runs(indices: &[usize]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for &j in indices {
        match out.last_mut() {
            Some(run) if *run.last().expect("nonempty") + 1 == j => run.push(j),
            _ => out.push(vec![j]),
        }
    }
    out
}

/// The run with the most intervals, lowest position on ties.
fn largest_run(mut runs: Vec<Vec<usize>>) -> Vec<usize> {
    let mut best = 0;
    for (i, r) in runs.iter().enumerate() {
        if r.len() > runs[best].len() {
            best = i;
        }
    }
    if runs.is_empty() {
        Vec::new()
    } else {
        runs.swap_remove(best)
    }
}

/// `dist(t, [a, b]) / (b - a)`.
pub fn closeness<T: Scalar>(t: T, interval: (T, T)) -> T {
    let (a, b) = interval;
    let d = if t < a {
        a - t
    } else if t > b {
        t - b
    } else {
        T::zero()
    };
    d / (b - a)
}

/// Nested chain of intervals with dyadically decaying lengths accumulating at
/// a time `t_*`.
///
/// Exceptional intervals are dropped and the longest run of the rest becomes
/// the current component. Repeatedly: select its longest interval (lowest
/// index on ties), remove every interval longer than `half_factor` times the
/// selection, and continue in the surviving run with the most intervals. The
/// recursion ends on a component with fewer than `floor` intervals; `t_*` is
/// the midpoint of that component, or of the last selection if it is empty.
pub fn bourgain_nest<T: Scalar>(decomp: &Decomposition<T>, config: &NestConfig) -> Result<NestResult<T>> {
    config.validate()?;
    let half = T::from_f64(config.half_factor).expect("half factor representable");
    let lengths = decomp.lengths();
    let unexceptional: Vec<usize> = (0..decomp.len()).filter(|&j| !decomp.exceptional()[j]).collect();
    if unexceptional.is_empty() {
        return Err(Error::AllExceptional);
    }
    let mut component = largest_run(runs(&unexceptional));
    let mut chain = Vec::new();
    while component.len() >= config.floor {
        let mut pick = component[0];
        for &j in &component {
            if lengths[j] > lengths[pick] {
                pick = j;
            }
        }
        chain.push(pick);
        let cap = lengths[pick] * half;
        let survivors: Vec<usize> = component.into_iter().filter(|&j| lengths[j] <= cap).collect();
        component = largest_run(runs(&survivors));
    }
    let two = T::one() + T::one();
    let span = match (component.first(), component.last()) {
        (Some(&f), Some(&l)) => (decomp.boundaries()[f], decomp.boundaries()[l + 1]),
        _ => decomp.interval(*chain.last().ok_or(Error::AllExceptional)?),
    };
    let t_star = (span.0 + span.1) / two;
    let achieved_kappa = chain
        .iter()
        .map(|&j| closeness(t_star, decomp.interval(j)))
        .fold(T::zero(), |m, v| if v > m { v } else { m });
    Ok(NestResult {
        t_star,
        within_kappa: achieved_kappa.to_f64() <= config.kappa,
        achieved_kappa,
        kappa: config.kappa,
        chain,
    })
}

/// Whether consecutive chain lengths satisfy `|I_{j_k}| >= 2 |I_{j_{k+1}}|`, exactly.
pub fn is_dyadic_chain<T: Scalar>(decomp: &Decomposition<T>, chain: &[usize]) -> bool {
    let two = T::one() + T::one();
    chain
        .windows(2)
        .all(|w| decomp.length(w[0]) >= two * decomp.length(w[1]))
}

/// Longest dyadic chain of unexceptional intervals among `range` whose
/// closeness to some common time is at most `kappa`, by exhaustive search.
/// Exponential in the range length; refuses more than 20 intervals.
pub fn longest_chain<T: Scalar>(
    decomp: &Decomposition<T>,
    kappa: T,
    range: std::ops::Range<usize>,
) -> Result<Vec<usize>> {
    let candidates: Vec<usize> = range
        .filter(|&j| j < decomp.len() && !decomp.exceptional()[j])
        .collect();
    if candidates.len() > 20 {
        return Err(crate::error::invalid(
            "range",
            format!("{} candidates, exhaustive search is limited to 20", candidates.len()),
        ));
    }
    let mut best: Vec<usize> = Vec::new();
    for mask in 1u32..(1u32 << candidates.len()) {
        if (mask.count_ones() as usize) <= best.len() {
            continue;
        }
        let mut chain: Vec<usize> = (0..candidates.len())
            .filter(|&k| mask >> k & 1 == 1)
            .map(|k| candidates[k])
            .collect();
        chain.sort_by(|&a, &b| {
            decomp
                .length(b)
                .partial_cmp(&decomp.length(a))
                .expect("ordered lengths")
        });
        if !is_dyadic_chain(decomp, &chain) {
            continue;
        }
        let mut lo = None;
        let mut hi = None;
        for &j in &chain {
            let (a, b) = decomp.interval(j);
            let pad = kappa * decomp.length(j);
            let (l, h) = (a - pad, b + pad);
            lo = Some(match lo {
                Some(v) if v >= l => v,
                _ => l,
            });
            hi = Some(match hi {
                Some(v) if v <= h => v,
                _ => h,
            });
        }
        if lo <= hi {
            best = chain;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    type Q = Ratio<i64>;

    fn q(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&k| Q::from_integer(k)).collect()
    }

    #[test]
    fn dyadic_staircase() {
        let d = Decomposition::from_lengths(Q::from_integer(0), &q(&[8, 4, 2, 1]), Q::from_integer(1)).unwrap();
        let r = bourgain_nest(&d, &NestConfig::default()).unwrap();
        assert_eq!(r.chain, vec![0, 1, 2, 3]);
        assert_eq!(r.t_star, Q::new(29, 2));
        assert!(is_dyadic_chain(&d, &r.chain));
        assert_eq!(r.achieved_kappa, Q::new(13, 16));
    }

    #[test]
    fn exhaustive_search_beats_greedy_runs() {
        // the long run of unit intervals is preferred over the shorter run
        // holding the 2 and 1 that would extend the chain
        let mut lengths = vec![8];
        lengths.extend([1; 10]);
        lengths.extend([4, 2, 1]);
        let d = Decomposition::from_lengths(Q::from_integer(0), &q(&lengths), Q::from_integer(1)).unwrap();
        let r = bourgain_nest(&d, &NestConfig::default()).unwrap();
        assert_eq!(r.chain, vec![0, 11, 1]);
        let best = longest_chain(&d, r.achieved_kappa, 0..d.len()).unwrap();
        assert_eq!(best.len(), 4);
        assert!(is_dyadic_chain(&d, &best));
    }

    #[test]
    fn single_interval() {
        let d = Decomposition::from_lengths(Q::from_integer(2), &q(&[3]), Q::from_integer(1)).unwrap();
        let r = bourgain_nest(&d, &NestConfig::default()).unwrap();
        assert_eq!(r.chain, vec![0]);
        assert_eq!(r.t_star, Q::new(7, 2));
        assert_eq!(r.achieved_kappa, Q::from_integer(0));
    }

    #[test]
    fn ties_go_to_lowest_index() {
        let d = Decomposition::from_lengths(0.0, &[1.0, 4.0, 4.0, 1.0], 1.0).unwrap();
        let r = bourgain_nest(&d, &NestConfig::default()).unwrap();
        assert_eq!(r.chain, vec![1, 0]);
    }

    #[test]
    fn exceptional_intervals_split_components() {
        let d = Decomposition::from_lengths(0.0, &[8.0, 1.0, 1.0, 1.0, 4.0], 1.0)
            .unwrap()
            .with_exceptional(vec![false, false, true, false, false])
            .unwrap();
        let r = bourgain_nest(&d, &NestConfig::default()).unwrap();
        assert_eq!(r.chain, vec![0, 1]);
        let all = d.clone().with_exceptional(vec![true; 5]).unwrap();
        assert!(matches!(bourgain_nest(&all, &NestConfig::default()), Err(Error::AllExceptional)));
    }

    #[test]
    fn floor_stops_early() {
        let d = Decomposition::from_lengths(0.0, &[8.0, 4.0, 2.0, 1.0], 1.0).unwrap();
        let cfg = NestConfig { floor: 2, ..NestConfig::default() };
        let r = bourgain_nest(&d, &cfg).unwrap();
        assert_eq!(r.chain, vec![0, 1, 2]);
        assert_eq!(r.t_star, 14.5);
    }
}
