//! Order statistics of `k`-subset sums of a spectrum.
//!
//! `S_{k,i}` is the `i`-th smallest element of the multiset of sums over all
//! `k`-subsets of eigenvalue positions. Sums are produced in nondecreasing
//! order by a best-first walk: start from the `k` smallest values and, on
//! each pop, push every subset obtained by advancing one index by one place
//! (if the next place is free). Visited subsets are remembered so each one is
//! produced exactly once.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use ordered_float::OrderedFloat;
use serde::Serialize;

use crate::complex::binomial;
use crate::error::{Error, Result};

/// Largest `C(n, k)` the exhaustive enumerator accepts.
pub const EXHAUSTIVE_CAP: u64 = 100_000;

/// Relative cushion applied to threshold comparisons.
const THRESHOLD_CUSHION: f64 = 1e-9;

fn sorted(eigs: &[f64]) -> Vec<f64> {
    let mut v = eigs.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

fn check_k(n: usize, k: usize) -> Result<()> {
    if k < 1 || k > n {
        return Err(Error::InvalidParameter(format!(
            "subset size {k} outside 1..={n}"
        )));
    }
    Ok(())
}

/// Iterator over `(sum, positions)` in nondecreasing order of `sum`.
pub struct SubsetSumWalk {
    values: Vec<f64>,
    k: usize,
    heap: BinaryHeap<Reverse<(OrderedFloat<f64>, Vec<usize>)>>,
    seen: HashSet<Vec<usize>>,
}

impl SubsetSumWalk {
    pub fn new(eigs: &[f64], k: usize) -> Result<Self> {
        check_k(eigs.len(), k)?;
        let mut walk = SubsetSumWalk {
            values: sorted(eigs),
            k,
            heap: BinaryHeap::new(),
            seen: HashSet::new(),
        };
        walk.push((0..k).collect());
        Ok(walk)
    }

    fn push(&mut self, positions: Vec<usize>) {
        if self.seen.insert(positions.clone()) {
            let sum: f64 = positions.iter().map(|&i| self.values[i]).sum();
            self.heap.push(Reverse((OrderedFloat(sum), positions)));
        }
    }
}

impl Iterator for SubsetSumWalk {
    type Item = (f64, Vec<usize>);

    fn next(&mut self) -> Option<Self::Item> {
        let Reverse((sum, positions)) = self.heap.pop()?;
        let n = self.values.len();
        for t in 0..self.k {
            let limit = positions.get(t + 1).copied().unwrap_or(n);
            if positions[t] + 1 < limit {
                let mut next = positions.clone();
                next[t] += 1;
                self.push(next);
            }
        }
        Some((sum.0, positions))
    }
}

/// The `count` smallest `k`-subset sums, ascending.
pub fn smallest_subset_sums(eigs: &[f64], k: usize, count: usize) -> Result<Vec<f64>> {
    let total = binomial(eigs.len(), k);
    if count as u64 > total {
        return Err(Error::IndexOutOfRange {
            index: count,
            len: total as usize,
        });
    }
    Ok(SubsetSumWalk::new(eigs, k)?
        .take(count)
        .map(|(s, _)| s)
        .collect())
}

/// `S_{k,i}`, with `i` 1-based.
pub fn s_stat(eigs: &[f64], k: usize, i: usize) -> Result<f64> {
    check_k(eigs.len(), k)?;
    let total = binomial(eigs.len(), k);
    if i < 1 || i as u64 > total {
        return Err(Error::IndexOutOfRange {
            index: i,
            len: total as usize,
        });
    }
    Ok(*smallest_subset_sums(eigs, k, i)?.last().expect("i >= 1"))
}

/// Every `k`-subset sum, sorted. Cross-check path for small instances.
pub fn subset_sums_exhaustive(eigs: &[f64], k: usize) -> Result<Vec<f64>> {
    check_k(eigs.len(), k)?;
    let total = binomial(eigs.len(), k);
    if total > EXHAUSTIVE_CAP {
        return Err(Error::TooLarge {
            order: total as usize,
            cap: EXHAUSTIVE_CAP as usize,
        });
    }
    let values = sorted(eigs);
    let mut sums: Vec<f64> = super::k_subsets(values.len(), k)
        .into_iter()
        .map(|s| s.iter().map(|&i| values[i]).sum())
        .collect();
    sums.sort_by(f64::total_cmp);
    Ok(sums)
}

/// Result of comparing all `k`-subset sums against a threshold.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThresholdCount {
    /// Subsets with sum at most `threshold + cushion`.
    pub count: u64,
    /// Subsets whose sum lies within `cushion` of the threshold; their side
    /// of the comparison is not decidable from floating-point spectra.
    pub near_ties: u64,
    pub cushion: f64,
}

pub fn threshold_count(eigs: &[f64], k: usize, threshold: f64) -> Result<ThresholdCount> {
    let cushion = THRESHOLD_CUSHION * threshold.abs().max(1.0);
    let mut count = 0u64;
    let mut near_ties = 0u64;
    for (sum, _) in SubsetSumWalk::new(eigs, k)? {
        if sum > threshold + cushion {
            break;
        }
        count += 1;
        if sum >= threshold - cushion {
            near_ties += 1;
        }
    }
    Ok(ThresholdCount {
        count,
        near_ties,
        cushion,
    })
}

/// `|{A ∈ C([n], k) : Σ_{i∈A} λ_i ≤ threshold}|`.
pub fn count_subset_sums_at_most(eigs: &[f64], k: usize, threshold: f64) -> Result<u64> {
    Ok(threshold_count(eigs, k, threshold)?.count)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s_stat_examples() {
        let e = [1.0, 2.0, 3.0];
        assert_eq!(s_stat(&e, 2, 1).unwrap(), 3.0);
        assert_eq!(s_stat(&e, 2, 2).unwrap(), 4.0);
        assert_eq!(s_stat(&e, 2, 3).unwrap(), 5.0);
        for i in 1..=3 {
            assert_eq!(s_stat(&[3.0, 3.0, 3.0], 2, i).unwrap(), 6.0);
        }
        assert!(matches!(
            s_stat(&e, 2, 4),
            Err(Error::IndexOutOfRange { index: 4, len: 3 })
        ));
        assert!(matches!(
            s_stat(&e, 2, 0),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(s_stat(&e, 4, 1).is_err());
    }

    #[test]
    fn unsorted_input_is_sorted_first() {
        assert_eq!(s_stat(&[3.0, 1.0, 2.0], 2, 1).unwrap(), 3.0);
    }

    #[test]
    fn counts() {
        assert_eq!(
            count_subset_sums_at_most(&[3.0, 3.0, 3.0], 2, 6.0).unwrap(),
            3
        );
        assert_eq!(
            count_subset_sums_at_most(&[3.0, 3.0, 3.0], 2, 5.9).unwrap(),
            0
        );
        assert_eq!(
            count_subset_sums_at_most(&[0.0, 1.0, 2.0, 3.0], 2, 3.0).unwrap(),
            4
        );
        let t = threshold_count(&[3.0, 3.0, 3.0], 2, 6.0).unwrap();
        assert_eq!(t.near_ties, 3);
    }

    #[test]
    fn walk_visits_every_subset_once() {
        let e = [0.5, 0.5, 1.0, 2.0, 2.0, 7.0];
        for k in 1..=6 {
            let walked: Vec<f64> = SubsetSumWalk::new(&e, k).unwrap().map(|(s, _)| s).collect();
            assert_eq!(walked.len() as u64, binomial(6, k));
            assert!(walked.windows(2).all(|w| w[0] <= w[1]));
            assert_eq!(walked, subset_sums_exhaustive(&e, k).unwrap());
        }
    }
}
