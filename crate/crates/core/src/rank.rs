//! Ranks and concomitant orderings.
//!
//! The rank of `x[i]` is `#{j : x[j] <= x[i]}`, so on tie-free input the
//! ranks form a permutation of `1..=n`. Ranks are computed by sorting an
//! index vector rather than by pairwise counting.

use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How tied observations are handled when ranks are taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TieBreak {
    /// Ties are a violation of the continuity assumption and raise
    /// [`Error::TiesPresent`].
    Reject,
    /// Ties are broken uniformly at random by a generator seeded with the
    /// given value.
    Random(u64),
}

impl TieBreak {
    pub fn seed(self) -> Option<u64> {
        match self {
            TieBreak::Reject => None,
            TieBreak::Random(seed) => Some(seed),
        }
    }
}

/// A permutation of `1..=n` holding the ranks of a sample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankVector(Vec<u32>);

impl RankVector {
    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<u32> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Inverse permutation, 0-based: `order[r]` is the position holding rank `r + 1`.
    pub fn order(&self) -> Vec<usize> {
        let mut order = vec![0; self.0.len()];
        for (i, &r) in self.0.iter().enumerate() {
            order[r as usize - 1] = i;
        }
        order
    }
}

impl PartialEq<Vec<u32>> for RankVector {
    fn eq(&self, other: &Vec<u32>) -> bool {
        &self.0 == other
    }
}

fn check_finite(x: &[f64], column: Option<usize>) -> Result<()> {
    match x.iter().position(|v| !v.is_finite()) {
        Some(row) => Err(Error::NonFiniteValue { row, column }),
        None => Ok(()),
    }
}

fn cmp_values(a: f64, b: f64) -> Ordering {
    // Inputs are finite, so the partial order is total; -0.0 == 0.0 is a tie.
    a.partial_cmp(&b).unwrap_or(Ordering::Equal)
}

/// Indices of `x` in increasing order of value, rejecting ties.
pub(crate) fn strict_order(x: &[f64], column: Option<usize>) -> Result<Vec<usize>> {
    check_finite(x, column)?;
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_unstable_by(|&a, &b| cmp_values(x[a], x[b]));
    if let Some(w) = idx.windows(2).find(|w| x[w[0]] == x[w[1]]) {
        return Err(Error::TiesPresent {
            column,
            value: x[w[0]],
        });
    }
    Ok(idx)
}

/// Indices of `x` in increasing order of value, tied values placed in a
/// uniformly random order.
pub(crate) fn random_order<R: Rng + ?Sized>(
    x: &[f64],
    column: Option<usize>,
    rng: &mut R,
) -> Result<Vec<usize>> {
    check_finite(x, column)?;
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.shuffle(rng);
    // Stable sort keeps the shuffled order within each tie group.
    idx.sort_by(|&a, &b| cmp_values(x[a], x[b]));
    Ok(idx)
}

fn ranks_from_order(order: &[usize]) -> RankVector {
    let mut ranks = vec![0u32; order.len()];
    for (r, &i) in order.iter().enumerate() {
        ranks[i] = r as u32 + 1;
    }
    RankVector(ranks)
}

/// Ranks of a tie-free sample.
pub fn rank_vector(x: &[f64]) -> Result<RankVector> {
    strict_order(x, None).map(|order| ranks_from_order(&order))
}

/// Ranks with ties broken uniformly at random.
pub fn rank_vector_random<R: Rng + ?Sized>(x: &[f64], rng: &mut R) -> Result<RankVector> {
    random_order(x, None, rng).map(|order| ranks_from_order(&order))
}

/// Ranks of `y` listed in the order that sorts `x` increasingly, i.e. the
/// ranks of the concomitants of the order statistics of `x`.
pub fn concomitant_ranks(x: &[f64], y: &[f64]) -> Result<RankVector> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    let order = strict_order(x, None)?;
    let ranks_y = rank_vector(y)?;
    let ry = ranks_y.as_slice();
    Ok(RankVector(order.iter().map(|&i| ry[i]).collect()))
}
