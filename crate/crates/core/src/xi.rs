//! Chatterjee's rank correlation for a pair of samples and for every
//! ordered pair of columns of a [`DataMatrix`].
//!
//! For a pair `(x, y)`, sort the observations by `x` and let `r_1..r_n` be
//! the ranks of the matching `y` values. Then
//!
//! ```text
//! xi(x, y) = 1 - 3 * sum_i |r_{i+1} - r_i| / (n^2 - 1)
//! ```
//!
//! The coefficient measures how far `y` is a function of `x`; it is not
//! symmetric. The sum of absolute rank differences is an integer below
//! `n^2` and is accumulated exactly before the single division.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::data::DataMatrix;
use crate::error::{ensure_min, Error, Result};
use crate::rank::{concomitant_ranks, random_order, strict_order, TieBreak};

/// Converts the integer sum of absolute concomitant-rank differences into
/// the coefficient. Both pair routines and the matrix route go through here.
#[inline]
pub fn xi_from_rank_sum(sum: u64, n: usize) -> f64 {
    let denom = (n as u64 * n as u64 - 1) as f64;
    1.0 - 3.0 * sum as f64 / denom
}

/// Upper bound `(n - 2) / (n + 1)`, attained when `y` is strictly monotone in `x`.
pub fn xi_upper_bound(n: usize) -> f64 {
    (n as f64 - 2.0) / (n as f64 + 1.0)
}

/// Chatterjee coefficient of `y` on `x` via concomitant ranks.
pub fn xi_pair(x: &[f64], y: &[f64]) -> Result<f64> {
    ensure_min("n", x.len(), 2)?;
    let c = concomitant_ranks(x, y)?;
    let sum: u64 = c
        .as_slice()
        .windows(2)
        .map(|w| u64::from(w[0].abs_diff(w[1])))
        .sum();
    Ok(xi_from_rank_sum(sum, x.len()))
}

/// Chatterjee coefficient computed through the right-neighbour index:
/// `N(i)` is the observation whose `x` value is the next larger one (or `i`
/// itself for the maximum), and the coefficient is
/// `1 - 3 * sum_i |R_i - R_{N(i)}| / (n^2 - 1)` with `R` the ranks of `y`.
///
/// No sorting is involved: ranks come from direct counting and neighbours
/// from a linear scan per observation, so this is `O(n^2)`. It exists to
/// cross-check [`xi_pair`].
pub fn xi_pair_neighbor(x: &[f64], y: &[f64]) -> Result<f64> {
    let n = x.len();
    if y.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: y.len(),
        });
    }
    ensure_min("n", n, 2)?;
    for (i, (&a, &b)) in x.iter().zip(y).enumerate() {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::NonFiniteValue {
                row: i,
                column: None,
            });
        }
    }
    for v in [x, y] {
        for i in 0..n {
            if let Some(j) = (i + 1..n).find(|&j| v[j] == v[i]) {
                return Err(Error::TiesPresent {
                    column: None,
                    value: v[j],
                });
            }
        }
    }

    let rank_y: Vec<u64> = (0..n)
        .map(|i| y.iter().filter(|&&w| w <= y[i]).count() as u64)
        .collect();

    let mut sum = 0u64;
    for i in 0..n {
        let mut neighbour = i;
        for j in 0..n {
            if x[j] > x[i] && (neighbour == i || x[j] < x[neighbour]) {
                neighbour = j;
            }
        }
        sum += rank_y[i].abs_diff(rank_y[neighbour]);
    }
    Ok(xi_from_rank_sum(sum, n))
}

/// Ranks of every column of a data matrix, laid out row-major so that a
/// pass over consecutive order statistics of one column touches contiguous
/// memory for all other columns.
#[derive(Debug, Clone)]
pub struct RankMatrix {
    n: usize,
    p: usize,
    /// `ranks[i * p + l]` is the rank of observation `i` in column `l`.
    ranks: Vec<u32>,
    /// `orders[k][r]` is the observation with rank `r + 1` in column `k`.
    orders: Vec<Vec<u32>>,
}

impl RankMatrix {
    pub fn new(data: &DataMatrix, ties: TieBreak) -> Result<Self> {
        let (n, p) = (data.n(), data.p());
        let orders: Vec<Vec<usize>> = match ties {
            TieBreak::Reject => data
                .columns()
                .enumerate()
                .map(|(j, col)| strict_order(col, Some(j)))
                .collect::<Result<_>>()?,
            TieBreak::Random(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                data.columns()
                    .enumerate()
                    .map(|(j, col)| random_order(col, Some(j), &mut rng))
                    .collect::<Result<_>>()?
            }
        };
        let mut ranks = vec![0u32; n * p];
        for (l, order) in orders.iter().enumerate() {
            for (r, &i) in order.iter().enumerate() {
                ranks[i * p + l] = r as u32 + 1;
            }
        }
        let orders = orders
            .into_iter()
            .map(|o| o.into_iter().map(|i| i as u32).collect())
            .collect();
        Ok(Self {
            n,
            p,
            ranks,
            orders,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Rank (1-based) of observation `i` in column `l`.
    pub fn rank(&self, i: usize, l: usize) -> u32 {
        self.ranks[i * self.p + l]
    }

    fn row(&self, i: u32) -> &[u32] {
        let start = i as usize * self.p;
        &self.ranks[start..start + self.p]
    }

    /// For conditioning column `k`, the integer rank sums against every column.
    /// Entry `k` is meaningless (it equals `n - 1`).
    fn rank_sums(&self, k: usize) -> Vec<u64> {
        let mut acc = vec![0u64; self.p];
        for w in self.orders[k].windows(2) {
            let (a, b) = (self.row(w[0]), self.row(w[1]));
            for ((s, &x), &y) in acc.iter_mut().zip(a).zip(b) {
                *s += u64::from(x.abs_diff(y));
            }
        }
        acc
    }

    /// Every ordered-pair coefficient. Rows are computed in parallel; each
    /// row is an exact integer computation, so the result does not depend
    /// on the schedule.
    pub fn xi_matrix(&self) -> XiMatrix {
        let n = self.n;
        let rows: Vec<Vec<f64>> = (0..self.p)
            .into_par_iter()
            .map(|k| {
                let mut row: Vec<f64> = self
                    .rank_sums(k)
                    .into_iter()
                    .map(|s| xi_from_rank_sum(s, n))
                    .collect();
                row[k] = f64::NAN;
                row
            })
            .collect();
        XiMatrix {
            n,
            p: self.p,
            values: rows.concat(),
        }
    }
}

/// `p × p` matrix of coefficients `xi[k][l] = xi(column k, column l)`.
///
/// The diagonal is undefined; it is stored as NaN, skipped by every
/// accessor that aggregates, and serialized as `null`.
#[derive(Debug, Clone)]
pub struct XiMatrix {
    n: usize,
    p: usize,
    values: Vec<f64>,
}

impl XiMatrix {
    /// Builds a matrix from row-major entries. Diagonal entries are ignored.
    /// Off-diagonal entries must lie in `[-1, (n - 2) / (n + 1)]`.
    pub fn from_entries(n: usize, p: usize, mut values: Vec<f64>) -> Result<Self> {
        ensure_min("n", n, 2)?;
        if values.len() != p * p {
            return Err(Error::LengthMismatch {
                expected: p * p,
                found: values.len(),
            });
        }
        let upper = xi_upper_bound(n);
        for k in 0..p {
            for l in 0..p {
                let v = &mut values[k * p + l];
                if k == l {
                    *v = f64::NAN;
                } else if !(-1.0..=upper + 1e-12).contains(v) {
                    return Err(Error::DomainError {
                        quantity: "xi",
                        value: *v,
                        domain: "[-1, (n-2)/(n+1)]",
                    });
                }
            }
        }
        Ok(Self { n, p, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// `None` on the diagonal.
    pub fn get(&self, k: usize, l: usize) -> Option<f64> {
        (k != l).then(|| self.values[k * self.p + l])
    }

    /// All `(k, l, xi)` with `k != l`, row-major, 0-based.
    pub fn off_diagonal(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let p = self.p;
        self.values
            .iter()
            .enumerate()
            .filter(move |(idx, _)| idx / p != idx % p)
            .map(move |(idx, &v)| (idx / p, idx % p, v))
    }

    /// Row `k` with `None` on the diagonal.
    pub fn row(&self, k: usize) -> Vec<Option<f64>> {
        (0..self.p).map(|l| self.get(k, l)).collect()
    }
}

impl PartialEq for XiMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.p == other.p
            && self
                .off_diagonal()
                .zip(other.off_diagonal())
                .all(|(a, b)| a.2 == b.2)
    }
}

impl Serialize for XiMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.p))?;
        for k in 0..self.p {
            seq.serialize_element(&self.row(k))?;
        }
        seq.end()
    }
}

/// Coefficient matrix of a data set with tie-free columns.
pub fn xi_matrix(data: &DataMatrix) -> Result<XiMatrix> {
    xi_matrix_with(data, TieBreak::Reject)
}

pub fn xi_matrix_with(data: &DataMatrix, ties: TieBreak) -> Result<XiMatrix> {
    ensure_min("n", data.n(), 2)?;
    Ok(RankMatrix::new(data, ties)?.xi_matrix())
}
