//! Exact null moments of the squared coefficient.
//!
//! Under independence the concomitant rank vector is a uniformly random
//! permutation, so every moment below is a rational function of `n` alone.
//! The closed forms hold for `n >= 4`; [`exact_moments_by_enumeration`]
//! recomputes them from all `n!` permutations for small `n`.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_min, Error, Result};

/// Smallest `n` accepted by the moment formulas.
pub const MIN_N_FORMULA: usize = 3;

/// Largest `n` accepted by the enumeration oracle.
pub const MAX_N_ENUMERATION: usize = 8;

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().fold(0.0, |acc, &c| acc * x + c)
}

/// `E xi^2` under the null: `(n-2)(4n-7) / (10 (n-1)^2 (n+1))`.
pub fn u_n(n: usize) -> Result<f64> {
    ensure_min("n", n, MIN_N_FORMULA)?;
    let x = n as f64;
    Ok((x - 2.0) * (4.0 * x - 7.0) / (10.0 * (x - 1.0).powi(2) * (x + 1.0)))
}

/// `Var xi^2` under the null.
pub fn v_n2(n: usize) -> Result<f64> {
    ensure_min("n", n, MIN_N_FORMULA)?;
    let x = n as f64;
    let num = horner(&[224.0, -1792.0, 5051.0, -4969.0, -2458.0, 18128.0], x);
    let den = 700.0 * (x - 1.0).powi(4) * (x + 1.0).powi(3);
    Ok(num / den)
}

/// `Cov(xi_kl^2, xi_lk^2)` under the null.
pub fn cov_xi2(n: usize) -> Result<f64> {
    ensure_min("n", n, MIN_N_FORMULA)?;
    let x = n as f64;
    let num = (x - 2.0) * horner(&[784.0, -8022.0, 27301.0, -24228.0, -5045.0, -44070.0], x);
    let den = 50.0 * x * (x + 1.0).powi(4) * (x - 1.0).powi(5);
    Ok(num / den)
}

/// `Var(T_np) / (p (p - 1))`, the per-pair variance of the quadratic sum.
fn sigma2_per_pair(n: usize) -> f64 {
    let x = n as f64;
    let num = horner(
        &[
            224.0, -1792.0, 15803.0, -137437.0, 599321.0, -1080523.0, 610212.0, -493848.0,
            1233960.0,
        ],
        x,
    );
    let den = 700.0 * x * (1.0 + x).powi(4) * (x - 1.0).powi(5);
    num / den
}

/// Per-pair null constants for a fixed sample size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NullMoments {
    pub n: usize,
    pub u_n: f64,
    pub v_n2: f64,
    pub cov_n: f64,
}

impl NullMoments {
    pub fn new(n: usize) -> Result<Self> {
        Ok(Self {
            n,
            u_n: u_n(n)?,
            v_n2: v_n2(n)?,
            cov_n: cov_xi2(n)?,
        })
    }
}

/// Null mean and variance of `T_np = sum_{k != l} xi_kl^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatMoments {
    pub mu_np: f64,
    pub sigma_np2: f64,
}

/// Minimum sample size for any hypothesis test.
pub const MIN_N_TEST: usize = 5;

pub fn stat_moments(n: usize, p: usize) -> Result<StatMoments> {
    ensure_min("n", n, MIN_N_TEST)?;
    ensure_min("p", p, 2)?;
    let pairs = (p * (p - 1)) as f64;
    Ok(StatMoments {
        mu_np: pairs * u_n(n)?,
        sigma_np2: pairs * sigma2_per_pair(n),
    })
}

/// Moments of the coefficient over all `n!` equally likely concomitant
/// rank vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnumeratedMoments {
    pub n: usize,
    pub mean_xi: f64,
    pub mean_xi2: f64,
    pub var_xi2: f64,
    /// `E[xi^2(pi) xi^2(pi^-1)] - (E xi^2)^2`.
    pub cov_xi2: f64,
}

fn rank_diff_sum(perm: &[u8]) -> i128 {
    perm.windows(2)
        .map(|w| i128::from(w[0].abs_diff(w[1])))
        .sum()
}

/// Enumerates every permutation `pi` of `1..=n`, treating `pi` as the
/// concomitant ranks of `xi(identity, pi)` and `pi^-1` as those of the
/// reversed pair.
///
/// With `D = n^2 - 1` each coefficient is `a / D` for an integer `a`, so
/// all four moments are exact ratios of `i128` sums; the only rounding is
/// the final conversion to `f64`.
pub fn exact_moments_by_enumeration(n: usize) -> Result<EnumeratedMoments> {
    ensure_min("n", n, MIN_N_FORMULA)?;
    if n > MAX_N_ENUMERATION {
        return Err(Error::TooLarge {
            quantity: "n",
            value: n,
            max: MAX_N_ENUMERATION,
        });
    }
    let d = (n * n - 1) as i128;
    let mut count: i128 = 0;
    let (mut s1, mut s2, mut s4, mut s22) = (0i128, 0i128, 0i128, 0i128);

    let mut perm: Vec<u8> = (0..n as u8).collect();
    let mut inverse = vec![0u8; n];
    let mut visit = |perm: &[u8]| {
        for (i, &v) in perm.iter().enumerate() {
            inverse[v as usize] = i as u8;
        }
        let a = d - 3 * rank_diff_sum(perm);
        let b = d - 3 * rank_diff_sum(&inverse);
        count += 1;
        s1 += a;
        s2 += a * a;
        s4 += a * a * a * a;
        s22 += a * a * b * b;
    };

    // Heap's algorithm, iterative form.
    let mut c = vec![0usize; n];
    visit(&perm);
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            visit(&perm);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }

    let d2 = d * d;
    let d4 = d2 * d2;
    // Var = (N s4 - s2^2) / (N^2 D^4), Cov = (N s22 - s2^2) / (N^2 D^4)
    let var_num = count * s4 - s2 * s2;
    let cov_num = count * s22 - s2 * s2;
    let big_den = (count * count * d4) as f64;
    Ok(EnumeratedMoments {
        n,
        mean_xi: s1 as f64 / (count * d) as f64,
        mean_xi2: s2 as f64 / (count * d2) as f64,
        var_xi2: var_num as f64 / big_den,
        cov_xi2: cov_num as f64 / big_den,
    })
}
