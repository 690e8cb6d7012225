//! Tests of complete independence built on the coefficient matrix.
//!
//! * Quadratic: `J = (sum_{k != l} xi_kl^2 - mu_np) / sigma_np`, calibrated
//!   against `N(0, 1)`.
//! * Extreme: `M = max_{k != l} xi_kl^2 / u_n - c_p`, calibrated against the
//!   Gumbel-type limit in [`crate::calibration`].
//! * Enhanced: `J_E = J_0 + J`, where the screening component `J_0` is
//!   non-zero only when some `|xi_kl|` exceeds `sqrt(u_n) * delta_np`.
//!
//! All three are one-sided; a statistic equal to its critical value is not
//! a rejection.

use serde::{Deserialize, Serialize};

use crate::calibration::{cp, gumbel_quantile, gumbel_sf, normal_quantile, normal_sf};
use crate::data::DataMatrix;
use crate::error::{ensure_min, Error, Result};
use crate::moments::{stat_moments, u_n, MIN_N_TEST};
use crate::rank::TieBreak;
use crate::xi::{xi_matrix_with, XiMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TestKind {
    Quadratic,
    Extreme,
    Enhanced,
}

impl TestKind {
    pub const ALL: [TestKind; 3] = [TestKind::Quadratic, TestKind::Extreme, TestKind::Enhanced];

    /// Column heading used in tables.
    pub fn symbol(self) -> &'static str {
        match self {
            TestKind::Quadratic => "J_ξ",
            TestKind::Extreme => "M_ξ",
            TestKind::Enhanced => "J_E",
        }
    }
}

impl std::str::FromStr for TestKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "quadratic" | "j" | "jxi" => Ok(TestKind::Quadratic),
            "extreme" | "m" | "mxi" => Ok(TestKind::Extreme),
            "enhanced" | "je" => Ok(TestKind::Enhanced),
            other => Err(format!("unknown test kind `{other}`")),
        }
    }
}

fn check_dims(n: usize, p: usize) -> Result<()> {
    ensure_min("n", n, MIN_N_TEST)?;
    ensure_min("p", p, 2)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::DomainError {
            quantity: "alpha",
            value: alpha,
            domain: "(0, 1)",
        })
    }
}

/// Screening threshold multiplier `delta_np = sqrt(c_p) * ln ln n`.
pub fn delta_np(n: usize, p: usize) -> Result<f64> {
    check_dims(n, p)?;
    Ok(cp(p)?.sqrt() * (n as f64).ln().ln())
}

/// `sqrt(u_n) * delta_np`, the bar a coefficient has to clear to be screened.
pub fn screening_threshold(n: usize, p: usize) -> Result<f64> {
    Ok(u_n(n)?.sqrt() * delta_np(n, p)?)
}

/// Sum of `xi_kl^2` over all ordered pairs.
fn sum_of_squares(xi: &XiMatrix) -> f64 {
    xi.off_diagonal().map(|(_, _, v)| v * v).sum()
}

pub fn quadratic_stat(xi: &XiMatrix) -> Result<f64> {
    check_dims(xi.n(), xi.p())?;
    let m = stat_moments(xi.n(), xi.p())?;
    Ok((sum_of_squares(xi) - m.mu_np) / m.sigma_np2.sqrt())
}

pub fn extreme_stat(xi: &XiMatrix) -> Result<f64> {
    check_dims(xi.n(), xi.p())?;
    let max_abs = xi
        .off_diagonal()
        .map(|(_, _, v)| v.abs())
        .fold(0.0, f64::max);
    Ok(max_abs * max_abs / u_n(xi.n())? - cp(xi.p())?)
}

/// A screened pair, 1-based to match reader-facing column numbering.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScreenedPair {
    pub k: usize,
    pub l: usize,
    pub xi: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l_label: Option<String>,
}

/// Pairs with `|xi_kl| > sqrt(u_n) * delta_np`, sorted by `(k, l)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScreeningSet {
    pub pairs: Vec<ScreenedPair>,
    pub threshold: f64,
}

impl ScreeningSet {
    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    fn attach_labels(&mut self, labels: &[String]) {
        for pair in &mut self.pairs {
            pair.k_label = labels.get(pair.k - 1).cloned();
            pair.l_label = labels.get(pair.l - 1).cloned();
        }
    }
}

pub fn screening_set(xi: &XiMatrix) -> Result<ScreeningSet> {
    let threshold = screening_threshold(xi.n(), xi.p())?;
    // off_diagonal() is row-major, hence already in (k, l) order
    let pairs = xi
        .off_diagonal()
        .filter(|&(_, _, v)| v.abs() > threshold)
        .map(|(k, l, v)| ScreenedPair {
            k: k + 1,
            l: l + 1,
            xi: v,
            k_label: None,
            l_label: None,
        })
        .collect();
    Ok(ScreeningSet { pairs, threshold })
}

fn j0_of(set: &ScreeningSet, n: usize, p: usize) -> Result<f64> {
    if set.is_empty() {
        return Ok(0.0);
    }
    let u = u_n(n)?;
    let sum: f64 = set.pairs.iter().map(|s| s.xi * s.xi / u).sum();
    Ok(((p * (p - 1)) as f64).sqrt() * sum)
}

/// Screening component `J_0 = sqrt(p (p - 1)) * sum_{screened} xi_kl^2 / u_n`.
pub fn j0(xi: &XiMatrix) -> Result<f64> {
    j0_of(&screening_set(xi)?, xi.n(), xi.p())
}

/// Every statistic derived from one coefficient matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Statistics {
    pub n: usize,
    pub p: usize,
    pub quadratic: f64,
    pub extreme: f64,
    pub j0: f64,
    pub enhanced: f64,
    pub screening: ScreeningSet,
}

impl Statistics {
    pub fn compute(xi: &XiMatrix) -> Result<Self> {
        let (n, p) = (xi.n(), xi.p());
        let quadratic = quadratic_stat(xi)?;
        let extreme = extreme_stat(xi)?;
        let screening = screening_set(xi)?;
        let j0 = j0_of(&screening, n, p)?;
        let enhanced = j0 + quadratic;
        Ok(Self {
            n,
            p,
            quadratic,
            extreme,
            j0,
            enhanced,
            screening,
        })
    }

    pub fn statistic(&self, kind: TestKind) -> f64 {
        match kind {
            TestKind::Quadratic => self.quadratic,
            TestKind::Extreme => self.extreme,
            TestKind::Enhanced => self.enhanced,
        }
    }

    /// Decision at level `alpha` against the precomputed critical value.
    pub fn rejects(&self, kind: TestKind, critical: f64) -> bool {
        self.statistic(kind) > critical
    }

    pub fn report(&self, kind: TestKind, alpha: f64, seed: Option<u64>) -> Result<TestReport> {
        check_alpha(alpha)?;
        let statistic = self.statistic(kind);
        let threshold = critical_value(kind, alpha)?;
        let p_value = match kind {
            TestKind::Extreme => gumbel_sf(statistic),
            TestKind::Quadratic | TestKind::Enhanced => normal_sf(statistic),
        };
        let (screened_pairs, j0) = match kind {
            TestKind::Enhanced => (self.screening.pairs.clone(), self.j0),
            _ => (Vec::new(), 0.0),
        };
        Ok(TestReport {
            kind,
            statistic,
            p_value,
            reject: statistic > threshold,
            alpha,
            n: self.n,
            p: self.p,
            threshold,
            screened: kind == TestKind::Enhanced && !self.screening.is_empty(),
            screened_pairs,
            j0,
            seed,
        })
    }
}

/// Upper-`alpha` critical value of the reference law for `kind`.
pub fn critical_value(kind: TestKind, alpha: f64) -> Result<f64> {
    match kind {
        TestKind::Extreme => gumbel_quantile(alpha),
        TestKind::Quadratic | TestKind::Enhanced => normal_quantile(alpha),
    }
}

/// Outcome of one test on one data set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub kind: TestKind,
    pub statistic: f64,
    pub p_value: f64,
    pub reject: bool,
    pub alpha: f64,
    pub n: usize,
    pub p: usize,
    pub threshold: f64,
    /// True when the screening set is non-empty (Enhanced only); the
    /// p-value is then dominated by the screening component.
    pub screened: bool,
    pub screened_pairs: Vec<ScreenedPair>,
    pub j0: f64,
    pub seed: Option<u64>,
}

/// Runs each requested test on `data`, computing the coefficient matrix once.
pub fn run_tests(
    data: &DataMatrix,
    kinds: &[TestKind],
    alpha: f64,
    ties: TieBreak,
) -> Result<Vec<TestReport>> {
    check_dims(data.n(), data.p())?;
    check_alpha(alpha)?;
    let xi = xi_matrix_with(data, ties)?;
    let mut stats = Statistics::compute(&xi)?;
    stats.screening.attach_labels(data.labels());
    kinds
        .iter()
        .map(|&kind| stats.report(kind, alpha, ties.seed()))
        .collect()
}

pub fn run_test(
    data: &DataMatrix,
    kind: TestKind,
    alpha: f64,
    ties: TieBreak,
) -> Result<TestReport> {
    run_tests(data, &[kind], alpha, ties).map(|mut v| v.remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    /// Off-diagonal entries all equal to `v`.
    fn constant(n: usize, p: usize, v: f64) -> XiMatrix {
        XiMatrix::from_entries(n, p, vec![v; p * p]).unwrap()
    }

    fn single(n: usize, p: usize, v: f64) -> XiMatrix {
        let mut e = vec![0.0; p * p];
        e[1] = v;
        XiMatrix::from_entries(n, p, e).unwrap()
    }

    #[test]
    fn quadratic_is_centred() {
        // every entry at sqrt(u_n) makes the sum equal to mu_np
        let (n, p) = (20, 6);
        let xi = constant(n, p, u_n(n).unwrap().sqrt());
        assert!(quadratic_stat(&xi).unwrap().abs() < 1e-12);
    }

    #[test]
    fn quadratic_of_zero_matrix() {
        let (n, p) = (10, 4);
        let m = stat_moments(n, p).unwrap();
        let expected = -m.mu_np / m.sigma_np2.sqrt();
        assert!(rel(quadratic_stat(&constant(n, p, 0.0)).unwrap(), expected) < 1e-14);
    }

    #[test]
    fn extreme_examples() {
        assert!(
            rel(
                extreme_stat(&constant(5, 100, 0.0)).unwrap(),
                -cp(100).unwrap()
            ) < 1e-15
        );
        let m = extreme_stat(&single(5, 100, 0.5)).unwrap();
        assert!((m - (-12.053_389_158_646_89)).abs() < 1e-9, "{m}");
    }

    #[test]
    fn delta_and_threshold() {
        // sqrt(18.207235312493044) * ln ln 50
        assert!((delta_np(50, 100).unwrap() - 5.820_412_537_242_921).abs() < 1e-12);
        // sqrt(u_50) * delta with u_50 = 48 * 193 / (10 * 49^2 * 51)
        let u50 = 48.0 * 193.0 / (10.0 * 49.0 * 49.0 * 51.0);
        assert!(rel(u_n(50).unwrap(), u50) < 1e-15);
        assert!(
            rel(
                screening_threshold(50, 100).unwrap(),
                u50.sqrt() * 5.820_412_537_242_921
            ) < 1e-12
        );
        assert!(delta_np(4, 100).is_err());
        assert!(delta_np(51, 100).unwrap() > delta_np(50, 100).unwrap());
        assert!(delta_np(50, 101).unwrap() > delta_np(50, 100).unwrap());
    }

    #[test]
    fn screening_examples() {
        assert!(screening_set(&constant(50, 100, 0.0)).unwrap().is_empty());
        let set = screening_set(&single(50, 100, 0.9)).unwrap();
        assert_eq!(set.len(), 1);
        assert_eq!((set.pairs[0].k, set.pairs[0].l), (1, 2));
        assert!((set.threshold - 0.506_257_969_155_098_6).abs() < 1e-12);
    }

    #[test]
    fn screening_is_strict() {
        let (n, p) = (50, 10);
        let t = screening_threshold(n, p).unwrap();
        let mut e = vec![0.0; p * p];
        e[1] = t;
        e[2] = -t;
        let xi = XiMatrix::from_entries(n, p, e).unwrap();
        assert!(screening_set(&xi).unwrap().is_empty());
    }

    #[test]
    fn j0_examples() {
        assert_eq!(j0(&constant(50, 100, 0.0)).unwrap(), 0.0);
        let v = j0(&single(50, 100, 0.9)).unwrap();
        // sqrt(9900) * 0.81 / u_50
        assert!(rel(v, 10_652.864_572_055_874) < 1e-12, "{v}");
        let floor = (9900f64).sqrt() * delta_np(50, 100).unwrap().powi(2);
        assert!(v > floor);
    }

    #[test]
    fn enhanced_equals_quadratic_without_screening() {
        let xi = constant(30, 8, 0.05);
        let s = Statistics::compute(&xi).unwrap();
        assert!(s.screening.is_empty());
        assert_eq!(s.enhanced, s.quadratic);
    }

    #[test]
    fn negative_coefficients_are_screened_by_magnitude() {
        let xi = single(50, 100, -0.6);
        assert_eq!(screening_set(&xi).unwrap().len(), 1);
    }

    #[test]
    fn report_consistency() {
        let s = Statistics::compute(&single(50, 100, 0.9)).unwrap();
        for kind in TestKind::ALL {
            let r = s.report(kind, 0.05, None).unwrap();
            assert_eq!(r.reject, r.statistic > r.threshold);
            assert_eq!(r.reject, r.p_value < r.alpha);
            assert_eq!(r.screened_pairs.is_empty(), kind != TestKind::Enhanced);
        }
        assert!(s.report(TestKind::Quadratic, 1.0, None).is_err());
    }

    #[test]
    fn small_dimensions_rejected() {
        let xi = XiMatrix::from_entries(4, 3, vec![0.0; 9]).unwrap();
        assert!(matches!(
            quadratic_stat(&xi),
            Err(Error::DomainTooSmall { .. })
        ));
        assert!(matches!(
            screening_set(&xi),
            Err(Error::DomainTooSmall { .. })
        ));
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("Enhanced".parse::<TestKind>().unwrap(), TestKind::Enhanced);
        assert!("bogus".parse::<TestKind>().is_err());
    }
}
