//! Data generators for the twelve simulation models.
//!
//! Example 1 (null): Gaussian, cubed Gaussian, Cauchy and `t(3)` columns.
//! Example 2 (dense): compound symmetry, AR(1), trigonometric features of a
//! Gaussian block plus noise, and `(W, ln W^2 + 3V)`.
//! Example 3 (sparse): one correlated Gaussian pair, and three models where
//! only `X1` depends on `X2` (quadratic, W-shaped and sinusoidal).

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::linalg::cholesky;
use crate::data::DataMatrix;
use crate::error::{ensure_min, Error, Result};

pub const DEFAULT_RHO_COMPOUND: f64 = 0.1;
pub const DEFAULT_RHO_AR1: f64 = 0.3;
pub const DEFAULT_LAMBDA: f64 = 0.05;

/// A simulation model with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "id")]
pub enum Model {
    /// `X ~ N_p(0, I)`.
    E1a,
    /// `X = W^3`, `W ~ N_p(0, I)`.
    E1b,
    /// i.i.d. standard Cauchy.
    E1c,
    /// i.i.d. `t(3)`.
    E1d,
    /// Equicorrelated Gaussian; `rho` is the common off-diagonal correlation.
    E2a { rho: f64 },
    /// Gaussian with `corr(X_i, X_j) = rho^|i-j|`.
    E2b { rho: f64 },
    /// `(W, sin 2πW, cos 2πW, sin 4πW, cos 4πW) + 0.4 U`; needs `5 | p`.
    E2c,
    /// `(W, ln W^2 + 3V)`; needs `p` even.
    E2d,
    /// Gaussian with `corr(X1, X2) = 2.7 sqrt(ln p / n)`, all else independent.
    E3a,
    /// `X1 = X2^2 + Z/3`.
    E3b,
    /// `X1 = |X2 + 0.5| 1{X2 < 0} + |X2 - 0.5| 1{X2 >= 0}`.
    E3c,
    /// `X1 = cos(2π X2) + lambda ε`.
    E3d { lambda: f64 },
}

impl Model {
    pub const IDS: [&'static str; 12] = [
        "E1a", "E1b", "E1c", "E1d", "E2a", "E2b", "E2c", "E2d", "E3a", "E3b", "E3c", "E3d",
    ];

    pub fn id(&self) -> &'static str {
        match self {
            Model::E1a => "E1a",
            Model::E1b => "E1b",
            Model::E1c => "E1c",
            Model::E1d => "E1d",
            Model::E2a { .. } => "E2a",
            Model::E2b { .. } => "E2b",
            Model::E2c => "E2c",
            Model::E2d => "E2d",
            Model::E3a => "E3a",
            Model::E3b => "E3b",
            Model::E3c => "E3c",
            Model::E3d { .. } => "E3d",
        }
    }

    /// True for the models generated under independence.
    pub fn is_null(&self) -> bool {
        matches!(self, Model::E1a | Model::E1b | Model::E1c | Model::E1d)
    }

    pub fn with_rho(self, rho: f64) -> Self {
        match self {
            Model::E2a { .. } => Model::E2a { rho },
            Model::E2b { .. } => Model::E2b { rho },
            other => other,
        }
    }

    pub fn with_lambda(self, lambda: f64) -> Self {
        match self {
            Model::E3d { .. } => Model::E3d { lambda },
            other => other,
        }
    }

    /// Checks the parameters and the shape constraints for dimension `p`.
    pub fn validate(&self, n: usize, p: usize) -> Result<()> {
        ensure_min("n", n, 2)?;
        ensure_min("p", p, 2)?;
        match *self {
            Model::E2a { rho } if !(0.0..1.0).contains(&rho) => Err(Error::DomainError {
                quantity: "rho",
                value: rho,
                domain: "[0, 1)",
            }),
            Model::E2b { rho } if !(rho > -1.0 && rho < 1.0) => Err(Error::DomainError {
                quantity: "rho",
                value: rho,
                domain: "(-1, 1)",
            }),
            Model::E3d { lambda } if !(0.0..=1.0).contains(&lambda) => Err(Error::DomainError {
                quantity: "lambda",
                value: lambda,
                domain: "[0, 1]",
            }),
            Model::E2c if !p.is_multiple_of(5) => Err(Error::BadShape(format!(
                "model E2c needs p divisible by 5, got p = {p}"
            ))),
            Model::E2d if !p.is_multiple_of(2) => Err(Error::BadShape(format!(
                "model E2d needs an even p, got p = {p}"
            ))),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::E2a { rho } | Model::E2b { rho } => write!(f, "{}(rho={rho})", self.id()),
            Model::E3d { lambda } => write!(f, "{}(lambda={lambda})", self.id()),
            _ => f.write_str(self.id()),
        }
    }
}

impl FromStr for Model {
    type Err = String;

    /// Parses a model id with default parameters.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "e1a" => Model::E1a,
            "e1b" => Model::E1b,
            "e1c" => Model::E1c,
            "e1d" => Model::E1d,
            "e2a" => Model::E2a {
                rho: DEFAULT_RHO_COMPOUND,
            },
            "e2b" => Model::E2b {
                rho: DEFAULT_RHO_AR1,
            },
            "e2c" => Model::E2c,
            "e2d" => Model::E2d,
            "e3a" => Model::E3a,
            "e3b" => Model::E3b,
            "e3c" => Model::E3c,
            "e3d" => Model::E3d {
                lambda: DEFAULT_LAMBDA,
            },
            _ => {
                return Err(format!(
                    "unknown model `{s}` (expected one of {})",
                    Model::IDS.join(", ")
                ))
            }
        })
    }
}

/// Signal correlation of model E3a.
pub fn e3a_correlation(n: usize, p: usize) -> f64 {
    2.7 * ((p as f64).ln() / n as f64).sqrt()
}

/// W-shaped link of model E3c.
pub fn w_shape(v: f64) -> f64 {
    if v < 0.0 {
        (v + 0.5).abs()
    } else {
        (v - 0.5).abs()
    }
}

/// Draws samples of a fixed `(model, n, p)`. Anything that does not depend
/// on the random stream (the E3a Cholesky factor) is computed once here.
#[derive(Debug, Clone)]
pub struct Sampler {
    model: Model,
    n: usize,
    p: usize,
    /// Non-zero entries `(column, value)` of each row of the Cholesky factor.
    factor: Vec<Vec<(usize, f64)>>,
}

impl Sampler {
    pub fn new(model: Model, n: usize, p: usize) -> Result<Self> {
        model.validate(n, p)?;
        let factor = if let Model::E3a = model {
            let r = e3a_correlation(n, p);
            let sigma: Vec<Vec<f64>> = (0..p)
                .map(|i| {
                    (0..p)
                        .map(|j| match (i, j) {
                            _ if i == j => 1.0,
                            (0, 1) | (1, 0) => r,
                            _ => 0.0,
                        })
                        .collect()
                })
                .collect();
            cholesky(&sigma)?
                .into_iter()
                .map(|row| {
                    row.into_iter()
                        .enumerate()
                        .filter(|&(_, v)| v != 0.0)
                        .collect()
                })
                .collect()
        } else {
            Vec::new()
        };
        Ok(Self {
            model,
            n,
            p,
            factor,
        })
    }

    pub fn model(&self) -> Model {
        self.model
    }

    /// One sample of `n` i.i.d. rows; a deterministic function of the
    /// generator state.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<DataMatrix> {
        let (n, p) = (self.n, self.p);
        let mut values = vec![0.0; n * p];
        let mut row = vec![0.0; p];
        let mut scratch = vec![0.0; p];
        for i in 0..n {
            self.fill_row(rng, &mut row, &mut scratch);
            for (j, &v) in row.iter().enumerate() {
                values[j * n + i] = v;
            }
        }
        DataMatrix::from_column_major(n, p, values)
    }

    fn fill_row<R: Rng + ?Sized>(&self, rng: &mut R, row: &mut [f64], scratch: &mut [f64]) {
        let p = self.p;
        match self.model {
            Model::E1a => row.iter_mut().for_each(|x| *x = normal(rng)),
            Model::E1b => row.iter_mut().for_each(|x| *x = normal(rng).powi(3)),
            Model::E1c => row
                .iter_mut()
                .for_each(|x| *x = (PI * (rng.random::<f64>() - 0.5)).tan()),
            Model::E1d => row.iter_mut().for_each(|x| {
                let z = normal(rng);
                let chi2: f64 = (0..3).map(|_| normal(rng).powi(2)).sum();
                *x = z / (chi2 / 3.0).sqrt();
            }),
            Model::E2a { rho } => {
                let common = normal(rng);
                let (a, b) = (rho.sqrt(), (1.0 - rho).sqrt());
                row.iter_mut()
                    .for_each(|x| *x = a * common + b * normal(rng));
            }
            Model::E2b { rho } => {
                let b = (1.0 - rho * rho).sqrt();
                row[0] = normal(rng);
                for j in 1..p {
                    row[j] = rho * row[j - 1] + b * normal(rng);
                }
            }
            Model::E2c => {
                let m = p / 5;
                for j in 0..m {
                    let w = normal(rng);
                    row[j] = w;
                    row[m + j] = (2.0 * PI * w).sin();
                    row[2 * m + j] = (2.0 * PI * w).cos();
                    row[3 * m + j] = (4.0 * PI * w).sin();
                    row[4 * m + j] = (4.0 * PI * w).cos();
                }
                row.iter_mut().for_each(|x| *x += 0.4 * normal(rng));
            }
            Model::E2d => {
                let m = p / 2;
                for x in &mut row[..m] {
                    *x = normal(rng);
                }
                for j in 0..m {
                    row[m + j] = (row[j] * row[j]).ln() + 3.0 * normal(rng);
                }
            }
            Model::E3a => {
                scratch.iter_mut().for_each(|z| *z = normal(rng));
                for (x, factor_row) in row.iter_mut().zip(&self.factor) {
                    *x = factor_row.iter().map(|&(j, l)| l * scratch[j]).sum();
                }
            }
            Model::E3b | Model::E3c | Model::E3d { .. } => {
                row[1..].iter_mut().for_each(|x| *x = normal(rng));
                let v = row[1];
                row[0] = match self.model {
                    Model::E3b => v * v + normal(rng) / 3.0,
                    Model::E3c => w_shape(v),
                    Model::E3d { lambda } => (2.0 * PI * v).cos() + lambda * normal(rng),
                    _ => unreachable!(),
                };
            }
        }
    }
}

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Draws one sample from `model`.
pub fn generate<R: Rng + ?Sized>(
    model: Model,
    n: usize,
    p: usize,
    rng: &mut R,
) -> Result<DataMatrix> {
    Sampler::new(model, n, p)?.sample(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(42)
    }

    #[test]
    fn parse_and_display() {
        for id in Model::IDS {
            let m: Model = id.parse().unwrap();
            assert_eq!(m.id(), id);
        }
        assert_eq!("e2a".parse::<Model>().unwrap(), Model::E2a { rho: 0.1 });
        assert_eq!("E2b".parse::<Model>().unwrap(), Model::E2b { rho: 0.3 });
        assert_eq!("E3d".parse::<Model>().unwrap(), Model::E3d { lambda: 0.05 });
        assert!("E4a".parse::<Model>().is_err());
        assert_eq!(Model::E2a { rho: 0.1 }.to_string(), "E2a(rho=0.1)");
    }

    #[test]
    fn shape_constraints() {
        assert!(matches!(
            Model::E2c.validate(50, 101),
            Err(Error::BadShape(_))
        ));
        assert!(Model::E2c.validate(50, 100).is_ok());
        assert!(matches!(
            Model::E2d.validate(50, 7),
            Err(Error::BadShape(_))
        ));
        assert!(Model::E2a { rho: 1.5 }.validate(50, 10).is_err());
        assert!(matches!(
            Model::E1a.validate(1, 10),
            Err(Error::DomainTooSmall { .. })
        ));
    }

    #[test]
    fn e3a_needs_positive_definite_covariance() {
        // 2.7 sqrt(ln 1000 / 5) > 1
        assert!(matches!(
            Sampler::new(Model::E3a, 5, 1000),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn same_stream_same_sample() {
        for id in Model::IDS {
            let m: Model = id.parse().unwrap();
            let a = generate(m, 30, 20, &mut rng()).unwrap();
            let b = generate(m, 30, 20, &mut rng()).unwrap();
            assert_eq!(a, b, "{id}");
        }
    }

    #[test]
    fn structural_relations_hold() {
        let d = generate(Model::E3c, 30, 5, &mut rng()).unwrap();
        for (u, v) in d.column(0).iter().zip(d.column(1)) {
            assert_eq!(*u, w_shape(*v));
        }
        let d = generate(Model::E3d { lambda: 0.0 }, 30, 5, &mut rng()).unwrap();
        for (u, v) in d.column(0).iter().zip(d.column(1)) {
            assert_eq!(*u, (2.0 * PI * v).cos());
        }
        let d = generate(Model::E2d, 30, 6, &mut rng()).unwrap();
        for j in 0..3 {
            // ln W^2 + 3V with V Gaussian: residual after removing ln W^2 has sd 3
            let resid: Vec<f64> = d
                .column(3 + j)
                .iter()
                .zip(d.column(j))
                .map(|(x, w)| (x - (w * w).ln()) / 3.0)
                .collect();
            assert!(resid.iter().all(|r| r.abs() < 6.0));
        }
    }

    #[test]
    fn e2b_lag_one_correlation() {
        let d = generate(Model::E2b { rho: 0.3 }, 20_000, 3, &mut rng()).unwrap();
        let (a, b) = (d.column(0), d.column(1));
        let r: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() / 20_000.0;
        assert!((r - 0.3).abs() < 0.03, "{r}");
    }

    #[test]
    fn e2a_common_correlation() {
        let d = generate(Model::E2a { rho: 0.1 }, 20_000, 4, &mut rng()).unwrap();
        let r: f64 = d
            .column(0)
            .iter()
            .zip(d.column(3))
            .map(|(x, y)| x * y)
            .sum::<f64>()
            / 20_000.0;
        assert!((r - 0.1).abs() < 0.03, "{r}");
    }

    #[test]
    fn e3a_only_first_pair_correlated() {
        let (n, p) = (50, 100);
        let s = Sampler::new(Model::E3a, n, p).unwrap();
        let target = e3a_correlation(n, p);
        // pool many samples to estimate corr(X1, X2) and corr(X1, X3)
        let mut r = rng();
        let (mut c12, mut c13, mut m) = (0.0, 0.0, 0.0);
        for _ in 0..100 {
            let d = s.sample(&mut r).unwrap();
            for i in 0..n {
                c12 += d.column(0)[i] * d.column(1)[i];
                c13 += d.column(0)[i] * d.column(2)[i];
                m += 1.0;
            }
        }
        assert!((c12 / m - target).abs() < 0.03);
        assert!((c13 / m).abs() < 0.03);
    }
}
