//! High-dimensional tests of complete independence based on Chatterjee's
//! rank correlation.
//!
//! Given an `n × p` sample, the coefficient `xi_kl` is computed for every
//! ordered pair of columns and combined into three statistics:
//!
//! * a quadratic statistic standardized with exact finite-sample null
//!   moments ([`independence::quadratic_stat`]),
//! * an extreme-value statistic on the largest `|xi_kl|`
//!   ([`independence::extreme_stat`]),
//! * a power-enhanced statistic that adds a screening component for sparse
//!   strong dependence ([`independence::j0`]).
//!
//! ```
//! use xihd_core::{run_tests, DataMatrix, TestKind, TieBreak};
//!
//! let x: Vec<f64> = (0..20).map(|i| (i as f64 * 0.37).sin()).collect();
//! let y: Vec<f64> = (0..20).map(|i| (i as f64 * 1.91).cos()).collect();
//! let z: Vec<f64> = x.iter().map(|v| v * v * v).collect();
//! let data = DataMatrix::from_columns(vec![x, y, z]).unwrap();
//! let reports = run_tests(&data, &TestKind::ALL, 0.05, TieBreak::Reject).unwrap();
//! assert_eq!(reports.len(), 3);
//! ```

pub mod calibration;
pub mod data;
pub mod error;
pub mod independence;
pub mod moments;
pub mod rank;
pub mod sim;
pub mod xi;

pub use data::DataMatrix;
pub use error::{Error, Result};
pub use independence::{
    run_test, run_tests, ScreenedPair, ScreeningSet, Statistics, TestKind, TestReport,
};
pub use moments::{NullMoments, StatMoments};
pub use rank::{RankVector, TieBreak};
pub use sim::{run_simulation, Model, SimResult, SimSpec};
pub use xi::{xi_matrix, xi_pair, xi_pair_neighbor, RankMatrix, XiMatrix};
