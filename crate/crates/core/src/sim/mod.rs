//! Monte-Carlo rejection-frequency studies.
//!
//! Replicate `r` of a study with master seed `s` draws its data from a
//! ChaCha8 generator keyed by `s` and positioned on stream `r`. Streams of
//! one key never overlap, so replicates are independent of each other and
//! of the order in which they run.

mod linalg;
mod models;

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use linalg::cholesky;
pub use models::{
    e3a_correlation, generate, w_shape, Model, Sampler, DEFAULT_LAMBDA, DEFAULT_RHO_AR1,
    DEFAULT_RHO_COMPOUND,
};

use crate::error::{ensure_min, Error, Result};
use crate::independence::{critical_value, Statistics, TestKind};
use crate::moments::MIN_N_TEST;
use crate::rank::TieBreak;
use crate::xi::xi_matrix_with;

/// Generator for replicate `index` of a study seeded with `seed`.
pub fn replicate_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimSpec {
    pub model: Model,
    pub n: usize,
    pub p: usize,
    pub reps: usize,
    pub alpha: f64,
    pub seed: u64,
    pub tests: Vec<TestKind>,
}

impl SimSpec {
    /// Defaults: all three tests at level 0.05, 1000 replicates.
    pub fn new(model: Model, n: usize, p: usize, seed: u64) -> Self {
        Self {
            model,
            n,
            p,
            reps: 1000,
            alpha: 0.05,
            seed,
            tests: TestKind::ALL.to_vec(),
        }
    }

    pub fn with_reps(mut self, reps: usize) -> Self {
        self.reps = reps;
        self
    }

    pub fn validate(&self) -> Result<()> {
        ensure_min("n", self.n, MIN_N_TEST)?;
        ensure_min("p", self.p, 2)?;
        ensure_min("reps", self.reps, 1)?;
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::DomainError {
                quantity: "alpha",
                value: self.alpha,
                domain: "(0, 1)",
            });
        }
        self.model.validate(self.n, self.p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestFrequency {
    pub kind: TestKind,
    pub rejections: u64,
    pub frequency: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub model: Model,
    pub n: usize,
    pub p: usize,
    pub reps: usize,
    pub alpha: f64,
    pub seed: u64,
    pub tests: Vec<TestFrequency>,
    pub nonempty_screens: u64,
    pub freq_nonempty_screen: f64,
    /// Elapsed seconds. Not serialized, so that reports of one seed are
    /// byte-identical across runs.
    #[serde(skip)]
    pub wall_time: f64,
}

impl SimResult {
    pub fn frequency(&self, kind: TestKind) -> Option<f64> {
        self.tests
            .iter()
            .find(|t| t.kind == kind)
            .map(|t| t.frequency)
    }
}

/// Statistics of replicate `index`.
pub fn replicate_statistics(sampler: &Sampler, seed: u64, index: u64) -> Result<Statistics> {
    let mut rng = replicate_rng(seed, index);
    let data = sampler.sample(&mut rng)?;
    // Continuous generators never tie; a tie here means a broken stream.
    let xi = xi_matrix_with(&data, TieBreak::Reject)?;
    Statistics::compute(&xi)
}

struct Outcome {
    rejected: Vec<bool>,
    screened: bool,
}

pub fn run_simulation(spec: &SimSpec) -> Result<SimResult> {
    spec.validate()?;
    let start = Instant::now();
    let sampler = Sampler::new(spec.model, spec.n, spec.p)?;
    let critical: Vec<f64> = spec
        .tests
        .iter()
        .map(|&k| critical_value(k, spec.alpha))
        .collect::<Result<_>>()?;

    let outcomes: Vec<Outcome> = (0..spec.reps as u64)
        .into_par_iter()
        .map(|r| {
            let stats = replicate_statistics(&sampler, spec.seed, r)?;
            Ok(Outcome {
                rejected: spec
                    .tests
                    .iter()
                    .zip(&critical)
                    .map(|(&k, &c)| stats.rejects(k, c))
                    .collect(),
                screened: !stats.screening.is_empty(),
            })
        })
        .collect::<Result<_>>()?;

    let reps = spec.reps as f64;
    let tests = spec
        .tests
        .iter()
        .enumerate()
        .map(|(t, &kind)| {
            let rejections = outcomes.iter().filter(|o| o.rejected[t]).count() as u64;
            TestFrequency {
                kind,
                rejections,
                frequency: rejections as f64 / reps,
            }
        })
        .collect();
    let nonempty_screens = outcomes.iter().filter(|o| o.screened).count() as u64;

    Ok(SimResult {
        model: spec.model,
        n: spec.n,
        p: spec.p,
        reps: spec.reps,
        alpha: spec.alpha,
        seed: spec.seed,
        tests,
        nonempty_screens,
        freq_nonempty_screen: nonempty_screens as f64 / reps,
        wall_time: start.elapsed().as_secs_f64(),
    })
}
