//! Seeded trial batches and the two outcome metrics.
//!
//! # Seeding
//!
//! Trial `i` of a scenario gets the seed
//!
//! ```text
//! base = splitmix64(master_seed ^ fnv1a64(key))
//! seed = splitmix64(base.wrapping_add(i))
//! ```
//!
//! where `key` is [`ScenarioSpec::seed_key`] (the split, e.g. `"1-3"`) and
//! `fnv1a64` is 64-bit FNV-1a over the key's UTF-8 bytes. Because splitmix64 is
//! a bijection on `u64`, seeds never collide across trial indices of one batch.
//! Mixing before the index is added keeps batches under nearby master seeds
//! (7 and 8, say) from sharing shifted runs of trial seeds.
//!
//! Within a trial the landscape is generated from the trial seed, and the
//! status quo comes from a second ChaCha8 stream (stream id 1) under the same
//! seed. Passive and active scenarios with the same split therefore see the
//! same landscape and status quo on every trial.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::agents::{run_episode, DecisionMakerMode};
use crate::error::{Error, Result};
use crate::landscape::{Genotype, Landscape};
use crate::scenario::ScenarioSpec;

pub const DEFAULT_TRIALS: u64 = 10_000;
pub const DEFAULT_CONFIDENCE: f64 = 0.95;

/// Stream id used for the status-quo draw inside a trial.
pub const STATUS_QUO_STREAM: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub trials: u64,
    pub master_seed: u64,
    pub confidence: f64,
}

impl RunConfig {
    pub fn new(trials: u64, master_seed: u64, confidence: f64) -> Result<Self> {
        let cfg = Self {
            trials,
            master_seed,
            confidence,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(Error::Domain("trials must be at least 1".into()));
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(Error::Domain(format!(
                "confidence must lie in (0, 1), got {}",
                self.confidence
            )));
        }
        Ok(())
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            trials: DEFAULT_TRIALS,
            master_seed: 0,
            confidence: DEFAULT_CONFIDENCE,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialResult {
    pub trial_index: u64,
    pub trial_seed: u64,
    pub status_quo: Genotype,
    pub decision: Genotype,
    pub final_fitness: f64,
    pub optimum_fitness: f64,
    pub is_optimal: bool,
    /// `final_fitness / optimum_fitness`; exactly 1.0 iff `is_optimal`.
    pub fitness_rate: f64,
}

impl TrialResult {
    pub fn fitness_diff(&self) -> f64 {
        self.optimum_fitness - self.final_fitness
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioResult {
    pub code: String,
    pub mode: DecisionMakerMode,
    pub split: (usize, usize),
    pub n: usize,
    pub k: usize,
    pub weights: Vec<f64>,
    pub trials: u64,
    pub master_seed: u64,
    pub confidence: f64,
    pub optimal_count: u64,
    /// Probability of Optimality.
    pub poo: f64,
    pub poo_ci: (f64, f64),
    pub mean_fitness_rate: f64,
    pub fitness_rate_se: f64,
    /// Mean of `optimum - final`, kept as a diagnostic.
    pub mean_fitness_diff: f64,
}

impl ScenarioResult {
    /// Half the width of the Wilson interval.
    pub fn poo_half_width(&self) -> f64 {
        (self.poo_ci.1 - self.poo_ci.0) / 2.0
    }

    /// Normal-approximation half-width of the mean fitness rate at the run's
    /// confidence level.
    pub fn fitness_rate_half_width(&self) -> f64 {
        z_score(self.confidence) * self.fitness_rate_se
    }
}

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// 64-bit FNV-1a.
pub fn hash64(key: &str) -> u64 {
    key.bytes().fold(0xCBF2_9CE4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01B3)
    })
}

pub fn derive_trial_seed(master_seed: u64, key: &str, trial_index: u64) -> u64 {
    let base = splitmix64(master_seed ^ hash64(key));
    splitmix64(base.wrapping_add(trial_index))
}

/// Generates a fresh landscape from `trial_seed`, runs one episode and scores
/// the decision against the exhaustive optimum.
pub fn run_trial(spec: &ScenarioSpec, trial_index: u64, trial_seed: u64) -> Result<TrialResult> {
    let landscape = Landscape::generate(spec.n, spec.k, spec.weights.clone(), trial_seed)?;
    let assignment = spec.assignment()?;
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
    rng.set_stream(STATUS_QUO_STREAM);
    let outcome = run_episode(&landscape, &assignment, spec.mode, &mut rng)?;
    let optimum = landscape.global_optimum()?;
    let is_optimal = optimum.contains(&outcome.decision);
    let fitness_rate = if is_optimal {
        1.0
    } else {
        outcome.final_fitness / optimum.optimum_fitness
    };
    Ok(TrialResult {
        trial_index,
        trial_seed,
        status_quo: outcome.status_quo,
        decision: outcome.decision,
        final_fitness: outcome.final_fitness,
        optimum_fitness: optimum.optimum_fitness,
        is_optimal,
        fitness_rate,
    })
}

/// Every trial of a batch, ordered by trial index. Runs on the current rayon
/// pool; the output does not depend on its size.
pub fn run_trials(spec: &ScenarioSpec, config: &RunConfig) -> Result<Vec<TrialResult>> {
    spec.validate()?;
    config.validate()?;
    let key = spec.seed_key();
    (0..config.trials)
        .into_par_iter()
        .map(|i| run_trial(spec, i, derive_trial_seed(config.master_seed, &key, i)))
        .collect()
}

pub fn run_scenario(spec: &ScenarioSpec, config: &RunConfig) -> Result<ScenarioResult> {
    let trials = run_trials(spec, config)?;
    summarize(spec, config, &trials)
}

/// Folds trial results, in slice order, into a [`ScenarioResult`].
pub fn summarize(
    spec: &ScenarioSpec,
    config: &RunConfig,
    trials: &[TrialResult],
) -> Result<ScenarioResult> {
    if trials.is_empty() {
        return Err(Error::Domain("no trials to summarize".into()));
    }
    let count = trials.len() as u64;
    let t = count as f64;
    let optimal_count = trials.iter().filter(|r| r.is_optimal).count() as u64;

    let mut rate_sum = 0.0;
    let mut diff_sum = 0.0;
    for r in trials {
        rate_sum += r.fitness_rate;
        diff_sum += r.fitness_diff();
    }
    let mean_rate = rate_sum / t;
    let fitness_rate_se = if count > 1 {
        let mut ss = 0.0;
        for r in trials {
            let d = r.fitness_rate - mean_rate;
            ss += d * d;
        }
        (ss / (t - 1.0)).sqrt() / t.sqrt()
    } else {
        0.0
    };

    Ok(ScenarioResult {
        code: spec.code.clone(),
        mode: spec.mode,
        split: spec.split,
        n: spec.n,
        k: spec.k,
        weights: spec.weights.as_slice().to_vec(),
        trials: count,
        master_seed: config.master_seed,
        confidence: config.confidence,
        optimal_count,
        poo: optimal_count as f64 / t,
        poo_ci: wilson_interval(optimal_count, count, config.confidence)?,
        mean_fitness_rate: mean_rate,
        fitness_rate_se,
        mean_fitness_diff: diff_sum / t,
    })
}

/// Two-sided standard normal quantile for `confidence`.
pub fn z_score(confidence: f64) -> f64 {
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    normal.inverse_cdf(1.0 - (1.0 - confidence) / 2.0)
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: u64, trials: u64, confidence: f64) -> Result<(f64, f64)> {
    if trials == 0 {
        return Err(Error::Domain(
            "wilson interval needs at least one trial".into(),
        ));
    }
    if successes > trials {
        return Err(Error::Domain(format!(
            "successes {successes} exceed trials {trials}"
        )));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::Domain(format!(
            "confidence must lie in (0, 1), got {confidence}"
        )));
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z = z_score(confidence);
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();

    // Pin the exact boundaries and keep the interval around p despite rounding.
    let low = if successes == 0 {
        0.0
    } else {
        (centre - half).clamp(0.0, p)
    };
    let high = if successes == trials {
        1.0
    } else {
        (centre + half).clamp(p, 1.0)
    };
    Ok((low, high))
}
