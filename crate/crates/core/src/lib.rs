//! Monte Carlo study of sub-optimal decisions in a one-level hierarchy.
//!
//! Two subordinates each climb their share of an NK fitness landscape from a
//! common status quo and forward one proposal. A passive decision maker
//! accepts the assembled proposals; an active one keeps climbing over the full
//! decision space. Batches of seeded trials estimate how often the final
//! decision is the global optimum (Probability of Optimality) and how close
//! its fitness comes to the optimum (Fitness Rate).

pub mod agents;
pub mod cli;
pub mod error;
pub mod landscape;
pub mod report;
pub mod runner;
pub mod scenario;

pub use agents::{
    assemble, climb, decide, run_episode, run_episode_from, steepest_ascent, subordinate_propose,
    DecisionAssignment, DecisionMakerMode, EpisodeOutcome, Mask, Proposal,
};
pub use error::{Error, Result};
pub use landscape::{Genotype, Landscape, OptimumReport, WeightVector};
pub use runner::{
    derive_trial_seed, run_scenario, run_trial, run_trials, wilson_interval, RunConfig,
    ScenarioResult, TrialResult,
};
pub use scenario::{
    builtin, builtin_scenarios, parse_scenario_config, validate_scenario, ScenarioSpec,
};
