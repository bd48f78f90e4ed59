//! Multi-armed bandit policies for ad selection (epsilon-greedy, UCB1 and
//! Beta-Bernoulli Thompson sampling) and a reproducible harness that measures
//! their regret on simulated advertising campaigns.

pub mod config;
pub mod error;
pub mod policy;
pub mod results;
pub mod rng;
pub mod scenario;
pub mod sim;
pub mod validate;

pub use error::{BanditError, Result};
pub use policy::{ArmCounters, Policy, PolicySpec};
pub use rng::{derive_stream, MasterSeed, RngStream};
pub use scenario::{OfferSpec, RewardDraw, ScenarioSpec};
pub use sim::{ExperimentConfig, RunResult};
