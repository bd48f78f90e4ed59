//! Arm-selection policies behind one select/update interface.

mod epsilon_greedy;
mod thompson;
mod ucb1;

pub use epsilon_greedy::{select_epsilon_greedy, EpsilonGreedyState, DEFAULT_EPSILON};
pub use thompson::{select_thompson, BetaPosterior, ThompsonState};
pub use ucb1::{select_ucb1, ucb1_index, Ucb1State};

use std::fmt;

use crate::error::{BanditError, Result};
use crate::rng::RngStream;

/// Plays and clicks observed for one arm.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ArmCounters {
    pub plays: u64,
    pub payout: u64,
}

impl ArmCounters {
    /// Empirical mean reward; `None` before the first play.
    pub fn mean(&self) -> Option<f64> {
        (self.plays > 0).then(|| self.payout as f64 / self.plays as f64)
    }
}

/// Common interface of the selection policies.
pub trait Policy {
    /// Choose the next arm. Consumes variates from `stream` according to the
    /// policy's documented budget.
    fn select(&self, stream: &mut RngStream) -> usize;

    /// Fold a 0/1 reward for `arm` back into the state.
    fn update(&mut self, arm: usize, reward: u8) -> Result<()>;

    fn counters(&self) -> &[ArmCounters];

    fn k(&self) -> usize {
        self.counters().len()
    }
}

/// Which policy to run and with what parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolicySpec {
    EpsilonGreedy { epsilon: f64 },
    Ucb1,
    Thompson,
}

impl PolicySpec {
    pub fn name(&self) -> &'static str {
        match self {
            PolicySpec::EpsilonGreedy { .. } => "epsilon_greedy",
            PolicySpec::Ucb1 => "ucb1",
            PolicySpec::Thompson => "thompson",
        }
    }

    /// Parameter string used in result files, e.g. `epsilon=0.1`.
    pub fn params(&self) -> String {
        match self {
            PolicySpec::EpsilonGreedy { epsilon } => format!("epsilon={epsilon}"),
            PolicySpec::Ucb1 | PolicySpec::Thompson => String::new(),
        }
    }

    pub fn build(&self, k: usize) -> Result<AnyPolicy> {
        Ok(match *self {
            PolicySpec::EpsilonGreedy { epsilon } => {
                AnyPolicy::EpsilonGreedy(EpsilonGreedyState::new(k, epsilon)?)
            }
            PolicySpec::Ucb1 => AnyPolicy::Ucb1(Ucb1State::new(k)?),
            PolicySpec::Thompson => AnyPolicy::Thompson(ThompsonState::new(k)?),
        })
    }
}

impl fmt::Display for PolicySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolicySpec::EpsilonGreedy { epsilon } => write!(f, "epsilon_greedy({epsilon})"),
            other => f.write_str(other.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnyPolicy {
    EpsilonGreedy(EpsilonGreedyState),
    Ucb1(Ucb1State),
    Thompson(ThompsonState),
}

impl Policy for AnyPolicy {
    fn select(&self, stream: &mut RngStream) -> usize {
        match self {
            AnyPolicy::EpsilonGreedy(s) => s.select(stream),
            AnyPolicy::Ucb1(s) => s.select(stream),
            AnyPolicy::Thompson(s) => s.select(stream),
        }
    }

    fn update(&mut self, arm: usize, reward: u8) -> Result<()> {
        match self {
            AnyPolicy::EpsilonGreedy(s) => s.update(arm, reward),
            AnyPolicy::Ucb1(s) => s.update(arm, reward),
            AnyPolicy::Thompson(s) => s.update(arm, reward),
        }
    }

    fn counters(&self) -> &[ArmCounters] {
        match self {
            AnyPolicy::EpsilonGreedy(s) => s.counters(),
            AnyPolicy::Ucb1(s) => s.counters(),
            AnyPolicy::Thompson(s) => s.counters(),
        }
    }
}

/// Index of the largest score; the lowest index wins ties.
pub fn argmax_lowest<I: IntoIterator<Item = f64>>(scores: I) -> usize {
    let mut best = 0;
    let mut best_score = f64::NEG_INFINITY;
    for (i, score) in scores.into_iter().enumerate() {
        if score > best_score {
            best = i;
            best_score = score;
        }
    }
    best
}

pub(crate) fn fresh_counters(k: usize) -> Result<Vec<ArmCounters>> {
    if k == 0 {
        return Err(BanditError::EmptyScenario);
    }
    Ok(vec![ArmCounters::default(); k])
}

pub(crate) fn record(counters: &mut [ArmCounters], arm: usize, reward: u8) -> Result<()> {
    if reward > 1 {
        return Err(BanditError::InvalidReward(u64::from(reward)));
    }
    let k = counters.len();
    let c = counters
        .get_mut(arm)
        .ok_or(BanditError::UnknownArm { arm, k })?;
    c.plays += 1;
    c.payout += u64::from(reward);
    Ok(())
}
