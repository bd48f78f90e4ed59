use super::{argmax_lowest, fresh_counters, record, ArmCounters, Policy};
use crate::error::{BanditError, Result};
use crate::rng::RngStream;

pub const DEFAULT_EPSILON: f64 = 0.1;

/// Explore uniformly with probability `epsilon`, otherwise play the best
/// empirical mean.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonGreedyState {
    epsilon: f64,
    counters: Vec<ArmCounters>,
}

impl EpsilonGreedyState {
    pub fn new(k: usize, epsilon: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(BanditError::OutOfRangeProbability(epsilon));
        }
        Ok(EpsilonGreedyState {
            epsilon,
            counters: fresh_counters(k)?,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn counters_mut(&mut self) -> &mut [ArmCounters] {
        &mut self.counters
    }
}

/// Always draws the epsilon coin (one uniform); the explore branch draws one
/// more to pick the arm uniformly over all `k` arms, the incumbent included.
/// The greedy branch scores unplayed arms as `+inf`, so each arm gets one
/// play before exploitation settles.
pub fn select_epsilon_greedy(state: &EpsilonGreedyState, stream: &mut RngStream) -> usize {
    let k = state.counters.len();
    if stream.next_uniform() < state.epsilon {
        return stream.next_index(k);
    }
    argmax_lowest(
        state
            .counters
            .iter()
            .map(|c| c.mean().unwrap_or(f64::INFINITY)),
    )
}

impl Policy for EpsilonGreedyState {
    fn select(&self, stream: &mut RngStream) -> usize {
        select_epsilon_greedy(self, stream)
    }

    fn update(&mut self, arm: usize, reward: u8) -> Result<()> {
        record(&mut self.counters, arm, reward)
    }

    fn counters(&self) -> &[ArmCounters] {
        &self.counters
    }
}
