use super::{argmax_lowest, fresh_counters, record, ArmCounters, Policy};
use crate::error::Result;
use crate::rng::RngStream;

/// Beta posterior of an arm's click probability under a uniform prior:
/// `alpha = 1 + payout`, `beta = 1 + plays - payout`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BetaPosterior {
    pub alpha: u64,
    pub beta: u64,
}

impl BetaPosterior {
    pub fn from_counters(c: &ArmCounters) -> Self {
        BetaPosterior {
            alpha: 1 + c.payout,
            beta: 1 + c.plays - c.payout,
        }
    }

    pub fn mean(&self) -> f64 {
        self.alpha as f64 / (self.alpha + self.beta) as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThompsonState {
    counters: Vec<ArmCounters>,
}

impl ThompsonState {
    pub fn new(k: usize) -> Result<Self> {
        Ok(ThompsonState {
            counters: fresh_counters(k)?,
        })
    }

    pub fn posterior(&self, arm: usize) -> Option<BetaPosterior> {
        self.counters.get(arm).map(BetaPosterior::from_counters)
    }

    pub fn counters_mut(&mut self) -> &mut [ArmCounters] {
        &mut self.counters
    }
}

/// Draw one sample from every arm's posterior, in arm order, and play the
/// argmax.
pub fn select_thompson(state: &ThompsonState, stream: &mut RngStream) -> usize {
    argmax_lowest(state.counters.iter().map(|c| {
        let post = BetaPosterior::from_counters(c);
        stream.beta_unchecked(post.alpha as f64, post.beta as f64)
    }))
}

impl Policy for ThompsonState {
    fn select(&self, stream: &mut RngStream) -> usize {
        select_thompson(self, stream)
    }

    fn update(&mut self, arm: usize, reward: u8) -> Result<()> {
        record(&mut self.counters, arm, reward)
    }

    fn counters(&self) -> &[ArmCounters] {
        &self.counters
    }
}
