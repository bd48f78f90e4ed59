//! Offers, campaign scenarios and the Bernoulli reward environment.
//!
//! A scenario is a fixed list of offers (arms), each paying one unit with its
//! own success probability, plus the impression budget of the campaign.

use crate::error::{BanditError, Result};
use crate::rng::RngStream;

/// One ad. `id` is its position in the scenario; `payoff_prob` is the click
/// probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OfferSpec {
    pub id: usize,
    pub payoff_prob: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    offers: Vec<OfferSpec>,
    budget: u64,
    label: String,
    best_prob: f64,
}

/// Outcome of showing one offer once.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RewardDraw {
    pub arm_id: usize,
    pub value: u8,
}

impl ScenarioSpec {
    pub fn offers(&self) -> &[OfferSpec] {
        &self.offers
    }

    /// Number of offers `k`.
    pub fn k(&self) -> usize {
        self.offers.len()
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `p*`, the highest payoff probability.
    pub fn best_prob(&self) -> f64 {
        self.best_prob
    }

    /// Payoff probability of `arm_id`, or `UnknownArm`.
    pub fn prob(&self, arm_id: usize) -> Result<f64> {
        self.offers
            .get(arm_id)
            .map(|o| o.payoff_prob)
            .ok_or(BanditError::UnknownArm {
                arm: arm_id,
                k: self.k(),
            })
    }

    pub fn probs(&self) -> impl Iterator<Item = f64> + '_ {
        self.offers.iter().map(|o| o.payoff_prob)
    }

    /// Same offers under a different budget.
    pub fn with_budget(&self, budget: u64) -> Result<ScenarioSpec> {
        if budget < 1 {
            return Err(BanditError::InvalidBudget(budget));
        }
        Ok(ScenarioSpec {
            budget,
            ..self.clone()
        })
    }
}

pub fn make_scenario_explicit(
    probs: &[f64],
    budget: u64,
    label: impl Into<String>,
) -> Result<ScenarioSpec> {
    if probs.is_empty() {
        return Err(BanditError::EmptyScenario);
    }
    if budget < 1 {
        return Err(BanditError::InvalidBudget(budget));
    }
    if let Some(&bad) = probs.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(BanditError::OutOfRangeProbability(bad));
    }
    let offers: Vec<OfferSpec> = probs
        .iter()
        .enumerate()
        .map(|(id, &payoff_prob)| OfferSpec { id, payoff_prob })
        .collect();
    let best_prob = probs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(ScenarioSpec {
        offers,
        budget,
        label: label.into(),
        best_prob,
    })
}

/// `k` payoff probabilities drawn i.i.d. from `Uniform(0, 1)`, one uniform each.
pub fn make_scenario_uniform(
    k: usize,
    budget: u64,
    stream: &mut RngStream,
    label: impl Into<String>,
) -> Result<ScenarioSpec> {
    let probs: Vec<f64> = (0..k).map(|_| stream.next_uniform()).collect();
    make_scenario_explicit(&probs, budget, label)
}

/// `k` payoff probabilities drawn i.i.d. from `Beta(alpha, beta)`.
pub fn make_scenario_beta(
    k: usize,
    budget: u64,
    alpha: f64,
    beta: f64,
    stream: &mut RngStream,
    label: impl Into<String>,
) -> Result<ScenarioSpec> {
    let probs = (0..k)
        .map(|_| stream.next_beta(alpha, beta))
        .collect::<Result<Vec<f64>>>()?;
    make_scenario_explicit(&probs, budget, label)
}

/// Show `arm_id` once: pays 1 with the arm's probability. Consumes one uniform.
pub fn draw_reward(
    scenario: &ScenarioSpec,
    arm_id: usize,
    stream: &mut RngStream,
) -> Result<RewardDraw> {
    let p = scenario.prob(arm_id)?;
    Ok(RewardDraw {
        arm_id,
        value: stream.next_bernoulli(p)?,
    })
}
