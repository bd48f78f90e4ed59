use rayon::prelude::*;

use super::ledger::{Checkpoint, RegretLedger};
use super::schedule::checkpoint_schedule;
use crate::error::{BanditError, Result};
use crate::policy::{ArmCounters, Policy, PolicySpec};
use crate::rng::{derive_stream, MasterSeed, RngStream};
use crate::scenario::{
    draw_reward, make_scenario_beta, make_scenario_explicit, make_scenario_uniform, ScenarioSpec,
};

/// Policy slot reserved for scenario generation streams.
pub const SCENARIO_STREAM_SLOT: u64 = u64::MAX;

/// How payoff probabilities are produced for each replication.
#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioGenerator {
    Uniform,
    Beta { alpha: f64, beta: f64 },
    Explicit(Vec<f64>),
}

impl ScenarioGenerator {
    /// Label written to result files; encodes the generator and `k`.
    pub fn label(&self, k: usize) -> String {
        match self {
            ScenarioGenerator::Uniform => format!("uniform k={k}"),
            ScenarioGenerator::Beta { alpha, beta } => {
                format!("beta[alpha={alpha} beta={beta}] k={k}")
            }
            ScenarioGenerator::Explicit(_) => format!("explicit k={k}"),
        }
    }

    pub fn generate(&self, k: usize, budget: u64, stream: &mut RngStream) -> Result<ScenarioSpec> {
        let label = self.label(k);
        match self {
            ScenarioGenerator::Uniform => make_scenario_uniform(k, budget, stream, label),
            ScenarioGenerator::Beta { alpha, beta } => {
                make_scenario_beta(k, budget, *alpha, *beta, stream, label)
            }
            ScenarioGenerator::Explicit(probs) => make_scenario_explicit(probs, budget, label),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScenarioMode {
    /// New payoff probabilities for every (budget, replication) pair.
    #[default]
    Fresh,
    /// One scenario shared by every cell.
    Fixed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub seed: MasterSeed,
    pub k: usize,
    pub scenario: ScenarioGenerator,
    pub mode: ScenarioMode,
    pub budgets: Vec<u64>,
    pub policies: Vec<PolicySpec>,
    pub replications: u64,
    pub checkpoints: usize,
}

impl ExperimentConfig {
    pub const DEFAULT_REPLICATIONS: u64 = 50;
    pub const DEFAULT_CHECKPOINTS: usize = 20;

    /// Check every field, reporting the first problem with its field path.
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(BanditError::config("k", "must be at least 1"));
        }
        match &self.scenario {
            ScenarioGenerator::Uniform => {}
            ScenarioGenerator::Beta { alpha, beta } => {
                if !(*alpha > 0.0 && alpha.is_finite()) {
                    return Err(BanditError::config("scenario.alpha", "must be positive"));
                }
                if !(*beta > 0.0 && beta.is_finite()) {
                    return Err(BanditError::config("scenario.beta", "must be positive"));
                }
            }
            ScenarioGenerator::Explicit(probs) => {
                if probs.is_empty() {
                    return Err(BanditError::config("scenario.probs", "must not be empty"));
                }
                if let Some(i) = probs.iter().position(|p| !(0.0..=1.0).contains(p)) {
                    return Err(BanditError::config(
                        format!("scenario.probs[{i}]"),
                        format!("probability {} is outside [0, 1]", probs[i]),
                    ));
                }
                if probs.len() != self.k {
                    return Err(BanditError::config(
                        "k",
                        format!(
                            "is {} but scenario.probs has {} entries",
                            self.k,
                            probs.len()
                        ),
                    ));
                }
            }
        }
        if self.budgets.is_empty() {
            return Err(BanditError::config("budgets", "must not be empty"));
        }
        for (i, &b) in self.budgets.iter().enumerate() {
            if b < 1 {
                return Err(BanditError::config(
                    format!("budgets[{i}]"),
                    "must be at least 1",
                ));
            }
            if i > 0 && b <= self.budgets[i - 1] {
                return Err(BanditError::config(
                    format!("budgets[{i}]"),
                    "budgets must be strictly increasing",
                ));
            }
        }
        if self.policies.is_empty() {
            return Err(BanditError::config("policies", "must not be empty"));
        }
        for (i, p) in self.policies.iter().enumerate() {
            if let PolicySpec::EpsilonGreedy { epsilon } = p {
                if !(0.0..=1.0).contains(epsilon) {
                    return Err(BanditError::config(
                        format!("policies[{i}].epsilon"),
                        format!("{epsilon} is outside [0, 1]"),
                    ));
                }
            }
        }
        if self.replications < 1 {
            return Err(BanditError::config("replications", "must be at least 1"));
        }
        if self.checkpoints < 1 {
            return Err(BanditError::config("checkpoints", "must be at least 1"));
        }
        Ok(())
    }

    /// Scenario for one `(budget, replication)` cell.
    pub fn scenario_for(&self, budget_index: usize, replication: u64) -> Result<ScenarioSpec> {
        let mut stream = match self.mode {
            ScenarioMode::Fresh => derive_stream(
                self.seed,
                budget_index as u64,
                SCENARIO_STREAM_SLOT,
                replication,
            ),
            ScenarioMode::Fixed => derive_stream(self.seed, 0, SCENARIO_STREAM_SLOT, 0),
        };
        self.scenario
            .generate(self.k, self.budgets[budget_index], &mut stream)
    }
}

/// One replication of one policy on one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub scenario_label: String,
    pub policy: PolicySpec,
    pub budget: u64,
    pub replication: u64,
    pub k: usize,
    pub p_star: f64,
    pub checkpoints: Vec<Checkpoint>,
    pub final_counters: Vec<ArmCounters>,
}

impl RunResult {
    pub fn final_checkpoint(&self) -> Option<&Checkpoint> {
        self.checkpoints.last()
    }
}

/// Play `policy` on `scenario` for its full budget.
///
/// Each step selects an arm, draws its reward from `stream`, then updates the
/// policy and the ledger. The returned result has replication index 0.
pub fn run_once(
    scenario: &ScenarioSpec,
    policy: &PolicySpec,
    stream: &mut RngStream,
    checkpoints: &[u64],
) -> Result<RunResult> {
    let budget = scenario.budget();
    validate_checkpoints(checkpoints, budget)?;

    let mut state = policy.build(scenario.k())?;
    let mut ledger = RegretLedger::new(scenario.k(), scenario.best_prob());
    let mut snapshots = Vec::with_capacity(checkpoints.len());
    let mut next = checkpoints.iter().peekable();

    for t in 1..=budget {
        let arm = state.select(stream);
        let draw = draw_reward(scenario, arm, stream)?;
        state.update(arm, draw.value)?;
        ledger.record(draw.value, scenario.prob(arm)?);
        if next.peek() == Some(&&t) {
            snapshots.push(ledger.checkpoint());
            next.next();
        }
    }

    Ok(RunResult {
        scenario_label: scenario.label().to_owned(),
        policy: *policy,
        budget,
        replication: 0,
        k: scenario.k(),
        p_star: scenario.best_prob(),
        checkpoints: snapshots,
        final_counters: state.counters().to_vec(),
    })
}

fn validate_checkpoints(checkpoints: &[u64], budget: u64) -> Result<()> {
    let ok = checkpoints.last() == Some(&budget)
        && checkpoints.first().is_some_and(|&s| s >= 1)
        && checkpoints.windows(2).all(|w| w[0] < w[1]);
    if ok {
        Ok(())
    } else {
        Err(BanditError::config(
            "checkpoints",
            format!("must be strictly increasing steps in [1, {budget}] ending at {budget}"),
        ))
    }
}

/// Run every `(budget, policy, replication)` cell on the current rayon pool.
///
/// Results come back sorted by budget, then policy (config order), then
/// replication, whatever the execution order.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<RunResult>> {
    config.validate()?;
    let cells: Vec<(usize, usize, u64)> = (0..config.budgets.len())
        .flat_map(|b| {
            (0..config.policies.len())
                .flat_map(move |p| (0..config.replications).map(move |r| (b, p, r)))
        })
        .collect();
    let schedules: Vec<Vec<u64>> = config
        .budgets
        .iter()
        .map(|&b| checkpoint_schedule(b, config.checkpoints))
        .collect();

    cells
        .par_iter()
        .map(|&(b, p, r)| {
            let scenario = config.scenario_for(b, r)?;
            let mut stream = derive_stream(config.seed, b as u64, p as u64, r);
            let mut result = run_once(&scenario, &config.policies[p], &mut stream, &schedules[b])?;
            result.replication = r;
            Ok(result)
        })
        .collect()
}

/// [`run_experiment`] on a dedicated pool of `workers` threads.
pub fn run_experiment_with_workers(
    config: &ExperimentConfig,
    workers: usize,
) -> Result<Vec<RunResult>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| BanditError::config("workers", e.to_string()))?;
    pool.install(|| run_experiment(config))
}
