//! Campaign simulation: one run per `(budget, policy, replication)` cell,
//! regret bookkeeping, checkpoint schedules and cross-replication summaries.

mod aggregate;
mod ledger;
mod runner;
mod schedule;

pub use aggregate::{aggregate, AggregateRow, Metric, Summary, Z_95};
pub use ledger::{Checkpoint, RegretLedger};
pub use runner::{
    run_experiment, run_experiment_with_workers, run_once, ExperimentConfig, RunResult,
    ScenarioGenerator, ScenarioMode, SCENARIO_STREAM_SLOT,
};
pub use schedule::checkpoint_schedule;
