use std::collections::BTreeMap;
use std::str::FromStr;

use super::ledger::Checkpoint;
use super::runner::RunResult;
use crate::error::{BanditError, Result};

/// Two-sided 95% standard normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

/// Which checkpoint column to summarize.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Metric {
    Realized,
    Pseudo,
    #[default]
    AvgPerOffer,
}

impl Metric {
    pub fn of(&self, c: &Checkpoint) -> f64 {
        match self {
            Metric::Realized => c.realized_regret,
            Metric::Pseudo => c.pseudo_regret,
            Metric::AvgPerOffer => c.avg_regret_per_offer,
        }
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "realized" => Ok(Metric::Realized),
            "pseudo" => Ok(Metric::Pseudo),
            "avg_per_offer" => Ok(Metric::AvgPerOffer),
            other => Err(format!(
                "unknown metric `{other}` (expected realized, pseudo or avg_per_offer)"
            )),
        }
    }
}

/// Sample statistics across replications. Spread fields are `None` with a
/// single observation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub n: usize,
    pub mean: f64,
    pub sd: Option<f64>,
    pub stderr: Option<f64>,
    pub ci95: Option<f64>,
}

impl Summary {
    /// Panics on an empty slice.
    pub fn from_values(values: &[f64]) -> Summary {
        assert!(!values.is_empty(), "summary of no values");
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        if n < 2 {
            return Summary {
                n,
                mean,
                sd: None,
                stderr: None,
                ci95: None,
            };
        }
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let sd = var.sqrt();
        let stderr = sd / (n as f64).sqrt();
        Summary {
            n,
            mean,
            sd: Some(sd),
            stderr: Some(stderr),
            ci95: Some(Z_95 * stderr),
        }
    }

    /// `(mean - ci95, mean + ci95)`, degenerate with one observation.
    pub fn interval(&self) -> (f64, f64) {
        let h = self.ci95.unwrap_or(0.0);
        (self.mean - h, self.mean + h)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub policy: String,
    pub budget: u64,
    pub step: u64,
    pub summary: Summary,
}

/// Summarize `metric` per `(policy, budget, step)` across replications.
///
/// Policies keep their order of first appearance; budgets and steps ascend.
pub fn aggregate(results: &[RunResult], metric: Metric) -> Result<Vec<AggregateRow>> {
    let first = results
        .first()
        .ok_or_else(|| BanditError::MixedConfig("no results to aggregate".into()))?;
    if let Some(r) = results.iter().find(|r| r.k != first.k) {
        return Err(BanditError::MixedConfig(format!(
            "k differs: {} vs {}",
            first.k, r.k
        )));
    }
    if let Some(r) = results
        .iter()
        .find(|r| r.scenario_label != first.scenario_label)
    {
        return Err(BanditError::MixedConfig(format!(
            "scenario differs: `{}` vs `{}`",
            first.scenario_label, r.scenario_label
        )));
    }

    let mut policies: Vec<String> = Vec::new();
    let mut groups: BTreeMap<(usize, u64, u64), Vec<f64>> = BTreeMap::new();
    for r in results {
        let name = r.policy.to_string();
        let pos = match policies.iter().position(|p| *p == name) {
            Some(pos) => pos,
            None => {
                policies.push(name);
                policies.len() - 1
            }
        };
        for c in &r.checkpoints {
            groups
                .entry((pos, r.budget, c.step))
                .or_default()
                .push(metric.of(c));
        }
    }
    Ok(groups
        .into_iter()
        .map(|((pos, budget, step), values)| AggregateRow {
            policy: policies[pos].clone(),
            budget,
            step,
            summary: Summary::from_values(&values),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::policy::PolicySpec;
    use crate::rng::{derive_stream, MasterSeed};
    use crate::scenario::make_scenario_explicit;
    use crate::sim::runner::run_once;

    #[test]
    fn single_value_has_no_spread() {
        let s = Summary::from_values(&[4.5]);
        assert_eq!(s.mean, 4.5);
        assert_eq!((s.sd, s.stderr, s.ci95), (None, None, None));
    }

    #[test]
    fn two_values() {
        let s = Summary::from_values(&[1.0, 3.0]);
        assert_eq!(s.mean, 2.0);
        assert!((s.sd.unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert!((s.stderr.unwrap() - 1.0).abs() < 1e-15);
        assert!((s.ci95.unwrap() - Z_95).abs() < 1e-15);
    }

    #[test]
    fn metric_parsing() {
        assert_eq!("pseudo".parse::<Metric>(), Ok(Metric::Pseudo));
        assert!("regret".parse::<Metric>().is_err());
    }

    fn deterministic_runs(reps: u64) -> Vec<RunResult> {
        let s = make_scenario_explicit(&[1.0, 0.0], 40, "det k=2").unwrap();
        (0..reps)
            .map(|r| {
                let mut stream = derive_stream(MasterSeed(1), 0, 1, r);
                let mut res = run_once(&s, &PolicySpec::Ucb1, &mut stream, &[10, 40]).unwrap();
                res.replication = r;
                res
            })
            .collect()
    }

    #[test]
    fn deterministic_trajectories_have_zero_variance() {
        let rows = aggregate(&deterministic_runs(50), Metric::AvgPerOffer).unwrap();
        assert_eq!(rows.len(), 2);
        for row in rows {
            assert_eq!(row.summary.n, 50);
            assert_eq!(row.summary.sd, Some(0.0));
        }
    }

    #[test]
    fn mixed_k_rejected() {
        let mut runs = deterministic_runs(2);
        runs[1].k = 3;
        assert!(matches!(
            aggregate(&runs, Metric::Realized),
            Err(BanditError::MixedConfig(_))
        ));
        assert!(aggregate(&[], Metric::Realized).is_err());
    }
}
