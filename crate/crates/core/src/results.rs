//! Results and aggregate CSV files.
//!
//! The results file has the frozen header
//! `scenario,policy,params,replication,step,reward,realized_regret,pseudo_regret,avg_regret_per_offer`
//! with one row per (run, checkpoint), rows in canonical order and reals
//! written with 9 significant digits.

use std::collections::BTreeMap;
use std::io::{self, Read, Write};

use thiserror::Error;

use crate::sim::{Metric, RunResult, Summary};

pub const RESULTS_HEADER: [&str; 9] = [
    "scenario",
    "policy",
    "params",
    "replication",
    "step",
    "reward",
    "realized_regret",
    "pseudo_regret",
    "avg_regret_per_offer",
];

pub const AGGREGATE_HEADER: [&str; 6] = ["policy", "step", "mean", "sd", "stderr", "ci95"];

#[derive(Debug, Error)]
pub enum ResultsError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: {message}")]
    Malformed { line: u64, message: String },
    #[error("results mix incompatible configurations: {0}")]
    MixedConfig(String),
}

/// Format like C's `%.9g`: 9 significant digits, trailing zeros trimmed,
/// exponent form outside `1e-5 <= |x| < 1e9`.
pub fn format_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_owned()))
    }
}

fn trim_zeros(mut s: String) -> String {
    if s.contains('.') {
        let keep = s.trim_end_matches('0').trim_end_matches('.').len();
        s.truncate(keep);
    }
    s
}

pub fn write_results_csv<W: Write>(results: &[RunResult], out: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RESULTS_HEADER)?;
    for r in results {
        let policy = r.policy.name();
        let params = r.policy.params();
        let replication = r.replication.to_string();
        for c in &r.checkpoints {
            w.write_record([
                r.scenario_label.as_str(),
                policy,
                params.as_str(),
                replication.as_str(),
                &c.step.to_string(),
                &c.cumulative_reward.to_string(),
                &format_sig9(c.realized_regret),
                &format_sig9(c.pseudo_regret),
                &format_sig9(c.avg_regret_per_offer),
            ])?;
        }
    }
    w.flush()
}

/// One row of a results file.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub scenario: String,
    pub policy: String,
    pub params: String,
    pub replication: u64,
    pub step: u64,
    pub reward: u64,
    pub realized_regret: f64,
    pub pseudo_regret: f64,
    pub avg_regret_per_offer: f64,
}

impl ResultRow {
    /// `policy` or `policy[params]`.
    pub fn policy_label(&self) -> String {
        if self.params.is_empty() {
            self.policy.clone()
        } else {
            format!("{}[{}]", self.policy, self.params)
        }
    }

    pub fn metric(&self, metric: Metric) -> f64 {
        match metric {
            Metric::Realized => self.realized_regret,
            Metric::Pseudo => self.pseudo_regret,
            Metric::AvgPerOffer => self.avg_regret_per_offer,
        }
    }
}

pub fn read_results_csv<R: Read>(input: R) -> Result<Vec<ResultRow>, ResultsError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(input);
    let mut records = reader.records();

    let header = match records.next() {
        Some(rec) => rec.map_err(csv_error)?,
        None => {
            return Err(ResultsError::Malformed {
                line: 1,
                message: "empty file, expected header".into(),
            })
        }
    };
    if header.iter().ne(RESULTS_HEADER) {
        return Err(ResultsError::Malformed {
            line: 1,
            message: format!("expected header `{}`", RESULTS_HEADER.join(",")),
        });
    }

    let mut rows = Vec::new();
    for rec in records {
        let rec = rec.map_err(csv_error)?;
        let line = rec.position().map_or(0, |p| p.line());
        let field = |i: usize| rec.get(i).unwrap_or_default();
        let malformed = |i: usize| ResultsError::Malformed {
            line,
            message: format!("invalid {} `{}`", RESULTS_HEADER[i], field(i)),
        };
        let int = |i: usize| field(i).parse::<u64>().map_err(|_| malformed(i));
        let real = |i: usize| {
            field(i)
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| malformed(i))
        };
        if field(0).is_empty() || field(1).is_empty() {
            return Err(ResultsError::Malformed {
                line,
                message: "scenario and policy must be non-empty".into(),
            });
        }
        rows.push(ResultRow {
            scenario: field(0).to_owned(),
            policy: field(1).to_owned(),
            params: field(2).to_owned(),
            replication: int(3)?,
            step: int(4)?,
            reward: int(5)?,
            realized_regret: real(6)?,
            pseudo_regret: real(7)?,
            avg_regret_per_offer: real(8)?,
        });
    }
    Ok(rows)
}

fn csv_error(e: csv::Error) -> ResultsError {
    let line = e.position().map_or(0, |p| p.line());
    match e.kind() {
        csv::ErrorKind::Io(_) => match e.into_kind() {
            csv::ErrorKind::Io(io) => ResultsError::Io(io),
            _ => unreachable!(),
        },
        _ => ResultsError::Malformed {
            line,
            message: e.to_string(),
        },
    }
}

/// Extract `k` from a scenario label such as `uniform k=20`.
fn label_k(label: &str) -> Option<&str> {
    label.rsplit_once("k=").map(|(_, k)| k)
}

/// One point of a regret-vs-step curve.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    pub policy: String,
    pub step: u64,
    pub summary: Summary,
}

/// Summarize `metric` per `(policy, step)` over every row in the file.
///
/// Rows from different budgets that reach the same step are pooled: every
/// policy here is horizon-independent and each budget uses its own streams,
/// so those rows are independent draws of the same quantity.
pub fn aggregate_rows(rows: &[ResultRow], metric: Metric) -> Result<Vec<CurveRow>, ResultsError> {
    let first = rows
        .first()
        .ok_or_else(|| ResultsError::MixedConfig("no result rows".into()))?;
    if let Some(other) = rows.iter().find(|r| r.scenario != first.scenario) {
        let detail = match (label_k(&first.scenario), label_k(&other.scenario)) {
            (Some(a), Some(b)) if a != b => format!("k differs: {a} vs {b}"),
            _ => format!(
                "scenario differs: `{}` vs `{}`",
                first.scenario, other.scenario
            ),
        };
        return Err(ResultsError::MixedConfig(detail));
    }

    let mut policies: Vec<String> = Vec::new();
    let mut groups: BTreeMap<(usize, u64), Vec<f64>> = BTreeMap::new();
    for r in rows {
        let label = r.policy_label();
        let pos = match policies.iter().position(|p| *p == label) {
            Some(pos) => pos,
            None => {
                policies.push(label);
                policies.len() - 1
            }
        };
        groups
            .entry((pos, r.step))
            .or_default()
            .push(r.metric(metric));
    }
    Ok(groups
        .into_iter()
        .map(|((pos, step), values)| CurveRow {
            policy: policies[pos].clone(),
            step,
            summary: Summary::from_values(&values),
        })
        .collect())
}

/// Write `policy,step,mean,sd,stderr,ci95`; spread columns are empty for a
/// single observation.
pub fn write_aggregate_csv<W: Write>(rows: &[CurveRow], out: W) -> io::Result<()> {
    let opt = |v: Option<f64>| v.map(format_sig9).unwrap_or_default();
    let mut w = csv::Writer::from_writer(out);
    w.write_record(AGGREGATE_HEADER)?;
    for r in rows {
        w.write_record([
            r.policy.as_str(),
            &r.step.to_string(),
            &format_sig9(r.summary.mean),
            &opt(r.summary.sd),
            &opt(r.summary.stderr),
            &opt(r.summary.ci95),
        ])?;
    }
    w.flush()
}
