//! Experiment config files.
//!
//! Configs are TOML documents; unknown keys are rejected. Example:
//!
//! ```toml
//! seed = 2015
//! k = 20
//! mode = "fresh"          # or "fixed"; default "fresh"
//! budgets = [100, 1000, 10000, 100000]
//! replications = 50       # default 50
//! checkpoints = 20        # default 20
//!
//! [scenario]
//! kind = "beta"           # "uniform" | "beta" | "explicit"
//! alpha = 1.0
//! beta = 3.0
//!
//! [[policies]]
//! name = "epsilon_greedy" # epsilon defaults to 0.1
//! epsilon = 0.1
//!
//! [[policies]]
//! name = "ucb1"
//!
//! [[policies]]
//! name = "thompson"
//! ```
//!
//! For `kind = "explicit"`, `probs = [...]` lists the payoff probabilities and
//! `k` may be omitted.

use serde::{Deserialize, Serialize};

use crate::error::{BanditError, Result};
use crate::policy::{PolicySpec, DEFAULT_EPSILON};
use crate::rng::MasterSeed;
use crate::sim::{ExperimentConfig, ScenarioGenerator, ScenarioMode};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default = "default_mode")]
    pub mode: String,
    pub budgets: Vec<u64>,
    #[serde(default = "default_replications")]
    pub replications: u64,
    #[serde(default = "default_checkpoints")]
    pub checkpoints: usize,
    pub scenario: ScenarioFile,
    pub policies: Vec<PolicyFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probs: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicyFile {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
}

fn default_mode() -> String {
    "fresh".into()
}

fn default_replications() -> u64 {
    ExperimentConfig::DEFAULT_REPLICATIONS
}

fn default_checkpoints() -> usize {
    ExperimentConfig::DEFAULT_CHECKPOINTS
}

/// Parse and validate a config document.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let de = toml::Deserializer::parse(text)
        .map_err(|e| BanditError::config("<document>", e.message().to_owned()))?;
    let file: ConfigFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let field = if path == "." {
            "<document>".to_owned()
        } else {
            path
        };
        BanditError::config(field, e.inner().message().to_owned())
    })?;
    file.into_config()
}

impl ConfigFile {
    pub fn into_config(self) -> Result<ExperimentConfig> {
        let mode = match self.mode.as_str() {
            "fresh" => ScenarioMode::Fresh,
            "fixed" => ScenarioMode::Fixed,
            other => {
                return Err(BanditError::config(
                    "mode",
                    format!("unknown mode `{other}` (expected fresh or fixed)"),
                ))
            }
        };

        let s = self.scenario;
        let reject = |field: &str, present: bool| -> Result<()> {
            if present {
                Err(BanditError::config(
                    format!("scenario.{field}"),
                    format!("not used by scenario kind `{}`", s.kind),
                ))
            } else {
                Ok(())
            }
        };
        let scenario = match s.kind.as_str() {
            "uniform" => {
                reject("alpha", s.alpha.is_some())?;
                reject("beta", s.beta.is_some())?;
                reject("probs", s.probs.is_some())?;
                ScenarioGenerator::Uniform
            }
            "beta" => {
                reject("probs", s.probs.is_some())?;
                let alpha = s
                    .alpha
                    .ok_or_else(|| BanditError::config("scenario.alpha", "required for beta"))?;
                let beta = s
                    .beta
                    .ok_or_else(|| BanditError::config("scenario.beta", "required for beta"))?;
                ScenarioGenerator::Beta { alpha, beta }
            }
            "explicit" => {
                reject("alpha", s.alpha.is_some())?;
                reject("beta", s.beta.is_some())?;
                let probs = s.probs.clone().ok_or_else(|| {
                    BanditError::config("scenario.probs", "required for explicit")
                })?;
                ScenarioGenerator::Explicit(probs)
            }
            other => {
                return Err(BanditError::config(
                    "scenario.kind",
                    format!("unknown kind `{other}` (expected uniform, beta or explicit)"),
                ))
            }
        };

        let k = match (&scenario, self.k) {
            (_, Some(k)) => k,
            (ScenarioGenerator::Explicit(probs), None) => probs.len(),
            (_, None) => return Err(BanditError::config("k", "required")),
        };

        let policies = self
            .policies
            .iter()
            .enumerate()
            .map(|(i, p)| match p.name.as_str() {
                "epsilon_greedy" => Ok(PolicySpec::EpsilonGreedy {
                    epsilon: p.epsilon.unwrap_or(DEFAULT_EPSILON),
                }),
                "ucb1" | "thompson" if p.epsilon.is_some() => Err(BanditError::config(
                    format!("policies[{i}].epsilon"),
                    format!("not a parameter of `{}`", p.name),
                )),
                "ucb1" => Ok(PolicySpec::Ucb1),
                "thompson" => Ok(PolicySpec::Thompson),
                other => Err(BanditError::config(
                    format!("policies[{i}].name"),
                    format!("unknown policy `{other}` (expected epsilon_greedy, ucb1 or thompson)"),
                )),
            })
            .collect::<Result<Vec<_>>>()?;

        let config = ExperimentConfig {
            seed: MasterSeed(self.seed),
            k,
            scenario,
            mode,
            budgets: self.budgets,
            policies,
            replications: self.replications,
            checkpoints: self.checkpoints,
        };
        config.validate()?;
        Ok(config)
    }
}

impl From<&ExperimentConfig> for ConfigFile {
    fn from(c: &ExperimentConfig) -> Self {
        let scenario = match &c.scenario {
            ScenarioGenerator::Uniform => ScenarioFile {
                kind: "uniform".into(),
                alpha: None,
                beta: None,
                probs: None,
            },
            ScenarioGenerator::Beta { alpha, beta } => ScenarioFile {
                kind: "beta".into(),
                alpha: Some(*alpha),
                beta: Some(*beta),
                probs: None,
            },
            ScenarioGenerator::Explicit(probs) => ScenarioFile {
                kind: "explicit".into(),
                alpha: None,
                beta: None,
                probs: Some(probs.clone()),
            },
        };
        ConfigFile {
            seed: c.seed.0,
            k: Some(c.k),
            mode: match c.mode {
                ScenarioMode::Fresh => "fresh",
                ScenarioMode::Fixed => "fixed",
            }
            .into(),
            budgets: c.budgets.clone(),
            replications: c.replications,
            checkpoints: c.checkpoints,
            scenario,
            policies: c
                .policies
                .iter()
                .map(|p| PolicyFile {
                    name: p.name().into(),
                    epsilon: match p {
                        PolicySpec::EpsilonGreedy { epsilon } => Some(*epsilon),
                        _ => None,
                    },
                })
                .collect(),
        }
    }
}

/// Serialize a config back to TOML.
pub fn to_toml_string(config: &ExperimentConfig) -> String {
    toml::to_string(&ConfigFile::from(config)).expect("config serializes to TOML")
}
