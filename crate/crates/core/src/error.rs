use thiserror::Error;

/// Errors raised by scenario construction, samplers, policies and the runner.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BanditError {
    #[error("probability {0} is outside [0, 1]")]
    OutOfRangeProbability(f64),
    #[error("scenario has no offers")]
    EmptyScenario,
    #[error("budget must be at least 1, got {0}")]
    InvalidBudget(u64),
    #[error("shape parameter must be positive and finite, got {0}")]
    InvalidShapeParameter(f64),
    #[error("arm {arm} is out of range for {k} arms")]
    UnknownArm { arm: usize, k: usize },
    #[error("reward {0} is not 0 or 1")]
    InvalidReward(u64),
    #[error("arm has not been played; its index is undefined")]
    UnplayedArm,
    #[error("invalid config at `{field}`: {message}")]
    ConfigInvalid { field: String, message: String },
    #[error("results mix incompatible configurations: {0}")]
    MixedConfig(String),
}

impl BanditError {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        BanditError::ConfigInvalid {
            field: field.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = BanditError> = std::result::Result<T, E>;
