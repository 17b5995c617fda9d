use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config is not valid JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("config must be a JSON object")]
    NotAnObject,
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    #[error("config key `{key}` must be a {expected}")]
    WrongType { key: String, expected: &'static str },
    #[error("config key `{key}` has unsupported value `{value}`")]
    BadChoice { key: String, value: String },
    #[error("config key `{key}` = {value}: {constraint}")]
    Invalid {
        key: String,
        value: f64,
        constraint: String,
    },
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("{what} outside valid domain: {value}")]
    Domain { what: &'static str, value: f64 },
    #[error("simulation did not reach the sinter temperature within {steps} steps")]
    NoConvergence { steps: usize },
    #[error("invalid material table: {0}")]
    MaterialTable(String),
    #[error("invalid soil table: {0}")]
    SoilTable(String),
    #[error("invalid ratings table: {0}")]
    RatingsTable(String),
    #[error("mass fractions sum to {0}, expected 1")]
    WeightSum(f64),
    #[error("goal reliability {goal} is below the minimum {min}")]
    GoalBelowMinimum { goal: f64, min: f64 },
    #[error("phase results were computed with different parameter sets")]
    MismatchedParameters,
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Either failure kind, for operations that rebuild a model from new parameters.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Model(#[from] ModelError),
}
