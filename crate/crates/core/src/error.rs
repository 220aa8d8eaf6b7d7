use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid joint table: {0}")]
    InvalidTable(String),

    #[error("invalid variable subset: {0}")]
    InvalidSubset(String),

    #[error("exhaustive subset search supports at most {max} features, got {got}")]
    TooManyFeatures { max: usize, got: usize },

    #[error("invalid scenario parameters: {0}")]
    InvalidScenario(String),

    #[error("class slope k must lie strictly between 0 and 1, got {0}")]
    InvalidK(f64),

    #[error("scenario I class mutual information is only tabulated for delta = 0.5, got {0}")]
    UnsupportedDelta(f64),

    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    #[error("invalid sample: {0}")]
    InvalidSample(String),

    #[error("unknown method `{name}`; valid methods: {valid}")]
    UnknownMethod { name: String, valid: String },

    #[error("invalid method specification: {0}")]
    InvalidMethod(String),

    #[error("config error at line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error("invalid experiment configuration: {0}")]
    InvalidExperiment(String),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
