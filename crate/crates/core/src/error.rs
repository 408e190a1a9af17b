use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("sample is empty")]
    EmptySample,

    #[error("sample needs at least {min} rows, got {n}")]
    TooFewSamples { n: usize, min: usize },

    #[error("series lengths differ: x has {x} values, y has {y}")]
    LengthMismatch { x: usize, y: usize },

    #[error("non-finite value in series {series} at index {index}")]
    NonFinite { series: char, index: usize },

    #[error("series {0} has zero variance")]
    DegenerateSeries(char),

    #[error("invalid order {0}: must be at least 1")]
    InvalidOrder(usize),

    #[error("table holds orders up to {have}, {needed} required")]
    IncompleteTable { needed: usize, have: usize },

    #[error("moment table is malformed: {0}")]
    MalformedMoments(String),

    #[error("total order {order} exceeds the partition enumeration cap of {cap}")]
    OrderAboveCap { order: usize, cap: usize },

    #[error("neither cumulant matrix is rank-deficient")]
    NoRankDeficiency,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("noise source {0} carries only cumulants and cannot be sampled")]
    CumulantOnlyNoise(String),

    #[error("noise source {source_name} has cumulants up to order {have}, {needed} required")]
    MissingCumulants {
        source_name: String,
        needed: usize,
        have: usize,
    },

    #[error("unsupported format '{0}'")]
    UnsupportedFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("toml: {0}")]
    Toml(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
