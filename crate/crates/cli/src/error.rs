use std::fmt;

use cumdir::Error;

pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;
pub const EXIT_ORACLE: i32 = 4;

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Config(String),
    OracleFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Config(_) => EXIT_CONFIG,
            CliError::OracleFailed(_) => EXIT_ORACLE,
        }
    }

    /// Library errors caused by data are input errors; the rest are
    /// configuration errors.
    pub fn from_lib(err: Error) -> Self {
        match err {
            Error::EmptySample
            | Error::TooFewSamples { .. }
            | Error::LengthMismatch { .. }
            | Error::NonFinite { .. }
            | Error::DegenerateSeries(_)
            | Error::Io(_)
            | Error::Csv(_) => CliError::Input(err.to_string()),
            _ => CliError::Config(err.to_string()),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(msg) => write!(f, "input error: {msg}"),
            CliError::Config(msg) => write!(f, "configuration error: {msg}"),
            CliError::OracleFailed(n) => write!(f, "{n} oracle model(s) failed"),
        }
    }
}
