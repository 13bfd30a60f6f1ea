use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("no connected topology after {attempts} draws")]
    Disconnected { attempts: usize },

    #[error("{algorithm} diverged at iteration {iteration}")]
    Diverged { algorithm: &'static str, iteration: usize },

    #[error("all {trials} trials of {algorithm} diverged")]
    AllDiverged { algorithm: &'static str, trials: usize },

    #[error("{0} requires the noise factor X_v, which the noise model does not define")]
    MissingChiV(&'static str),

    #[error(transparent)]
    Config(#[from] crate::config::ConfigError),

    #[error("malformed data: {0}")]
    Malformed(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }
}

pub(crate) fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, actual })
    }
}
