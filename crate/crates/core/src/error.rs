use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum IrsaError {
    #[error("invalid degree distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("strategy violates L*K <= M: L={sources}, K={packets}, M={slots}")]
    TrafficConstraint {
        sources: usize,
        packets: usize,
        slots: usize,
    },

    #[error("invalid frame: {0}")]
    InvalidFrame(String),

    #[error("empty arm set")]
    EmptyArmSet,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl IrsaError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        IrsaError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, IrsaError>;
