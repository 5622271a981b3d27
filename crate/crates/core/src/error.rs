use thiserror::Error;

use crate::pipeline::Construction;

/// Errors raised anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid vertex set: {0}")]
    InvalidSet(String),
    #[error("invalid vertex pair: {0}")]
    InvalidPair(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("{what} of size {size} exceeds the configured cap {cap}")]
    TooLarge {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("{trials} trials requested, at least {min} required")]
    InsufficientTrials { trials: usize, min: usize },
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("set is not diverse enough: {0}")]
    NotDiverse(String),
    #[error("no vertex of degree >= {needed} survives after placing {placed} vertices")]
    InsufficientDegree { placed: usize, needed: usize },
    #[error("construction failed: {reason}")]
    ConstructionFailed {
        reason: String,
        partial: Option<Box<Construction>>,
    },
    #[error("set is not p-convenient: {0}")]
    NotConvenient(String),
    #[error("separation failed: {0}")]
    SeparationFailed(String),
    #[error("realization failed: {0}")]
    RealizationFailed(String),
    #[error("private-neighbour hypothesis fails: {0}")]
    NotPrivate(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
