use thiserror::Error;

/// Errors raised by the computations in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("ring contexts differ: {left} vs {right}")]
    ContextMismatch { left: String, right: String },

    #[error("element is not a unit (ord_lambda = {ord})")]
    NotAUnit { ord: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("membership precondition failed: {0}")]
    Membership(String),

    #[error("level precondition failed: {0}")]
    Level(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("polynomial is not monic")]
    NonMonic,

    #[error("polynomial is not squarefree")]
    NotSquarefree,

    #[error("polynomial is inseparable (zero discriminant)")]
    Inseparable,

    #[error("hypothesis not verified: {0}")]
    Hypothesis(String),

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    /// Short machine-readable tag, used by the CLI's JSON error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid_argument",
            Error::ContextMismatch { .. } => "context_mismatch",
            Error::NotAUnit { .. } => "not_a_unit",
            Error::Domain(_) => "domain",
            Error::Membership(_) => "membership",
            Error::Level(_) => "level",
            Error::Parse { .. } => "parse",
            Error::NonMonic => "non_monic",
            Error::NotSquarefree => "not_squarefree",
            Error::Inseparable => "inseparable",
            Error::Hypothesis(_) => "hypothesis",
            Error::PrecisionExhausted(_) => "precision_exhausted",
            Error::Internal(_) => "internal",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
