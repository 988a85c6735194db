use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid time value `{0}` (expected n, p/q or a decimal, non-negative)")]
pub struct ParseTimeError(pub String);

/// Structural problems found while assembling a machine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("undeclared {kind} `{name}`")]
    Undeclared { kind: &'static str, name: String },
    #[error("duplicate {kind} `{name}`")]
    Duplicate { kind: &'static str, name: String },
    #[error("invalid guard: {0}")]
    InvalidGuard(String),
    #[error("output delay must be a positive integer")]
    ZeroDelay,
    #[error("machine declares no states")]
    NoStates,
}

/// Failures of the analysis operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    /// The machine is outside the class an operation supports; the message
    /// names the violated precondition.
    #[error("unsupported machine class: {0}")]
    Unsupported(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}
