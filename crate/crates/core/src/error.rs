use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum CoreError {
    /// A caller-supplied value is malformed (non-finite, out of range, unknown symbol).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A configuration violates a structural invariant (geometry, positivity, schema).
    #[error("configuration invariant violated: {0}")]
    ConfigInvariant(String),

    /// Evaluation requested at a singular point of a gauge term.
    #[error("singular evaluation point: {0}")]
    SingularPoint(String),

    /// The constraint matrix is not uniform over the sampled region; the caller
    /// must refine the region before classification is meaningful.
    #[error("ambiguous region: {0}")]
    AmbiguousRegion(String),

    /// A quantization entry point was handed a degenerate constraint system.
    #[error("degenerate constraint system: {0}")]
    DegenerateRefusal(String),

    /// The effective cyclotron frequency dropped to zero or below; the reduced
    /// oscillator ceases to exist.
    #[error("degenerate trap: {0}")]
    DegenerateTrap(String),

    /// A numerical procedure failed to converge within its budget.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Two internal evaluation routes disagree beyond tolerance.
    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
