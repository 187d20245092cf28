use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Text input (sequence, base specification, polynomial) could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// Structurally invalid input, e.g. an empty period.
    #[error("malformed input: {0}")]
    Malformed(String),

    /// A floor or sign decision could not be made at the available precision.
    #[error("precision exhausted while deciding {quantity} (working precision {bits} bits)")]
    Precision { quantity: String, bits: u32 },

    /// A point lies outside the domain of the map it was handed to.
    #[error("point outside domain: {0}")]
    Domain(String),

    /// A size guard tripped.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// The operation is not available for this kind of input.
    #[error("unsupported input: {0}")]
    Unsupported(String),

    /// The input violates a precondition of the operation.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A comparison stayed undecided up to the maximal digit depth.
    #[error("comparison undecided after {depth} digits{hint}")]
    DepthExhausted { depth: usize, hint: String },

    /// A structural property that must hold for valid input failed to hold.
    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    /// Two independent detectors disagreed.
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    /// The caller-supplied deadline passed.
    #[error("deadline exceeded")]
    DeadlineExceeded,
}

pub type Result<T> = std::result::Result<T, Error>;
