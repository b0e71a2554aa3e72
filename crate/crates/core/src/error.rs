use thiserror::Error;

/// Errors raised by the factorization pipeline.
///
/// Column and supernode indices are 0-based internally; `Display` renders
/// them 1-based to match the external (Matrix Market) convention.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    Validation(&'static str),

    #[error("matrix is not positive definite: nonpositive pivot at column {}{}",
        .column + 1,
        match .original { Some(o) => alloc::format!(" (original column {})", o + 1), None => alloc::string::String::new() })]
    NotPositiveDefinite { column: usize, original: Option<usize> },

    #[error("singular diagonal block at column {}", .column + 1)]
    SingularBlock { column: usize },

    #[error("singular factor: zero diagonal at column {}", .column + 1)]
    SingularFactor { column: usize },

    #[error("device memory exceeded at supernode {}: {required} bytes required, limit {limit}", .supernode + 1)]
    DeviceMemoryExceeded {
        supernode: usize,
        required: usize,
        limit: usize,
    },
}

pub type Result<T> = core::result::Result<T, Error>;
