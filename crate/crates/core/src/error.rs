use thiserror::Error;

/// Errors surfaced by the exact engines. Contract violations (out-of-bounds
/// indexing, malformed simplices) panic instead: they are bugs, not inputs.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("modulus {0} is not prime")]
    NonPrimeModulus(u64),

    #[error("matrix is not symplectic")]
    NotSymplectic,

    #[error("vector is not primitive")]
    NotPrimitive,

    #[error("ω(v, w) = {got}, expected 1")]
    NotUnimodularPair { got: i64 },

    #[error("enumeration budget exceeded: {what} ({count} > {budget})")]
    BudgetExceeded {
        what: String,
        count: usize,
        budget: usize,
    },

    #[error("truncation bound {bound} too small, need at least {required}")]
    TruncationTooSmall { bound: i64, required: i64 },

    #[error("{0} is not a simplex of the complex")]
    NotASimplex(String),

    #[error("vertex sets collide on {0} shared vertices")]
    VertexCollision(usize),

    #[error("downward closure violated: {face} is a face of {simplex} but not a simplex")]
    ClosureViolation { face: String, simplex: String },

    #[error("zero vector is not a point of P^1(Q)")]
    ZeroCusp,

    #[error("poset map is not {0}")]
    NotMonotone(&'static str),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
