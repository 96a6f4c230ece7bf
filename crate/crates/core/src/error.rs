use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A caller-supplied parameter violates a precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("tolerance {tolerance:e} not reached below the precision cap of {cap_bits} bits")]
    ToleranceNotReached { tolerance: f64, cap_bits: u32 },
    #[error("ordering not certified below the precision cap of {cap_bits} bits: {what}")]
    PrecisionExhausted { what: String, cap_bits: u32 },
    #[error("need at least two values, got {0}")]
    InsufficientValues(usize),
    #[error("mismatch: {0}")]
    Mismatch(String),
    #[error("Jacobi iteration did not converge after {0} sweeps")]
    NoConvergence(usize),
}
