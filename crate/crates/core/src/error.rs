use thiserror::Error;

use crate::lie::ParamViolation;

#[derive(Debug, Error)]
pub enum Error {
    #[error("attempted to invert zero in Q(zeta_{order})")]
    DivisionByZero { order: u32 },

    #[error("invalid parameters: {}", format_violations(.0))]
    InvalidParameters(Vec<ParamViolation>),

    #[error("tensor arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },

    #[error("slot {slot} out of range for arity {arity}")]
    SlotOutOfRange { slot: usize, arity: usize },

    #[error("tensor is not invertible: {0}")]
    NotInvertible(String),

    #[error("element is not in the subalgebra: {0}")]
    NotInSubalgebra(String),

    #[error("coefficient {0} is not a power of q^n")]
    NotAPowerOfQn(String),

    #[error("rewrite system is incomplete: no rule for {0}")]
    MissingRule(String),

    #[error("instance too large for this route: {0}")]
    TooLarge(String),

    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    #[error("malformed document: {0}")]
    Document(String),
}

fn format_violations(v: &[ParamViolation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
