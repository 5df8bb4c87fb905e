use thiserror::Error;

use crate::expr::ParseError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole: denominator {factor} vanishes at q = {at} (|value| = {magnitude:e})")]
    Pole {
        factor: String,
        at: String,
        magnitude: f64,
    },

    #[error("non-finite numeric value produced by {0}")]
    NonFinite(String),

    #[error("mode mismatch: operands belong to different algebras (q = {left} vs q = {right})")]
    ModeMismatch { left: String, right: String },

    #[error("exponent {0} outside the supported range of +/-1000000")]
    ExponentOverflow(i128),

    #[error("extended weight {0} has a non-integer component")]
    NonIntegerWeight(String),

    #[error("internal consistency violated: {0}")]
    Consistency(String),

    #[error("witness construction refused: {0}")]
    WitnessRefused(String),

    #[error("size guard exceeded: {0}")]
    SizeGuard(String),

    #[error("representation is not irreducible: {0}")]
    NotIrreducible(String),

    #[error("decomposition failed: {0}")]
    Decomposition(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("power iteration did not converge after {0} steps")]
    NoConvergence(usize),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T> = std::result::Result<T, Error>;
