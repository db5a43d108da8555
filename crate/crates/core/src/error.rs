use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported algebra kind `{0}` (supported: sym, herm, spin)")]
    UnsupportedKind(String),

    #[error("invalid algebra descriptor: {0}")]
    InvalidDescriptor(String),

    #[error("algebra mismatch: {left} vs {right}")]
    AlgebraMismatch { left: String, right: String },

    #[error("coordinate vector has length {got}, algebra needs {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("element is not invertible (|det| = {det:e})")]
    Singular { det: f64 },

    #[error("point is outside the closed tube (imaginary part not in the closed cone)")]
    OutsideTube,

    #[error("pole of the Gamma function at argument {0}")]
    Pole(String),

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("parameter {name} = {value} violates {constraint}")]
    Domain {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("series has no representation in the weight-{weight} modular basis (residual nonzero at q^{order})")]
    NotModular { weight: i64, order: usize },

    #[error("integral diverges: {0}")]
    Divergent(String),

    #[error("quadrature did not converge: {0}")]
    NoConvergence(String),

    #[error("odd weight {0}: the H-invariant vector only exists for even weights")]
    OddWeight(i64),
}
