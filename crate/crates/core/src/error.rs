use thiserror::Error;

/// Errors produced by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The rotation angle is too close to 0 or π for the axis-angle chart.
    #[error("rotation angle {angle} is within the degenerate set (identity or half-turn)")]
    DegenerateRotation { angle: f64 },

    /// An argument lies outside the range an evaluator supports.
    #[error("{what} = {value} is outside the supported range [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    /// An argument lies outside the mathematical domain of a function.
    #[error("{what} = {value} is outside the domain {domain}")]
    DomainError {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    /// Adaptive quadrature gave up before reaching the requested tolerance.
    #[error(
        "quadrature did not converge: error estimate {estimate:e} > tolerance {tolerance:e} after {intervals} intervals"
    )]
    NoConvergence {
        estimate: f64,
        tolerance: f64,
        intervals: usize,
    },

    /// A distribution was constructed with inconsistent parameters.
    #[error("invalid distribution: {0}")]
    InvalidSpec(String),

    /// A matrix failed the rotation invariants.
    #[error("not a rotation: {0}")]
    NotARotation(String),

    /// Landmark or Gram matrix input failed its invariants.
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
}

pub type Result<T> = std::result::Result<T, Error>;
