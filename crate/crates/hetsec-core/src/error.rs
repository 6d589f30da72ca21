//! Error types shared by the numeric layers.

use thiserror::Error;

/// Failure modes of the numeric routines (special functions, quadrature,
/// closed forms, Monte-Carlo estimation).
#[derive(Debug, Clone, Error)]
pub enum NumericError {
    /// An argument fell outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An integrand produced a non-finite value at an interior node.
    #[error("integrand returned a non-finite value at x = {abscissa:e}")]
    NonFiniteIntegrand { abscissa: f64 },

    /// Quadrature did not reach the requested tolerance within the allowed
    /// number of refinements. Carries the best estimate and its error bound.
    #[error(
        "quadrature failed to converge within {refinements} refinements \
         (best estimate {best:e}, error bound {error_bound:e})"
    )]
    NoConvergence {
        best: f64,
        error_bound: f64,
        refinements: usize,
    },

    /// A closed-form probability landed outside [0, 1] by more than the
    /// consistency tolerance, indicating a formula or convention bug rather
    /// than roundoff.
    #[error("closed form produced {value:e}, outside [0, 1] by {excess:e}")]
    Inconsistent { value: f64, excess: f64 },
}

pub type Result<T> = std::result::Result<T, NumericError>;
