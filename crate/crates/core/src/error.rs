use thiserror::Error;

/// Errors raised by the physics and numerics layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An asymptotic form was requested outside its declared window.
    #[error("outside validity domain: {what} = {value:.6e} (limit {limit:.6e})")]
    OutsideValidity {
        what: &'static str,
        value: f64,
        limit: f64,
    },

    #[error("path geometry invalid: {0}")]
    Geometry(String),

    #[error("quadrature did not converge on [{lo:.6e}, {hi:.6e}]: estimate {estimate:.3e} after {intervals} intervals")]
    QuadratureNonConvergence {
        lo: f64,
        hi: f64,
        estimate: f64,
        intervals: usize,
    },

    #[error("boundary-value oracle failed: {0}")]
    Oracle(String),

    #[error("no sign change in bracket: bound unreachable in validity window (ceiling m_gamma = {ceiling:.6e} cm^-1)")]
    Unreachable { ceiling: f64 },

    #[error("phase is not strictly increasing in m on the search bracket near m = {at:.6e} cm^-1")]
    NotMonotone { at: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
