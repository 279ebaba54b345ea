//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature exhausted its refinement budget. `estimate`
    /// is the best value found, `error_bound` the remaining error estimate.
    #[error("quadrature did not converge: estimate {estimate}, error bound {error_bound}")]
    NonConvergent { estimate: f64, error_bound: f64 },

    /// The integrand produced NaN or an infinity.
    #[error("integrand not finite at x = {at}")]
    NonFinite { at: f64 },

    /// Degenerate or reversed integration interval.
    #[error("invalid integration interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    /// Parameter-set validation failure.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Cache policy inputs are inconsistent.
    #[error("invalid cache policy: {0}")]
    InvalidCache(String),

    /// A Monte-Carlo realization had no association candidate at all.
    #[error("simulation window too small: a realization had no candidate node")]
    WindowTooSmall,

    /// Configuration file problems.
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
