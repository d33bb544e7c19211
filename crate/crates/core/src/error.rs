//! Error types shared by every numerical routine in the crate.

use thiserror::Error;

/// Errors produced by the dispersion, quench, and correlation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument or parameter lies outside its documented domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The Bogoliubov frequency turned imaginary (omega^2 < 0) at the
    /// offending momentum: the condensate is dynamically unstable there.
    #[error("unstable spectrum: omega^2 < 0 at k = {k}")]
    Instability {
        /// Dimensionless momentum at which the radicand went negative.
        k: f64,
    },

    /// A numerical tolerance could not be met.
    #[error("tolerance failure: {what} = {value:e} exceeds bound {bound:e}")]
    Tolerance {
        /// Name of the monitored quantity.
        what: &'static str,
        /// Measured value.
        value: f64,
        /// Bound that was violated.
        bound: f64,
    },

    /// A root or threshold search failed to bracket a sign change.
    #[error("bracketing failure: {0}")]
    Bracket(String),

    /// A requested time lies outside the integration window.
    #[error("time {tau} lies outside the integration window [{tau0}, {tau_end}]")]
    Window {
        /// The requested time.
        tau: f64,
        /// Window start.
        tau0: f64,
        /// Window end.
        tau_end: f64,
    },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
