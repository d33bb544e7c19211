//! Bogoliubov dynamics of a quenched quasi-2D dipolar condensate.
//!
//! The crate models a weakly interacting Bose-Einstein condensate tightly
//! confined along one axis, with both contact and dipolar interactions, whose
//! sound speed is swept in time by a smooth tanh ramp.  It provides:
//!
//! - [`dispersion`]: the momentum-space interaction kernel, the Bogoliubov
//!   spectrum with its roton minimum, and the critical density parameter
//!   where the spectrum turns unstable;
//! - [`quench`]: the ramp protocol, the proper-time/lab-time map, and the
//!   adaptive integration of the mode-mixing equations that produce
//!   quasiparticle pairs;
//! - [`correlations`]: thermal and post-quench density-density correlations,
//!   their analytic envelopes, and the nonseparability/steerability witness
//!   built from them.
//!
//! All quantities are dimensionless; see the [`dispersion`] module docs for
//! the unit conventions and the [`dispersion::Frame`] tag that tracks which
//! sound speed sets the scales.
//!
//! # Example
//!
//! ```
//! use roton_core::{Frame, PhysicsParams, QuenchProtocol};
//! use roton_core::quench::integrate_mode;
//! use roton_core::correlations::envelopes;
//!
//! // Pure dipolar condensate just below the critical density, described in
//! // post-quench units, swept from c_i^2/c_f^2 = 1/2 at unit rate.
//! let params = PhysicsParams::new(roton_core::R_MAX, 3.4, 0.0, Frame::Final)?;
//! let protocol = QuenchProtocol::new(0.5, 1.0)?;
//! let mode = integrate_mode(0.8, &params, &protocol, 1e-10)?;
//! let (lower, _upper) = envelopes(&mode, 0.0)?;
//! assert!(mode.beta_abs2() > 0.0); // the quench created pairs
//! assert!(lower < 1.0); // ... entangled ones
//! # Ok::<(), roton_core::Error>(())
//! ```

pub mod correlations;
pub mod dispersion;
pub mod error;
pub mod quench;
mod special;

pub use correlations::{CorrelationSeries, Detection, EntanglementReport, ModeClassification};
pub use dispersion::{Frame, ModeFrequency, PhysicsParams, RotonPoint, R_MAX};
pub use error::{Error, Result};
pub use quench::{ModeState, QuenchProtocol};

/// Complex scalar used for the Bogoliubov coefficients.
pub use num_complex::Complex64;
