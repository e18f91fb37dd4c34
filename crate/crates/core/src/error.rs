//! Error type shared by all modules.
//!
//! Numeric payloads are stored as `f64` regardless of the working scalar so
//! that the error type stays object-safe and display-friendly.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// An argument violated a precondition (non-finite input, zero vector,
    /// malformed quadrature region, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Time integration produced a non-finite state.
    #[error("numerical blowup at t = {time}")]
    NumericalBlowup { time: f64 },

    /// The metric is singular or not positive-definite at the given point.
    #[error("singular metric at point ({:.6}, {:.6}, {:.6})", point[0], point[1], point[2])]
    SingularMetric { point: [f64; 3] },

    /// The metric degenerated along the flow; `time` is the critical time.
    #[error("flow singularity at t = {time:.6}")]
    FlowSingularity { time: f64 },

    /// An operation that requires an Einstein metric was given one that
    /// fails the proportionality fit.
    #[error("metric is not Einstein (max residual {max_residual:.3e} over tolerance {tol:.3e})")]
    NotEinstein { max_residual: f64, tol: f64 },

    /// Frame vorticity supplied explicitly disagrees with the flow vorticity
    /// in a form that assumes they coincide.
    #[error("frame vorticity inconsistent with flow vorticity (max deviation {max_deviation:.3e})")]
    InconsistentFrame { max_deviation: f64 },
}

pub type Result<V> = std::result::Result<V, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
