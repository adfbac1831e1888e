//! Error types shared across the crate.

use thiserror::Error;

/// Unified error type for all toolkit operations.
#[derive(Debug, Error)]
pub enum Error {
    /// An input was outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A quadrature rule failed to meet its internal accuracy estimate.
    #[error("quadrature accuracy {achieved:.3e} above target {target:.3e} ({context})")]
    QuadratureAccuracy {
        achieved: f64,
        target: f64,
        context: String,
    },

    /// An ODE integration failed (divergence, tolerance breach).
    #[error("solver error: {0}")]
    Solver(String),

    /// A computed quantity violated a structural invariant that identifies
    /// a wrong sign/orientation convention.
    #[error("convention error: {0}")]
    Convention(String),

    /// Dispersive radiation wrapped around the periodic domain into the
    /// measurement region; results from this run must be rejected.
    #[error(
        "wrap-around error at t = {t}: {monitor} amplitude {amplitude:.3e} exceeds {threshold:.3e}"
    )]
    WrapAround {
        t: f64,
        monitor: String,
        amplitude: f64,
        threshold: f64,
    },

    /// The PDE integration produced non-finite values.
    #[error("instability error at t = {t}: non-finite field values")]
    Instability { t: f64 },

    /// Requested expansion order is not defined for the given scattering data.
    #[error("unsupported order: {0}")]
    UnsupportedOrder(String),

    /// Evaluation outside a tabulated range.
    #[error("range error: {0}")]
    Range(String),

    /// Slope fitting on degenerate input.
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    /// Malformed configuration or CLI usage.
    #[error("usage error: {0}")]
    Usage(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
