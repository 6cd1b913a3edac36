//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("fields live on different grids ({0} vs {1} points)")]
    GridMismatch(usize, usize),

    #[error("non-finite values encountered in {0}")]
    NonFinite(&'static str),

    #[error("layer depth fell below the positivity floor (min depth {min_depth:.3e})")]
    DepthViolation { min_depth: f64 },

    #[error("singular Fourier multiplier: 1 + a*k^2 = {value:.3e} at k = {k:.6}")]
    SingularMultiplier { k: f64, value: f64 },

    #[error(
        "elliptic solve did not converge: relative residual {residual:.3e} after {iterations} iterations"
    )]
    EllipticNonConvergence { residual: f64, iterations: usize },

    #[error("solution blew up at t = {time:.6} (max-norm {max_norm:.3e})")]
    BlowUp { time: f64, max_norm: f64 },

    #[error("time step {dt:.3e} rejected: {reason}")]
    UnstableStep { dt: f64, reason: String },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Blow-up is a legitimate scientific outcome (wave breaking), not a bug;
    /// callers that record it per-model use this to tell it apart.
    pub fn is_blowup(&self) -> bool {
        matches!(self, Error::BlowUp { .. })
    }
}
