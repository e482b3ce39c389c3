use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Input outside a function's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A result exceeds the representable range even after log-domain tricks.
    #[error("overflow: {0}")]
    Overflow(String),

    /// An iterative scheme failed to stabilize.
    #[error("no convergence: {0}")]
    NoConvergence(String),

    /// Matrix dimension requirement violated.
    #[error("dimension error: {0}")]
    Dimension(String),

    /// Skew-symmetry violated beyond tolerance.
    #[error("matrix is not skew-symmetric (residual {0:.3e})")]
    NotSkew(f64),

    /// Coincident source points beyond what perturbation can resolve.
    #[error("degenerate source points: {0}")]
    Degenerate(String),

    /// Singular input where an inverse is required.
    #[error("singular input: {0}")]
    Singular(String),

    /// Attempt to pool Monte Carlo estimates of different queries.
    #[error("incompatible estimates: {0}")]
    IncompatibleEstimates(String),

    /// Function evaluation limited to a pole.
    #[error("pole: {0}")]
    Pole(String),

    /// Mismatch between a spectral frame and an evaluation point.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
