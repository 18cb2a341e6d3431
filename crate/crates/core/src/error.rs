use thiserror::Error;

/// Errors raised by the amplitude library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid mode count {0}; at least one mode is required")]
    InvalidModeCount(usize),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not symmetric (max asymmetry {asymmetry:e}, allowed {allowed:e})")]
    NotSymmetric { asymmetry: f64, allowed: f64 },

    #[error("matrix is not symplectic (residual {residual:e}, allowed {allowed:e})")]
    NotSymplectic { residual: f64, allowed: f64 },

    #[error("non-finite entries in input")]
    NonFinite,

    #[error("matrix is not positive definite (min eigenvalue {min_eigenvalue:e}); use the general path")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("method {method} does not apply: {reason}")]
    MethodNotApplicable { method: &'static str, reason: String },

    #[error("vacuum probability out of range: log det = {log_det:e}")]
    ProbabilityOutOfRange { log_det: f64 },

    #[error("propagator R became singular at t' = {time} (|det R| = {det:e})")]
    SingularPropagator { time: f64, det: f64 },

    #[error("quadrature did not converge: estimate {estimate_re} + {estimate_im}i, error bound {error:e}")]
    QuadratureNotConverged {
        estimate_re: f64,
        estimate_im: f64,
        error: f64,
    },

    #[error("Fock space too large: dimension {dim} exceeds cap {cap}")]
    FockTooLarge { dim: usize, cap: usize },

    #[error("invalid Fock configuration: {0}")]
    FockConfig(String),

    #[error("invalid schedule: {0}")]
    Schedule(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
