use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("Padé ({p},{q}) denominator is singular at the scaled norm; increase the degree or lower the scaling threshold")]
    PadeDenominatorSingular { p: usize, q: usize },

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:e} below -{tolerance:e})")]
    NotPositiveSemidefinite { eigenvalue: f64, tolerance: f64 },

    #[error("pencil equation has no unique solution (Kronecker sum is singular)")]
    PencilNotUnique,

    #[error("singular or ill-conditioned Jacobian (reciprocal condition {rcond:e})")]
    SingularJacobian { rcond: f64 },

    #[error("scheme `{variant}` requires {requirement}")]
    Precondition {
        variant: &'static str,
        requirement: &'static str,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unknown problem `{0}`")]
    UnknownProblem(String),

    #[error("unknown scheme `{0}`")]
    UnknownScheme(String),

    #[error("unknown functional `{0}`")]
    UnknownFunctional(String),

    #[error("negative jump intensity {0}")]
    NegativeIntensity(f64),

    #[error("trajectory {trajectory} reached a non-finite state at t = {t}")]
    NonFiniteState { trajectory: u64, t: f64 },

    #[error("no reference value available for {0}")]
    ReferenceUnavailable(String),

    #[error("{0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
