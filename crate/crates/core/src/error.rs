use thiserror::Error;

/// Errors produced by state construction, spectral computation, and the
/// thermodynamic/uncertainty operations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix must be square with n >= 1 (got {got} entries for n = {n})")]
    BadShape { n: usize, got: usize },

    #[error("matrix entries must be finite")]
    NonFiniteEntries,

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("matrix is not Hermitian: max |A - A*| = {deviation:.3e} exceeds {tol:.3e}")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("eigensolver did not converge within {0} sweeps")]
    NonConvergence(usize),

    #[error("spectral domain violation: {0}")]
    SpectralDomain(String),

    #[error("matrix is not positive definite (min eigenvalue {0:.6e})")]
    NotPositiveDefinite(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:.6e})")]
    NotPositive(f64),

    #[error("trace must be positive (got {0:.6e})")]
    ZeroTrace(f64),

    #[error("state vector must be nonzero")]
    ZeroVector,

    #[error("beta out of range: {0}")]
    BetaRange(String),

    #[error("beta must be nonzero")]
    BetaZero,

    #[error("alpha must not be 1 here")]
    AlphaOne,

    #[error("alpha = infinity is not admissible here")]
    AlphaInfinite,

    #[error("alpha = infinity is unsupported for this state/observable pair: {0}")]
    AlphaInfiniteUnsupported(String),

    #[error("invalid alpha: {0}")]
    InvalidAlpha(String),

    #[error("sigma must be strictly positive definite (min eigenvalue {0:.6e})")]
    SingularSigma(f64),

    #[error("observable count must be even (got {0})")]
    OddObservableCount(usize),

    #[error("dimension must be even (got {0})")]
    OddDimension(usize),

    #[error("invalid probe: {0}")]
    InvalidProbe(String),

    #[error("unknown check: {0}")]
    UnknownCheck(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
