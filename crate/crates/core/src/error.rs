use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix has non-finite entries or inconsistent shape: {0}")]
    InvalidMatrix(String),
    #[error("dimension {0} exceeds the configured cap {1}")]
    DimensionCap(usize, usize),
    #[error("matrix is not Hermitian (asymmetry {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPsd(f64),
    #[error("operator is not a contraction (norm {0:.12})")]
    NotContraction(f64),
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("operators do not commute (residual {0:.3e})")]
    NonCommuting(f64),
    #[error("polynomial degree {0} is too high")]
    DegreeTooHigh(usize),
    #[error("polynomial has a nonzero constant term")]
    NonzeroConstant,
    #[error("factor equation could not be solved (residual {0:.3e})")]
    FactorizationFailed(f64),
    #[error("problem is infeasible: {0}")]
    Infeasible(String),
    #[error("data is outside the supported class: {0}")]
    NotInClass(String),
    #[error("window {window} too small for degree {degree}")]
    WindowTooSmall { window: usize, degree: usize },
    #[error("window mismatch: {0} vs {1}")]
    WindowMismatch(usize, usize),
    #[error("degree overflow in block {index}: degree {degree}")]
    DegreeOverflow { index: usize, degree: i64 },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("spectrum does not cover the circle (largest angular gap {0:.3e})")]
    SpectrumTooSparse(f64),
    #[error("internal cross-check failed: {0}")]
    CrossCheck(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
