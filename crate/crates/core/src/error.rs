use thiserror::Error;

/// Errors raised by the algebra, curvature, flow and soliton routines.
///
/// Values are stored as `f64` so that the error type is independent of the
/// scalar the computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Jacobi identity violated: residual {residual:e} at basis triple ({}, {}, {})", .triple.0 + 1, .triple.1 + 1, .triple.2 + 1)]
    JacobiViolation { residual: f64, triple: (usize, usize, usize) },
    #[error("bracket is not 2-step nilpotent")]
    NotTwoStep,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is singular or ill-conditioned (condition number {condition:e})")]
    SingularMatrix { condition: f64 },
    #[error("metric is not positive definite (eigenvalue ratio {ratio:e})")]
    NotPositiveDefinite { ratio: f64 },
    #[error("endomorphism is not Hermitian and supported on the center (defect {defect:e})")]
    BadSupport { defect: f64 },
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("bracket is zero")]
    ZeroBracket,
    #[error("bracket does not have unit norm (norm {norm})")]
    NotUnitNorm { norm: f64 },
    #[error("non-finite value encountered")]
    NonFinite,
    #[error("integration step failure at t = {t} (step size {step:e})")]
    StepFailure { t: f64, step: f64 },
    #[error("structure drift at t = {t}: residual {residual:e}")]
    StructureDrift { t: f64, residual: f64 },
    #[error("norm decay law violated at t = {t}: mismatch {mismatch:e}")]
    DecayLawViolation { t: f64, mismatch: f64 },
    #[error("no convergence to a fixed point by t = {t}: residual {residual:e}")]
    NoConvergence { t: f64, residual: f64 },
    #[error("bracket is not a fixed point of the normalized flow (residual {residual:e})")]
    NotFixedPoint { residual: f64 },
    #[error("pairing expected to be real has imaginary part {imag:e}")]
    NonReal { imag: f64 },
}

impl Error {
    /// True for errors caused by invalid input data, false for numerical failures.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::JacobiViolation { .. }
                | Error::NotTwoStep
                | Error::DimensionMismatch { .. }
                | Error::NotPositiveDefinite { .. }
                | Error::BadSupport { .. }
                | Error::BadParameter(_)
                | Error::ZeroBracket
                | Error::NotUnitNorm { .. }
                | Error::NonFinite
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
