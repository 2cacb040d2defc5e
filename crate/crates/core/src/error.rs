use thiserror::Error;

/// Errors raised by the numerical modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not symmetric: |a[{row}][{col}] - a[{col}][{row}]| = {gap:e} exceeds {tol:e}")]
    NotSymmetric {
        row: usize,
        col: usize,
        gap: f64,
        tol: f64,
    },

    #[error("matrix is singular (smallest pivot {pivot:e} <= {tol:e})")]
    SingularMatrix { pivot: f64, tol: f64 },

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    ConvergenceFailure { sweeps: usize, off_norm: f64 },

    #[error("unsupported dimension {dim} (at most {max})")]
    UnsupportedDimension { dim: usize, max: usize },

    #[error("no null-space vector for lambda = {lambda}: residual {residual:e} exceeds {tol:e}")]
    NoNullSpace {
        lambda: f64,
        residual: f64,
        tol: f64,
    },

    #[error("B + epsilon*I is still singular (epsilon = {epsilon:e})")]
    SingularAfterRegularization { epsilon: f64 },

    #[error("B is indefinite: eigenvalue {min_eigenvalue:e} below {tol:e}")]
    IndefiniteB { min_eigenvalue: f64, tol: f64 },

    #[error("spectrum is not real: eigenvalue {re} ± {im}i")]
    NonRealSpectrum { re: f64, im: f64 },

    #[error("vector is zero")]
    ZeroVector,

    #[error("degenerate denominator: u^T B u = {value:e}")]
    DegenerateDenominator { value: f64 },

    #[error("basis columns are not orthonormal (deviation {deviation:e})")]
    NonOrthonormalBasis { deviation: f64 },

    #[error("dataset has no labels")]
    MissingLabels,

    #[error("dataset has a single class; at least two are required")]
    SingleClass,

    #[error("wrong model kind: expected {expected}, found {found}")]
    WrongModel {
        expected: &'static str,
        found: &'static str,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for failures of the numerics themselves, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::ConvergenceFailure { .. }
                | Error::IndefiniteB { .. }
                | Error::SingularAfterRegularization { .. }
                | Error::NonRealSpectrum { .. }
                | Error::NoNullSpace { .. }
                | Error::SingularMatrix { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
