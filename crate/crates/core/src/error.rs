use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix has a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is not Hermitian (max |A - A^dag| = {residual:e})")]
    NotHermitian { residual: f64 },
    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),
    #[error("eigenvalue {eigenvalue:e} too small for negative power")]
    SingularForNegativePower { eigenvalue: f64 },
    #[error("support of first argument is not contained in support of second (leak {leak:e})")]
    SupportViolation { leak: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("Kraus map has {count} operators, more than dim^2 = {max}")]
    TooManyOperators { count: usize, max: usize },
    #[error("invariant state is not unique: {count} superoperator eigenvalues within tolerance of 1")]
    NonUniqueInvariant { count: usize },
    #[error("state is not positive definite (min eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },
    #[error("state is not invariant under the map (residual {residual:e})")]
    NotInvariant { residual: f64 },
    #[error("assumption not satisfied: {0}")]
    AssumptionNotSatisfied(String),
    #[error("not a complete set of orthogonal projectors: {0}")]
    NotAProjectorSet(String),
    #[error("projector {index} is not rank one (trace {trace})")]
    NotRankOne { index: usize, trace: f64 },
    #[error("entropy table has {count} undefined cells carrying forward weight")]
    UndefinedCells { count: usize },
    #[error("quadrature did not converge on [{a}, {b}]")]
    QuadratureFailure { a: f64, b: f64 },
    #[error("integrated rate is negative ({gamma_int:e}); the map is not completely positive here")]
    NegativeIntegratedRate { gamma_int: f64 },
    #[error("degenerate eigenvector parameter b = {b:e}")]
    DegenerateEigenvector { b: f64 },
    #[error("closed form is singular at a pure state (z = {z})")]
    SingularAtPureState { z: f64 },
    #[error("potential gap diverges at zero integrated rate")]
    DivergentAtZeroGamma,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("eigendecomposition failed")]
    EigenFailure,
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
