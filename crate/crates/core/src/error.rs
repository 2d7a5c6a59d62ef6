use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("operator is not positive semidefinite (eigenvalue {eigenvalue:.3e})")]
    NotPositive { eigenvalue: f64 },

    #[error("trace {trace} is outside the allowed range")]
    BadTrace { trace: f64 },

    #[error("probabilities sum to {total}, expected 1")]
    NotNormalized { total: f64 },

    #[error("probability entry {index} is zero or negative ({value:.3e})")]
    ZeroProbability { index: usize, value: f64 },

    #[error("decomposition is not trace decreasing (largest eigenvalue of sum A^dag A is {max_eigenvalue})")]
    NotTraceDecreasing { max_eigenvalue: f64 },

    #[error("an operation needs at least one decomposition operator")]
    EmptyKraus,

    #[error("matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("a^dag a is not a positive multiple of the support projector (residual {residual:.3e})")]
    SupportViolation { residual: f64 },

    #[error("operation annihilates the state (output trace {trace:.3e})")]
    Annihilated { trace: f64 },

    #[error("operation is not deterministic (completeness residual {residual:.3e})")]
    NotDeterministic { residual: f64 },

    #[error("code basis is not orthonormal (residual {residual:.3e})")]
    NotOrthonormal { residual: f64 },

    #[error("state is not supported on the code subspace (leakage {leakage:.3e})")]
    NotOnCode { leakage: f64 },

    #[error("operation is not reversible on the code: {0}")]
    NotReversible(String),

    #[error("measurement is incomplete (residual {residual:.3e})")]
    IncompleteMeasurement { residual: f64 },

    #[error("invalid tolerance configuration: {0}")]
    InvalidTolerance(String),
}
