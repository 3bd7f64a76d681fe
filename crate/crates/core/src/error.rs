use thiserror::Error;

/// Errors raised by operator construction, divergence evaluation, bound
/// formulas and the Neyman-Pearson oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |a_ij - conj(a_ji)| = {asymmetry:e}")]
    NotHermitian { asymmetry: f64 },

    #[error("expected {expected} entries for a {dim}x{dim} matrix, found {found}")]
    Shape {
        dim: usize,
        expected: usize,
        found: usize,
    },

    #[error("dimension must be at least 1")]
    EmptyDimension,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not positive semidefinite: eigenvalue {min_eigenvalue:e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("state trace is {trace}, expected 1")]
    NotNormalized { trace: f64 },

    #[error("operator is zero")]
    ZeroOperator,

    #[error("alpha = {0} is outside (0, inf) \\ {{1}}")]
    InvalidAlpha(f64),

    #[error("epsilon = {0} is outside (0, 1)")]
    InvalidEpsilon(f64),

    #[error("support of the first operator is not contained in the support of the second")]
    SupportViolation,

    #[error("tensor power dimension {dim} exceeds the configured cap {cap}")]
    DimensionCap { dim: u128, cap: usize },

    #[error("copy count n must be at least 1")]
    ZeroCopies,

    #[error("delta_n = {delta} is outside [0, epsilon/(2n)] = [0, {max}]")]
    DeltaOutOfRange { delta: f64, max: f64 },

    #[error("delta = {0} must be non-negative")]
    NegativeDelta(f64),

    #[error("null hypothesis pool is empty")]
    EmptyPool,

    #[error("multiplier vector has length {found}, expected {expected}")]
    MultiplierLength { expected: usize, found: usize },

    #[error("multiplier {index} is negative ({value})")]
    NegativeMultiplier { index: usize, value: f64 },

    #[error("test operator has eigenvalue {eigenvalue} outside [0, 1]")]
    InvalidTest { eigenvalue: f64 },

    #[error("schedule infeasible: a*/sqrt(n) = {ratio} exceeds min(1/2, c/(2 kappa_max)) = {limit}")]
    ScheduleInfeasible { ratio: f64, limit: f64 },

    #[error("kappa_max = {kappa} exceeds its analytic bound {bound}")]
    KappaBound { kappa: f64, bound: f64 },

    #[error("linear program failed: {0}")]
    LinearProgram(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
