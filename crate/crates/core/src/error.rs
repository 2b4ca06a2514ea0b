use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("matrix exponential overflowed")]
    Overflow,

    #[error("eigenvalue iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("Hilbert dimension {0} outside the supported range 2..=8")]
    DimensionOutOfRange(usize),

    #[error("density matrix trace is {0}, expected 1")]
    TraceViolation(f64),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("imaginary residue {0:e} exceeds tolerance")]
    ImaginaryResidue(f64),

    #[error("step size {dt} too large (stability bound {bound})")]
    StepTooLarge { dt: f64, bound: f64 },

    #[error("state vector norm {0} differs from 1")]
    NotNormalized(f64),

    #[error("state is maximally mixed; radial direction undefined")]
    MaximallyMixed,

    #[error("metric operator is not positive definite (eigenvalues {min_eigenvalue:e}..{max_eigenvalue:e})")]
    SingularMetric {
        min_eigenvalue: f64,
        max_eigenvalue: f64,
    },

    #[error("operator is not pseudo-Hermitian with respect to the metric (deviation {0:e})")]
    NotPseudoHermitian(f64),

    #[error("selected jump operator annihilates the state")]
    ZeroNormJump,

    #[error("singular matrix")]
    Singular,

    #[error("non-finite entry encountered")]
    NonFinite,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("positivity violated at t = {t}: min eigenvalue {min_eigenvalue:e}")]
    PositivityViolation { t: f64, min_eigenvalue: f64 },

    #[error("evaluation routes disagree: {first} vs {second}")]
    RouteMismatch { first: f64, second: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
