use thiserror::Error;

/// Crate-wide error type. The CLI maps these onto distinct exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("undefined resultant: both inputs are zero")]
    UndefinedResultant,

    #[error("multiplicity modulus must be irreducible of degree >= 1: {0}")]
    BadModulus(String),

    #[error("division by zero in {0}")]
    DivisionByZero(String),

    #[error("number field element mismatch: operands have different minimal polynomials")]
    MinPolyMismatch,

    #[error("delta is not invertible in the coefficient ring")]
    DeltaNotInvertible,

    #[error("orbit budget exceeded: {0}")]
    OrbitBudget(String),

    #[error("stabilization undetermined within budget of {0} iterations")]
    StabilizationUndetermined(usize),

    #[error("green function unresolved: {0}")]
    Unresolved(String),

    #[error("filtration undefined outside the bounded region: |t| = {t_abs} > L = {l}")]
    OutsideBoundedRegion { t_abs: f64, l: f64 },

    #[error("metric requested before stabilization (l_n = 0 at n = {0})")]
    BeforeStabilization(usize),

    #[error("theorem inapplicable: {0}")]
    Inapplicable(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("certificate check failed: {0}")]
    CertificateFailed(String),

    #[error("exact division failed in {0}")]
    InexactDivision(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the CLI. Documented in the README.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Invalid(_) | Error::Json(_) => 2,
            Error::OrbitBudget(_)
            | Error::StabilizationUndetermined(_)
            | Error::Unresolved(_) => 3,
            Error::Inapplicable(_) | Error::HypothesisViolated(_) => 4,
            _ => 1,
        }
    }
}
