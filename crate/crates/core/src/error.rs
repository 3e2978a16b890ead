use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("input vectors are linearly dependent (pivot {pivot:.3e} at index {index})")]
    DependentInput { index: usize, pivot: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("structure vector field xi_{alpha} is not tangent (residual {residual:.3e})")]
    XiNotTangent { alpha: usize, residual: f64 },

    #[error("bad shape: {0}")]
    BadShape(String),

    #[error("vector is not tangent to the submanifold (residual {residual:.3e})")]
    NotTangent { residual: f64 },

    #[error("vector is not a unit vector (norm {norm})")]
    NotUnitVector { norm: f64 },

    #[error("vector does not lie in the distribution L (residual {residual:.3e})")]
    NotInL { residual: f64 },

    #[error("vectors are not orthonormal (defect {defect:.3e})")]
    NotOrthonormal { defect: f64 },

    #[error("Chen's lemma needs at least two numbers, got {0}")]
    BadK(usize),

    #[error("variant precondition violated: {0}")]
    VariantPreconditionViolated(String),

    #[error("submanifold point is not minimal (|H| = {h_norm:.3e})")]
    NotMinimal { h_norm: f64 },

    #[error("point is not slant: {0}")]
    NotSlant(String),

    #[error("plane search did not converge (best value {best})")]
    SearchDidNotConverge { best: f64 },

    #[error("bad dimension: {0}")]
    BadDimension(String),

    #[error("bad generator config: {0}")]
    BadConfig(String),

    #[error("ambient model violates the f-structure axioms: {0}")]
    InvalidAmbient(String),

    #[error("bad scenario: {0}")]
    Scenario(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable name, used by the CLI error line.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DependentInput { .. } => "DependentInput",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::XiNotTangent { .. } => "XiNotTangent",
            Error::BadShape(_) => "BadShape",
            Error::NotTangent { .. } => "NotTangent",
            Error::NotUnitVector { .. } => "NotUnitVector",
            Error::NotInL { .. } => "NotInL",
            Error::NotOrthonormal { .. } => "NotOrthonormal",
            Error::BadK(_) => "BadK",
            Error::VariantPreconditionViolated(_) => "VariantPreconditionViolated",
            Error::NotMinimal { .. } => "NotMinimal",
            Error::NotSlant(_) => "NotSlant",
            Error::SearchDidNotConverge { .. } => "SearchDidNotConverge",
            Error::BadDimension(_) => "BadDimension",
            Error::BadConfig(_) => "BadConfig",
            Error::InvalidAmbient(_) => "InvalidAmbient",
            Error::Scenario(_) => "Scenario",
            Error::Io(_) => "Io",
        }
    }
}
