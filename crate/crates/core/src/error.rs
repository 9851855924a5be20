use thiserror::Error;

/// Errors raised by the geometry kernel.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    InvalidDimension { expected: usize, found: usize },

    #[error("linear map is singular")]
    SingularMap,

    #[error("matrix is not symmetric (max asymmetry {defect:e})")]
    NotSymmetric { defect: f64 },

    #[error("matrix is not positive-definite (pivot {pivot} = {value:e})")]
    NonPositiveDefinite { pivot: usize, value: f64 },

    #[error("matrix is not antisymmetric (max defect {defect:e})")]
    NotAntisymmetric { defect: f64 },

    #[error("structure constants violate the Jacobi identity (defect {defect:e})")]
    JacobiViolated { defect: f64 },

    #[error("bracket entry ({i},{j}) must satisfy i < j")]
    BracketOrientation { i: usize, j: usize },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("vectors span a degenerate plane (Gram determinant {gram:e})")]
    DegeneratePlane { gram: f64 },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("input is not symplectic: {0}")]
    NotSymplecticInput(String),
}

pub type Result<T> = std::result::Result<T, GeometryError>;
