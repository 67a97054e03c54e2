use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("leading coefficient is zero")]
    ZeroLeadingCoefficient,
    #[error("points coincide; no unique line through them")]
    CoincidentPoints,
    #[error("all homogeneous coordinates are zero")]
    ZeroVector,
    #[error("coordinate change is not invertible")]
    SingularMap,
    #[error("form has a repeated linear factor")]
    DegenerateForm,
    #[error("form is identically zero")]
    ZeroForm,
    #[error("curve is singular")]
    SingularCurve,
    #[error("numerical solver did not converge: {0}")]
    ConvergenceFailure(String),
    #[error("Hesse parameter is singular (k^3 = 1 or k = infinity)")]
    SingularParameter,
    #[error("point is not a flex of the curve (residual {0:.3e})")]
    NotAFlex(f64),
    #[error("gradient vanishes at the given point")]
    SingularAtFlex,
    #[error("scale factor must be nonzero")]
    ZeroScale,
    #[error("base point is not a flex")]
    NonFlexBase,
    #[error("lattice generators are linearly dependent over the reals")]
    DegenerateLattice,
    #[error("discriminant is numerically zero")]
    NumericalSingularity,
    #[error("coefficients are not real")]
    ComplexCoefficients,
    #[error("real curve has only one component")]
    OneComponent,
    #[error("canvas must be at least 64x64 pixels (got {0})")]
    InvalidCanvas(u32),
    #[error("point is not on the curve (residual {0:.3e})")]
    NotOnCurve(f64),
    #[error("points lie on different curves")]
    CurveMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
