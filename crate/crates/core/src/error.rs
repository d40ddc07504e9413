use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("variable count mismatch: {left} vs {right}")]
    VariableMismatch { left: usize, right: usize },

    #[error("expected a homogeneous form")]
    NotHomogeneous,

    #[error("expected a linear form")]
    NotLinear,

    #[error("the zero form has no apolar algebra")]
    ZeroForm,

    #[error("form is not symmetric")]
    NotSymmetric,

    #[error("power-sum monomials of degree {degree} are dependent in {n} variables")]
    DependentBasis { n: usize, degree: usize },

    #[error("degree {0} is outside the supported range")]
    DegreeOutOfRange(usize),

    #[error("n = {n} is outside the supported range: {reason}")]
    UnsupportedSize { n: usize, reason: String },

    #[error("point is not a valid projective point (all coordinates zero)")]
    ZeroPoint,

    #[error("point {0} is not on the cuspidal cubic")]
    NotOnCurve(String),

    #[error("point {0} is not on the tangent line at the cusp away from the cusp")]
    NotOnTangentLine(String),

    #[error("invalid resolution case {case} for n = {n}")]
    InvalidCase { case: String, n: usize },

    #[error("quotient is not artinian (nonzero in degree {0})")]
    NotArtinian(usize),

    #[error("{0}")]
    Parse(String),

    #[error("non-integral Betti number {0}")]
    NonIntegral(String),
}

pub type Result<T> = std::result::Result<T, Error>;
