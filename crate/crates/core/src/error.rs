//! Error type shared across the exact and numeric layers.

use thiserror::Error;

#[derive(Error, Debug, Clone)]
pub enum Error {
    #[error("division by zero in {0}")]
    DivisionByZero(&'static str),
    #[error("degenerate lattice: rows are linearly dependent")]
    DegenerateLattice,
    #[error("recognition failure: no algebraic candidate within tolerance (raise precision or height bound)")]
    RecognitionFailure,
    #[error("no rational function of the requested degree fits the samples")]
    NoFunctionOfThisDegree,
    #[error("interpolation is ambiguous at the requested degree bounds")]
    AmbiguousDegree,
    #[error("malformed correspondence: {0}")]
    MalformedCorrespondence(&'static str),
    #[error("curve is not valid: {0}")]
    InvalidCurve(String),
    #[error("point is not on the curve")]
    PointNotOnCurve,
    #[error("branch points nearly coincident at working precision")]
    IllConditioned,
    #[error("Abel-Jacobi fiber is not unique (degenerate theta fiber)")]
    NonUniqueFiber,
    #[error("Abel-Jacobi inversion failed to converge")]
    InversionFailure,
    #[error("Jacobian has no rank-2 order of discriminant {0}")]
    NotRmByD(i64),
    #[error("too few usable samples: got {got}, need {need}")]
    InsufficientSamples { got: usize, need: usize },
    #[error("interpolated correspondence fails y^2 = h(x)")]
    InterpolationInconsistency,
    #[error("cover is inseparable: dF/dx vanishes identically")]
    InseparableCover,
    #[error("one-form image does not lie in the span of dt/u and t dt/u")]
    NotEndomorphismForm,
    #[error("u is not rational over K(x,y)(t); presentation unsupported")]
    UnsupportedPresentation,
    #[error("disc_x(F) vanishes identically; cover is reducible")]
    ReducibleCover,
    #[error("certification failed: {0}")]
    CertificationFailure(String),
    #[error("fiber of the family is singular")]
    SingularFiber,
    #[error("square root does not exist in the given field")]
    NoSquareRoot,
    #[error("fiber at infinity cannot be resolved in this configuration")]
    FiberAtInfinity,
    #[error("operation unsupported: {0}")]
    Unsupported(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
