//! Exact arithmetic: number fields, polynomials, rational functions, the
//! curve/cover function-field towers, quadratic extension towers, lattice
//! reduction and algebraic recognition, and interpolation.

pub mod ext;
pub mod field;
pub mod interp;
pub mod linalg;
pub mod lll;
pub mod numberfield;
pub mod poly;
pub mod ratfunc;
pub mod tower;

pub use ext::{sqrt_or_extend, TowerElt, TowerField};
pub use field::{Field, FieldSqrt};
pub use interp::rational_interpolate;
pub use lll::{integer_relation, lll_reduce, recognize_algebraic, recognize_k_relation};
pub use numberfield::{rational_sqrt, AlgebraicNumber, NumberField};
pub use poly::Poly;
pub use ratfunc::RatFunc;
pub use tower::{cover_sqrt, CoverFn, CoverRing, CurveFn, CurveRing};
