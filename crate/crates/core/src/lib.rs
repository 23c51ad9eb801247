//! Real multiplication on genus-2 Jacobians through explicit algebraic
//! correspondences: high-precision discovery of the defining equations and
//! exact certification of the induced endomorphism.
//!
//! The crate has two halves. The exact half (`exact`, `curves`, `certify`,
//! `disc5`) works over number fields and function-field towers and proves
//! identities outright. The numeric half (`analytic`, `endo`, `discovery`)
//! computes period matrices, Abel-Jacobi maps and endomorphism lattices in
//! high-precision floating point, then hands candidate equations back to the
//! exact half for certification.

pub mod analytic;
pub mod certify;
pub mod corpus;
pub mod curves;
pub mod disc5;
pub mod discovery;
pub mod endo;
pub mod error;
pub mod io;
pub mod exact;
pub mod prec;

pub use error::{Error, Result};
pub use prec::Prec;
