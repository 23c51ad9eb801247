//! High-precision numerics: branch points, period matrices, the Abel-Jacobi
//! map and its inverse by Newton continuation.

pub mod aj;
pub mod integrate;
pub mod mpc;
pub mod periods;
pub mod quadrature;
pub mod roots;

pub use aj::{abel_jacobi, aj_infinity_minus, aj_inverse, aj_of_exact_point, reduce_mod_lattice, AJVector, LatticeCtx};
pub use periods::{period_matrix, riemann_positive, riemann_residual, CurveNumerics, PeriodData, J_STD};
