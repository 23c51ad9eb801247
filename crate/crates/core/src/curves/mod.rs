//! Curve models, points, Mumford divisor classes with the Cantor group law,
//! and correspondences acting on divisors.

pub mod correspondence;
pub mod curve;
pub mod divisor;

pub use correspondence::{
    apply_endo, apply_ring_element, correspondence_fiber, descend_divisor, fiber_divisor,
    normalize_correspondence, promote_divisor, same_correspondence, Correspondence,
};
pub use curve::{validate_curve, CurveModel, CurvePoint, ModelKind};
pub use divisor::{
    cantor_add, cantor_neg, cantor_scale, cantor_sub, divisor_from_points, point_class,
    split_divisor, MumfordDivisor,
};
