//! Scalar-generic numerical kernels: quadrature, interpolation, fitting and
//! limit extrapolation. Everything here is generic over [`Scalar`] so the
//! routines can be instantiated at `f32` or `f64`; the rest of the crate uses
//! them through the crate-level `Real = f64` alias.

pub mod bump;
pub mod fit;
pub mod interp;
pub mod quad;

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar the numerics kernels are generic over.
pub trait Scalar: Float + FromPrimitive + std::fmt::Debug + Send + Sync + 'static {
    /// Shorthand for lossy conversion from `f64` literals.
    fn c(x: f64) -> Self {
        Self::from_f64(x).expect("literal conversion")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Machine epsilon scaled comparisons: |a - b| <= tol * max(|a|, |b|, floor).
pub fn close<T: Scalar>(a: T, b: T, tol: T, floor: T) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(floor)
}
