//! Numerical laboratory for late-time tails of spherically symmetric scalar
//! waves on stationary, asymptotically flat backgrounds.
//!
//! The crate evolves the radiation field phi = r psi of solutions to the
//! wave equation through the double-null equation
//! d_u d_v phi = -V(r) phi, computes the Newman-Penrose constant I0, the
//! integrability constant C0 and the time-inverted constants I0^(k) from
//! initial data by two independent routes, and extracts power-law tail
//! exponents and signed amplitudes from observer time series for comparison
//! against the coefficient table (-8 I0^(1)/tau^3 and friends).

pub mod asymptotics;
pub mod config;
pub mod error;
pub mod evolution;
pub mod geometry;
pub mod initial_data;
pub mod np_constants;
pub mod numerics;
pub mod pipeline;
pub mod time_integral;

/// Concrete scalar type the domain layer is instantiated at. The kernels in
/// [`numerics`] are generic over [`numerics::Scalar`]; everything above them
/// uses this alias.
pub type Real = f64;

pub use error::{Error, Result};
