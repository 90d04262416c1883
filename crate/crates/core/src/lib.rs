//! Rational approximation of the exponential and exponential time stepping
//! for the one-dimensional Schrödinger equation.
//!
//! The crate is split into three layers:
//!
//! * [`approx`] builds Carathéodory-Fejér and Faber-CF rational
//!   approximations of `exp` on an imaginary interval `i[-R1, R1]` and keeps
//!   them in partial fraction form `r(z) = Σ β_j / (z - σ_j)`.
//! * [`spatial`] assembles the quadratic Lagrange finite element system
//!   `i B u' = A u` with homogeneous Dirichlet conditions.
//! * [`integrate`] advances `u` with the REXI step
//!   `u ← Σ β_j (τA - σ_j iB)⁻¹ iB u`, a Chebyshev propagator, and a dense
//!   eigendecomposition oracle.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod approx;
pub mod error;
pub mod integrate;
pub mod linalg;
pub mod spatial;

pub use error::{Error, Result};

/// Double precision complex scalar used throughout the crate.
pub type C64 = num_complex::Complex<f64>;
