//! Numerical laboratory for restriction estimates of orthonormal systems of
//! Laplace eigenfunctions on round spheres.
//!
//! The library has three layers:
//!
//! - closed-form layer: exact piecewise-rational exponent tables for the
//!   restriction bounds ([`exponents`]) and stable special-function kernels
//!   ([`specfun`]);
//! - discretization layer: quadrature grids on geodesic submanifolds of S^d
//!   ([`geometry`]), explicit orthonormal systems of eigenfunctions
//!   ([`systems`]) and the norms measured on them ([`norms`]);
//! - measurement layer: scaling experiments that fit log-log slopes of the
//!   measured norms against the closed-form exponents and return pass/fail
//!   verdicts with tolerances ([`experiments`]).
//!
//! Everything is deterministic: randomized constructions take explicit seeds
//! and identical configurations reproduce bit-identical reports.

pub mod error;
pub mod exponents;
pub mod experiments;
pub mod geometry;
pub mod norms;
pub mod specfun;
pub mod systems;

pub use error::{Error, Result};
