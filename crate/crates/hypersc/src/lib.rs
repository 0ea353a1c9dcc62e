// `!(x > 0.0)`-style guards are intentional: NaN must fail validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Geodesically convex optimization on hyperbolic spaces.
//!
//! The crate implements, on the hyperboloid model of `H^n` (and products
//! `H^n x R^k`):
//!
//! - exact geometry: exponential/logarithm maps, parallel transport,
//!   curvature ([`hyperboloid`], [`product`]);
//! - scalar fields with closed-form first/second/third covariant derivatives,
//!   plus finite-difference and Jacobi-field oracles ([`fields`], [`oracles`]);
//! - numerical certification of self-concordance constants, barrier
//!   parameters, and the Dikin/transport comparison bounds ([`analyzer`]);
//! - Newton's method with the damped and quadratic-phase guarantees checked
//!   at runtime ([`newton`]);
//! - the short-step path-following interior-point method ([`path`]);
//! - minimum enclosing balls in hyperbolic space via a barrier formulation,
//!   validated against a farthest-point iteration oracle ([`meb`]).

pub mod analyzer;
pub mod error;
pub mod fields;
pub mod hyperboloid;
pub mod meb;
pub mod newton;
pub mod oracles;
pub mod path;
pub mod product;

pub use error::{Error, Result};
