//! Exact verification toolkit for genus-one Shimura curves, their Atkin-Lehner
//! quotients and the fields of definition of their CM points.

pub mod arith;
pub mod catalog;
pub mod classfield;
pub mod fields;
pub mod models;
pub mod poly;
pub mod shimura;

/// Arbitrary-precision rational in lowest terms.
pub type Rational = num_rational::BigRational;
/// Arbitrary-precision integer.
pub type Integer = num_bigint::BigInt;

pub use poly::{Poly, QPoly};
