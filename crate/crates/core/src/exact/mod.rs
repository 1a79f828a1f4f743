//! Exact scalar and polynomial arithmetic.

pub mod poly;
pub mod rational;

pub use poly::{Poly, PolyError};
pub use rational::{parse_decimal, parse_rational, ParseRationalError, Rational};
