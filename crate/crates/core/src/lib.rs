//! Relativistic Hermite (ABNS) polynomials, their Gegenbauer and Hermite
//! relatives, and machinery to check their ladder and recurrence-shift
//! relations exactly.
//!
//! * [`exact`]: rational scalars and dense polynomials.
//! * [`families`]: generators for `F_n^N`, `C_n^α` and `H_n`.
//! * [`identities`]: first-order ladder operators and exact identity checks.
//! * [`factoengine`]: numeric factorization of second-order ODE families.
//! * [`zeros`]: Sturm-based real-root isolation.
//!
//! ```
//! use abns::exact::rational::int;
//! use abns::families;
//! use abns::identities::{degree_ladder_check, Direction};
//!
//! let f3 = families::abns(3, &int(2)).unwrap();
//! assert_eq!(f3.to_string(), "15x^3 - 18x");
//! let report = degree_ladder_check(3, &int(2), Direction::Up).unwrap();
//! assert!(report.holds());
//! ```

pub mod exact;
pub mod factoengine;
pub mod families;
pub mod identities;
pub mod zeros;

pub use exact::{Poly, Rational};
