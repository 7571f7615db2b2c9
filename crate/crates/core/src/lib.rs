//! Exact computation of the degree of noninvertibility of functions between
//! finite sets.
//!
//! The degree of `f: X -> Y` is `(1/|X|) * sum_y |f^-1(y)|^2`. This crate
//! evaluates it, its power generalization `deg(f, q)`, and the expected degree
//! of random compositions along three independent routes:
//!
//! * [`oracle`]: full enumeration of function tuples and the nested
//!   multinomial expansion over fiber-size profiles,
//! * [`closed_form`]: the closed-form expressions,
//! * [`montecarlo`]: seeded sampling for sizes beyond enumeration.
//!
//! Everything except Monte Carlo reporting is exact: integers are
//! [`num_bigint::BigInt`] and fractions are [`Rational`].

pub mod bounds;
pub mod closed_form;
pub mod combinatorics;
pub mod compositions;
mod error;
pub mod format;
pub mod function;
pub mod montecarlo;
pub mod oracle;
mod scalar;

pub use closed_form::ChainSpec;
pub use error::{Error, Result};
pub use function::FiniteFunction;
pub use scalar::Rational;
