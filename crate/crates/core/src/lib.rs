//! Euclidean cyclic cubic fields of prime conductor.
//!
//! The crate builds cyclic cubic fields and their maximal orders, decides
//! whether the class number is one, computes a fundamental system of units
//! and searches for admissible primes: primes `q` with a degree-one prime
//! `𝔮 | q` such that the units generate `(O_K / 𝔮^2)^×`. Such a prime,
//! together with class number one, proves `O_K` Euclidean (for some
//! Euclidean function, not necessarily the norm). The result can be
//! exported and re-verified as a [`certificate::Certificate`].

#![allow(clippy::needless_range_loop)]

pub mod arith;
pub mod batch;
pub mod catalog;
pub mod certificate;
pub mod classnum;
pub mod enumerate;
pub mod error;
pub mod field;
pub mod hp;
pub mod ideal;
pub mod linalg;
mod order;
pub mod parse;
pub mod polyfp;
pub mod search;
pub mod units;
pub mod verdict;

pub use error::{Error, Result};
pub use field::{CubicField, CubicPolynomial, FieldElement};
