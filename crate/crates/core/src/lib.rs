//! Exact construction of a function `F` on `[0,1)` whose graph has full dimension
//! while `F - f` is injective for every `f` in a given family, plus the checks and
//! box-counting experiments that exercise it.
//!
//! Numbers are exact throughout: [`Rational`] for general values, [`Dyadic`] for
//! truncated outputs. Families are generic over the coefficient scalar; [`Family`] is
//! the exact instance the construction consumes and [`FamilyF64`] the floating-point
//! shadow used for cross-checks.

pub mod arith;
pub mod construction;
pub mod dimension;
pub mod error;
pub mod family;
pub mod partition;
mod report;
pub mod rng;
pub mod verification;

pub use arith::{BitString, Dyadic, Rational};
pub use error::{Error, Result};
pub use family::{FunctionFamily, Polynomial};

pub type Family = FunctionFamily<Rational>;
pub type FamilyF64 = FunctionFamily<f64>;
