//! Invariants of tied links.
//!
//! Two independent routes compute the same invariants: skein recursion on
//! planar diagrams ([`skein`]) and a Markov trace on the tied BMW algebra
//! ([`tbmw`]). Values are exact Laurent polynomials ([`poly`]).

pub mod coeff;
pub mod braid;
pub mod diagram;
pub mod poly;
pub mod skein;
pub mod tbmw;

pub use coeff::Coeff;
pub use poly::{Exponents, LaurentPoly, PolyError, VarSet};

/// Laurent polynomial with integer coefficients, the value type of every invariant.
pub type Poly = LaurentPoly<num_bigint::BigInt>;
/// Laurent polynomial with rational coefficients.
pub type RatPoly = LaurentPoly<num_rational::BigRational>;
/// Tied BMW algebra element over integer Laurent coefficients.
pub type Element = tbmw::AlgebraElement<num_bigint::BigInt>;
/// Trace engine over integer Laurent coefficients.
pub type Engine = tbmw::TraceEngine<num_bigint::BigInt>;
