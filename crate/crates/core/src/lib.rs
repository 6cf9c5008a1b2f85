//! Exact and certified numerics for one-parameter families of Henon maps
//! `(x, y) -> (delta*y + f_t(x), x)` over the rationals.
//!
//! The crate computes the orbit polynomials of a family of initial points,
//! the exact function-field height of the family, local Green functions with
//! certified tail bounds at the archimedean place and at rational primes, the
//! global parameter height, exact certificates for periodic parameter values
//! (infiniteness witnesses, multiplicity certificates, resultant monicity,
//! emptiness) and deterministic escape-rate rasters of the parameter plane.
//!
//! Exact polynomial arithmetic is generic over the coefficient ring, so the
//! same code runs over `Q`, over `Q[b]` (one extra symbolic coordinate) and,
//! for specialized dynamics, over `Q[x]/(m)` and finite fields.

pub mod cache;
pub mod cli;
pub mod error;
pub mod exact;
pub mod ffheight;
pub mod globalheight;
pub mod henon;
pub mod localgreen;
pub mod periodic;
pub mod render;

pub use error::Error;

/// Arbitrary-precision rational scalar used throughout the exact layer.
pub type Rat = num_rational::BigRational;
/// Arbitrary-precision integer.
pub type Int = num_bigint::BigInt;

/// Dense univariate polynomial over `Q` (the parameter variable `t` unless
/// stated otherwise).
pub type QPoly = exact::poly::Poly<Rat>;
/// Dense univariate polynomial over `Q` in the coordinate variable `b`.
pub type BPoly = exact::poly::Poly<Rat>;
/// Polynomial in `t` whose coefficients are polynomials in `b`.
pub type BiPoly = exact::poly::Poly<BPoly>;

pub type Result<T> = std::result::Result<T, Error>;
