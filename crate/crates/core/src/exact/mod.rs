//! Exact arithmetic substrate: rationals, dense polynomials, resultants,
//! rational factorization, number fields `Q[x]/(m)` and finite fields.

pub mod factor;
pub mod finfield;
pub(crate) mod modp;
pub mod numfield;
pub mod poly;
pub mod scalar;
