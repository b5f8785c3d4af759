//! Closed-form identities, scalar integrals and the right-hand sides of the integral theorems.

pub mod algebra;
pub mod bessel;
pub mod constants;
pub mod equivalence;
pub mod hubbard;
pub mod ingham;
pub mod polynomial;
pub mod selberg;
pub mod superbosonization;
pub mod theorem4;

pub use algebra::*;
pub use bessel::*;
pub use constants::*;
pub use equivalence::*;
pub use hubbard::*;
pub use ingham::*;
pub use selberg::*;
pub use superbosonization::*;
pub use theorem4::*;
pub use polynomial::{sekiguchi_apply, sekiguchi_power, vandermonde, Poly, SymmetricPolynomial};
