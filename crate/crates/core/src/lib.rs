//! Symbolic-numeric supermatrix calculus: Grassmann algebra, supermatrices,
//! supersymmetric Wishart ensembles and verification of integral identities.

pub mod checks;
pub mod ensembles;
pub mod error;
pub mod grassmann;
pub mod identities;
pub mod integrator;
pub mod linalg;
pub mod report;
pub mod scalar;
pub mod special;
pub mod supermatrix;

pub use error::{Error, Result};
pub use grassmann::{GrassmannElement, Parity};
pub use supermatrix::{SuperMatrix, SuperShape};
