//! Bézout symmetrizers for hyperbolic polynomials, the cubic symmetrizer of a
//! third-order effectively hyperbolic operator with its positivity checks, and
//! a per-frequency energy simulator for the reduced first-order system.

pub mod bezout;
pub mod cubic;
pub mod energy;
pub mod error;
pub mod expr;
pub mod grid;
pub mod linalg;
pub mod poly;
pub mod symbol;

pub use error::{Error, Result};
