//! Exact extension of scalars and Galois descent.
//!
//! The crate models a finite Galois extension `L/K` concretely
//! ([`field`]), builds exact linear algebra on top ([`linalg`]), and then
//! implements descent for vector spaces with semilinear group actions
//! ([`semilinear`]), sheaves on finite posets ([`sheaf`], [`sheaf_descent`]),
//! bounded complexes of such sheaves ([`complexes`]) and gluing data on a
//! punctured disc ([`gluing`]). Every construction returns the matrices
//! that witness its claims so they can be re-checked independently.

pub mod complexes;
pub mod error;
pub mod field;
pub mod gluing;
pub mod linalg;
pub mod poset;
pub mod random;
pub mod semilinear;
pub mod sheaf;
pub mod sheaf_descent;
pub mod suites;

pub use error::{Error, Result};
