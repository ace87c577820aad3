//! Exact combinatorial computations around the symplectic module `(Z^{2n}, ω)`:
//! Tits buildings of type `C_n` over finite fields, restricted buildings,
//! lattice complexes on rank-1 summands, and the integral apartment class
//! pipeline, all over exact integer arithmetic.
//!
//! Everything is computed exactly; there is no floating point anywhere in
//! this crate. Homology is integral (Smith normal form), finite-field data
//! is carried modulo a prime, and rational subspaces are represented by
//! canonical integer lattice bases.

pub mod apartment;
pub mod building;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod symplectic;
pub mod topology;

pub use error::{Error, Result};
