//! Exact computation of algebraic models for rational equivariant spectra
//! over finite groups.
//!
//! The library computes, with exact rational arithmetic throughout:
//! Burnside-ring idempotents and the mark homomorphism, idempotent
//! splittings of rational Mackey functors, representation rings of abelian
//! groups with their cyclotomic CRT structure, the graded homotopy Mackey
//! functors of periodic and connective equivariant K-theory, and
//! machine-checked formality certificates (zig-zags of equivariant
//! quasi-isomorphisms) for the resulting differential graded algebras.

pub mod burnside;
pub mod cdga;
pub mod error;
pub mod formality;
pub mod groups;
pub mod ktheory;
pub mod linalg;
pub mod mackey;
pub mod rat;
pub mod repring;
pub mod theta;

pub use error::{Error, Result};
pub use rat::{frac, rat, Rational};
