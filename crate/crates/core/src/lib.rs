//! Congruence lattices, factor congruences and Cantor–Bernstein style
//! machinery for finite algebras, plus a symbolic layer for countable powers.

pub mod algebra;
pub mod budget;
pub mod cbs;
pub mod congruence;
pub mod corpus;
pub mod error;
pub mod omega;
pub mod partition;
pub mod structure;

pub use algebra::{FiniteAlgebra, Homomorphism, Sentence, Signature, Term};
pub use budget::Budget;
pub use congruence::{Congruence, CongruenceLattice};
pub use error::{Error, Result};
