//! Exact computations of Frobenius-twisted Tor over local F_p-algebras.
//!
//! Rings are quotients `F_p[x_1..x_n]/I` presented by Gröbner bases under the
//! graded reverse-lex order. Modules are cokernels of matrices over the ring;
//! Tor against the Frobenius-twisted ring is the homology of a minimal free
//! resolution whose differential entries are raised to the `p^r`-th power.

pub mod corpus;
pub mod error;
pub mod field;
pub mod frobtor;
pub mod groebner;
pub mod invariants;
pub mod linalg;
pub mod matrix;
pub mod resolve;
mod expand;
pub mod parse;
pub mod poly;
pub mod random;
pub mod ring;

pub use error::{Error, Result};
