//! Reversibility of linear cellular automata rules on cylinders over GF(2).
//!
//! A rule with units at positions `x₁ < … < x_r` acts on a cylinder of `n`
//! cells by cyclic convolution. It is reversible exactly when no nonzero
//! configuration is annihilated, which reduces to the periods of a linear
//! recurrence whose shifts are the position differences.

pub mod cli;
pub mod error;
pub mod families;
pub mod gf2;
pub mod recursion;
pub mod spectrum;
pub mod tables;

pub use error::{Error, Result};
pub use gf2::{BitString, Gf2Poly, Word};
pub use recursion::{PositionCollection, ShiftCollection};
pub use spectrum::{is_reversible, reversible_sizes, Method, Spectrum};
