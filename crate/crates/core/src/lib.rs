//! Stallings graphs of finitely generated subgroups of free groups, their
//! intersections, and an explicit rank reduction of the generalized join of
//! two subgroups onto a free group of rank two.

pub mod cli;
pub mod error;
pub mod graph;
pub mod pullback;
pub mod transform;
pub mod verify;
pub mod words;

pub use error::{Error, Result, Side};
pub use words::{Alphabet, Letter, Substitution, Word};
