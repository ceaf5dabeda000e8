//! Combinatorics, characters and point geometry of type A degenerate flag
//! varieties and their desingularizations R_n, over exact rationals.

pub mod characters;
pub mod combinatorics;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod pbw;

pub use error::{Error, Result};
