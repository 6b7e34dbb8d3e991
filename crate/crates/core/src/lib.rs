//! Recursive construction of antisymmetric 2-coloured sphere triangulations
//! whose vertices are labelled by independent sets of a cycle, together with
//! the machinery to verify them and to study the projective quadrangulation
//! graphs obtained by antipodal identification.

pub mod complex;
pub mod construct;
pub mod error;
pub mod graphs;
pub mod setkit;
pub mod verify;

pub use error::{Error, Result};
