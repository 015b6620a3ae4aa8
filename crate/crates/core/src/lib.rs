//! Exact weighted Moore-Penrose inverses of multivariate polynomial and rational
//! matrices by column partitioning.

pub mod algorithm;
pub mod error;
pub mod genbench;
pub mod io;
pub mod matrix;
pub mod polynomial;
pub mod rational;
pub mod ring;
pub mod sample;
pub mod verify;

#[cfg(test)]
mod strategies;

pub use error::{Result, WmpError};
