//! File formats, benchmarking, performance profiles and the command line
//! for the `rlchol-core` sparse Cholesky solver.

pub mod bench;
pub mod cli;
pub mod error;
pub mod gallery;
pub mod io;
pub mod profile;

pub use error::{Error, Result};
