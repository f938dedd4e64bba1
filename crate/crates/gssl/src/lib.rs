//! File formats, parallel graph construction, the benchmark harness and the
//! `gssl` command-line front end on top of `gssl-core`.

pub mod cache;
pub mod cli;
pub mod config;
pub mod error;
pub mod graph;
pub mod harness;
pub mod io;

pub use error::{Error, Result};
