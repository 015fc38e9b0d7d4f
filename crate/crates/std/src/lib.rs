//! JSON formats and the `kgraph` command line on top of the `kgraph` crate.

pub mod cli;
pub mod formats;
pub mod system;
