//! Finite higher-rank graphs, cylinder measures on their infinite path
//! spaces, and the Cuntz-Krieger families those measures carry.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, IO and the
//! command line live in the companion `kgraph-std` crate.
#![no_std]

extern crate alloc;

pub mod degree;
pub mod error;
pub mod exact;
pub mod geometric;
pub mod graph;
pub mod inductive;
pub mod l2;
pub mod linalg;
pub mod measures;
pub mod report;

pub use degree::Degree;
pub use error::Error;
pub use graph::{EdgeId, InfinitePath, KGraph, KGraphSpec, Path, VertexId};

pub type Result<T, E = Error> = core::result::Result<T, E>;
