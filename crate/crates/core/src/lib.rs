//! Train track maps on finite graphs: Stallings fold decompositions, exact
//! stretch factors, stacks and stack graphs, stack-score symmetry search, and
//! enumeration of single-fold and few-fold maps.

pub mod atlas;
pub mod cli;
pub mod error;
pub mod folds;
pub mod format;
pub mod graph;
pub mod poly;
pub mod spectral;
pub mod stacks;
pub mod symmetry;

pub use error::{Error, Result};
