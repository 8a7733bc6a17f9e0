//! Network analysis toolkit for studying how community structure interacts
//! with node centrality in undirected graphs.
//!
//! The crate covers the full pipeline: benchmark graph generation with
//! planted communities ([`lfr`]), community detection ([`partition`]),
//! classical and community-aware centrality measures ([`centrality`],
//! [`community`]), topological feature extraction ([`stats`]), and rank
//! correlation / regression analysis over those measures ([`analysis`]).
//!
//! All graphs are simple and undirected, nodes are contiguous indices
//! `0..n`, and every randomized routine takes an explicit seed so results
//! are reproducible bit for bit.

pub mod analysis;
pub mod centrality;
pub mod community;
mod error;
pub mod graph;
pub mod io;
pub mod lfr;
pub mod partition;
pub mod stats;

pub use error::{Error, Result};
pub use graph::{DistanceMatrix, Graph, Labels, LoadedGraph, Subgraph};
pub use partition::{Partition, Strength, StrengthClass};
