//! Constant-round protocols for networks whose underlying graph is complete,
//! plus a flooding BFS baseline.
//!
//! Each protocol is available twice: as a pure function of the data a vertex
//! collects (testable without the engine) and as a [`VertexAlgorithm`]
//! driven by [`engine::run`](crate::engine::run).
//!
//! [`VertexAlgorithm`]: crate::engine::VertexAlgorithm

mod apsp;
mod bfs;
mod reach;

use thiserror::Error;

use crate::engine::EncodeError;
use crate::graph::VertexId;

pub use apsp::{
    apsp3_estimates, estimate_distance, f_sequence_global, f_sequence_local, f_sequences_global, m_values, Apsp3,
    DistEstimate, DistEstimates, FSequence, FSequenceViolation, LocalThresholds,
};
pub use bfs::BfsSssp;
pub use reach::{
    all_pairs_reachability, all_pairs_reachability_with_order, reachable_set_from_degrees, DegreeTable, Reach1,
    ReachPrefixes,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProtocolError {
    #[error("no prefix of the degree ordering satisfies the closed-set identity from position {position}; the underlying graph is not complete")]
    NoClosingIndex { position: usize },
    #[error("ordering is not a permutation of 0..{n} sorted by non-decreasing out-degree")]
    InvalidOrdering { n: usize },
    #[error("degree {degree} of vertex {vertex} is not below n = {n}")]
    DegreeOutOfRange { vertex: VertexId, degree: usize, n: usize },
    #[error("vertex {vertex} heard from {heard} of {expected} other vertices; the underlying graph is not complete")]
    MissingNeighbors { vertex: VertexId, heard: usize, expected: usize },
    #[error(transparent)]
    Encode(#[from] EncodeError),
}
