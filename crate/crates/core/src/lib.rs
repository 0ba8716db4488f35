//! Broadcast CONGEST simulation with constant-round protocols for networks
//! of diameter one.
//!
//! * [`graph`]: digraph model, underlying-graph operations, brute-force oracles.
//! * [`engine`]: round-synchronous broadcast simulator with per-message bit budgets.
//! * [`protocols`]: one-round all-pairs reachability, two-round 3-approximate
//!   all-pairs distances, and a flooding BFS baseline.
//! * [`instances`]: the path-bundle hard-instance families, random
//!   diameter-1 digraphs, and their validators.
//! * [`harness`]: experiment runner and property suites behind the CLI.

pub mod engine;
pub mod graph;
pub mod harness;
pub mod instances;
pub mod protocols;

pub use graph::{Digraph, Distance, VertexId};
