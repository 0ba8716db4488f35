//! Directed-graph data model and centralized ground-truth oracles.
//!
//! Vertices are the integers `0..n`. Edges are ordered pairs without
//! self-loops; both `(u, v)` and `(v, u)` may be present.

mod io;
mod oracle;

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use io::{parse_any, parse_edge_list, to_edge_list, GraphJson};
pub use oracle::{
    apsp_oracle, bfs_distances, boundary_edge_counts, closed_set_check, reach_oracle, ClosedSetCheck, DistMatrix,
    ReachMatrix,
};

pub type VertexId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("underlying graph is not complete (diameter {0})")]
    NotDiameterOne(Distance),
    #[error("malformed graph input: {0}")]
    Parse(String),
}

/// A hop count, or the unreachable sentinel. `Finite(_) < Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(usize),
    Infinite,
}

impl Distance {
    pub fn is_finite(self) -> bool {
        matches!(self, Distance::Finite(_))
    }

    pub fn finite(self) -> Option<usize> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Distance {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Distance::Finite(d) => s.serialize_u64(*d as u64),
            Distance::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Distance {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Distance::Finite(v as usize)),
            Raw::Str(s) if s == "inf" => Ok(Distance::Infinite),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("expected integer or \"inf\", got {s:?}"))),
        }
    }
}

/// Simple directed graph on vertices `0..n`. Immutable after construction.
#[derive(Clone)]
pub struct Digraph {
    n: usize,
    out_adj: Vec<Vec<VertexId>>,
    in_adj: Vec<Vec<VertexId>>,
    edge_set: HashSet<(VertexId, VertexId)>,
}

impl Digraph {
    pub fn new<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        let mut edge_set = HashSet::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if !edge_set.insert((u, v)) {
                return Err(GraphError::DuplicateEdge(u, v));
            }
            out_adj[u].push(v);
            in_adj[v].push(u);
        }
        for list in out_adj.iter_mut().chain(in_adj.iter_mut()) {
            list.sort_unstable();
        }
        Ok(Self { n, out_adj, in_adj, edge_set })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_set.len()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.edge_set.contains(&(u, v))
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.out_adj.iter().enumerate().flat_map(|(u, outs)| outs.iter().map(move |&v| (u, v)))
    }

    pub fn out_neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.out_adj[v]
    }

    pub fn in_neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.in_adj[v]
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out_adj[v].len()
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.in_adj[v].len()
    }

    /// `(d_in, d_out)` of `v`.
    pub fn degree_profile(&self, v: VertexId) -> Result<(usize, usize), GraphError> {
        self.check_vertex(v)?;
        Ok((self.in_degree(v), self.out_degree(v)))
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<(), GraphError> {
        if v < self.n {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    /// Neighbors in the underlying undirected graph, ascending, one entry
    /// per unordered pair even when both directions are present.
    pub fn underlying_neighbors(&self, v: VertexId) -> Vec<VertexId> {
        let (outs, ins) = (&self.out_adj[v], &self.in_adj[v]);
        let mut merged = Vec::with_capacity(outs.len() + ins.len());
        let (mut i, mut j) = (0, 0);
        while i < outs.len() || j < ins.len() {
            let next = match (outs.get(i), ins.get(j)) {
                (Some(&a), Some(&b)) if a == b => {
                    i += 1;
                    j += 1;
                    a
                }
                (Some(&a), Some(&b)) if a < b => {
                    i += 1;
                    a
                }
                (Some(_), Some(&b)) => {
                    j += 1;
                    b
                }
                (Some(&a), None) => {
                    i += 1;
                    a
                }
                (None, Some(&b)) => {
                    j += 1;
                    b
                }
                (None, None) => unreachable!(),
            };
            merged.push(next);
        }
        merged
    }

    /// True when every unordered pair of distinct vertices is joined by at
    /// least one directed edge. This is the diameter-1 hypothesis; a single
    /// vertex satisfies it vacuously.
    pub fn is_underlying_complete(&self) -> bool {
        (0..self.n).all(|v| self.underlying_neighbors(v).len() == self.n - 1)
    }

    /// Maximum eccentricity in the underlying undirected graph.
    pub fn underlying_diameter(&self) -> Distance {
        let nbrs: Vec<Vec<VertexId>> = (0..self.n).map(|v| self.underlying_neighbors(v)).collect();
        let mut diameter = 0;
        let mut dist = vec![usize::MAX; self.n];
        let mut queue = VecDeque::new();
        for root in 0..self.n {
            dist.fill(usize::MAX);
            dist[root] = 0;
            queue.push_back(root);
            let mut seen = 1;
            while let Some(v) = queue.pop_front() {
                for &w in &nbrs[v] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[v] + 1;
                        diameter = diameter.max(dist[w]);
                        seen += 1;
                        queue.push_back(w);
                    }
                }
            }
            if seen < self.n {
                return Distance::Infinite;
            }
        }
        Distance::Finite(diameter)
    }

    /// Fails with [`GraphError::NotDiameterOne`] unless the underlying graph is complete.
    pub fn require_diameter_one(&self) -> Result<(), GraphError> {
        if self.is_underlying_complete() {
            Ok(())
        } else {
            Err(GraphError::NotDiameterOne(self.underlying_diameter()))
        }
    }

    pub fn has_antiparallel_pair(&self) -> bool {
        self.edges().any(|(u, v)| u < v && self.has_edge(v, u))
    }

    /// A copy of this graph with the listed edges removed.
    pub fn without_edges(&self, removed: &[(VertexId, VertexId)]) -> Result<Self, GraphError> {
        Digraph::new(self.n, self.edges().filter(|e| !removed.contains(e)))
    }
}

impl PartialEq for Digraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.out_adj == other.out_adj
    }
}

impl Eq for Digraph {}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Digraph").field("n", &self.n).field("edges", &self.edges().collect::<Vec<_>>()).finish()
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::Digraph;

    /// a=0, b=1, c=2 with a→b, a→c, b→c.
    pub fn transitive_tournament() -> Digraph {
        Digraph::new(3, [(0, 1), (0, 2), (1, 2)]).unwrap()
    }

    /// a→b→c→a.
    pub fn three_cycle() -> Digraph {
        Digraph::new(3, [(0, 1), (1, 2), (2, 0)]).unwrap()
    }
}
