//! Brute-force reachability and distance oracles. Everything protocol-side is
//! checked against these.

use std::collections::VecDeque;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::{Digraph, Distance, GraphError, VertexId};

/// Reflexive reachability relation: `get(x, y)` iff `y` is reachable from `x`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ReachMatrix {
    n: usize,
    cells: Vec<bool>,
}

impl ReachMatrix {
    pub fn from_fn(n: usize, mut f: impl FnMut(VertexId, VertexId) -> bool) -> Self {
        let mut cells = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                cells.push(f(x, y));
            }
        }
        Self { n, cells }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, x: VertexId, y: VertexId) -> bool {
        self.cells[x * self.n + y]
    }

    pub fn row(&self, x: VertexId) -> &[bool] {
        &self.cells[x * self.n..(x + 1) * self.n]
    }

    /// Vertices reachable from `x`, ascending.
    pub fn reachable_from(&self, x: VertexId) -> Vec<VertexId> {
        (0..self.n).filter(|&y| self.get(x, y)).collect()
    }

    /// Row `x` as a string of `0`/`1` characters.
    pub fn row_bitstring(&self, x: VertexId) -> String {
        self.row(x).iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

impl Serialize for ReachMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.n))?;
        for x in 0..self.n {
            seq.serialize_element(&self.row_bitstring(x))?;
        }
        seq.end()
    }
}

/// Exact hop distances `d(x, y)` with [`Distance::Infinite`] for unreachable pairs.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DistMatrix {
    n: usize,
    cells: Vec<Distance>,
}

impl DistMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, x: VertexId, y: VertexId) -> Distance {
        self.cells[x * self.n + y]
    }

    pub fn row(&self, x: VertexId) -> &[Distance] {
        &self.cells[x * self.n..(x + 1) * self.n]
    }
}

impl Serialize for DistMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.n))?;
        for x in 0..self.n {
            seq.serialize_element(self.row(x))?;
        }
        seq.end()
    }
}

/// Depth-first search from every vertex.
pub fn reach_oracle(g: &Digraph) -> ReachMatrix {
    let n = g.n();
    let mut cells = vec![false; n * n];
    let mut stack = Vec::new();
    for x in 0..n {
        let row = &mut cells[x * n..(x + 1) * n];
        row[x] = true;
        stack.push(x);
        while let Some(v) = stack.pop() {
            for &w in g.out_neighbors(v) {
                if !row[w] {
                    row[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    ReachMatrix { n, cells }
}

/// Breadth-first distances from `source` along directed edges.
pub fn bfs_distances(g: &Digraph, source: VertexId) -> Vec<Distance> {
    let mut dist = vec![Distance::Infinite; g.n()];
    let mut queue = VecDeque::new();
    dist[source] = Distance::Finite(0);
    queue.push_back((source, 0));
    while let Some((v, d)) = queue.pop_front() {
        for &w in g.out_neighbors(v) {
            if dist[w] == Distance::Infinite {
                dist[w] = Distance::Finite(d + 1);
                queue.push_back((w, d + 1));
            }
        }
    }
    dist
}

/// Breadth-first search from every vertex.
pub fn apsp_oracle(g: &Digraph) -> DistMatrix {
    let n = g.n();
    let mut cells = Vec::with_capacity(n * n);
    for x in 0..n {
        cells.extend(bfs_distances(g, x));
    }
    DistMatrix { n, cells }
}

/// Degree-sum identity evaluated on a vertex set `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClosedSetCheck {
    /// `Σ_{v∈A} (d_in(v) − d_out(v))`
    pub lhs: i64,
    /// `|A^c| · |A|`
    pub rhs: i64,
    /// No edge leaves `A`.
    pub no_outgoing: bool,
}

/// `(|E ∩ (A^c × A)|, |E ∩ (A × A^c)|)`: edges entering and leaving `A`.
pub fn boundary_edge_counts(g: &Digraph, members: &[bool]) -> (usize, usize) {
    g.edges().fold((0, 0), |(entering, leaving), (u, v)| match (members[u], members[v]) {
        (false, true) => (entering + 1, leaving),
        (true, false) => (entering, leaving + 1),
        _ => (entering, leaving),
    })
}

/// Evaluates both sides of the closed-set identity for `set` on a graph with
/// complete underlying graph. Duplicate entries in `set` are ignored.
pub fn closed_set_check(g: &Digraph, set: &[VertexId]) -> Result<ClosedSetCheck, GraphError> {
    g.require_diameter_one()?;
    let mut members = vec![false; g.n()];
    for &v in set {
        g.check_vertex(v)?;
        members[v] = true;
    }
    let size = members.iter().filter(|&&m| m).count() as i64;
    let lhs = (0..g.n()).filter(|&v| members[v]).map(|v| g.in_degree(v) as i64 - g.out_degree(v) as i64).sum();
    let (_, leaving) = boundary_edge_counts(g, &members);
    Ok(ClosedSetCheck { lhs, rhs: (g.n() as i64 - size) * size, no_outgoing: leaving == 0 })
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    #[test]
    fn reach_examples() {
        let r = reach_oracle(&transitive_tournament());
        assert_eq!(r.reachable_from(0), vec![0, 1, 2]);
        assert_eq!(r.reachable_from(2), vec![2]);
        assert!(reach_oracle(&three_cycle()).row(0).iter().chain(reach_oracle(&three_cycle()).row(2)).all(|&b| b));
        let edgeless = reach_oracle(&Digraph::new(3, []).unwrap());
        assert_eq!(edgeless, ReachMatrix::from_fn(3, |x, y| x == y));
        assert_eq!(serde_json::to_string(&r).unwrap(), r#"["111","011","001"]"#);
    }

    #[test]
    fn apsp_examples() {
        let d = apsp_oracle(&three_cycle());
        assert_eq!(d.get(0, 2), Distance::Finite(2));
        assert!((0..3).all(|x| d.get(x, x) == Distance::Finite(0)));
        assert_eq!(apsp_oracle(&transitive_tournament()).get(2, 0), Distance::Infinite);
    }

    #[test]
    fn closed_set_examples() {
        let g = transitive_tournament();
        assert_eq!(closed_set_check(&g, &[2]).unwrap(), ClosedSetCheck { lhs: 2, rhs: 2, no_outgoing: true });
        assert_eq!(closed_set_check(&g, &[0]).unwrap(), ClosedSetCheck { lhs: -2, rhs: 2, no_outgoing: false });
        assert_eq!(closed_set_check(&g, &[0, 1, 2]).unwrap(), ClosedSetCheck { lhs: 0, rhs: 0, no_outgoing: true });
        assert_eq!(closed_set_check(&g, &[]).unwrap(), ClosedSetCheck { lhs: 0, rhs: 0, no_outgoing: true });
    }

    #[test]
    fn closed_set_rejects_off_hypothesis() {
        let path = Digraph::new(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(closed_set_check(&path, &[0]), Err(GraphError::NotDiameterOne(Distance::Finite(2))));
        assert!(matches!(closed_set_check(&transitive_tournament(), &[5]), Err(GraphError::VertexOutOfRange { .. })));
    }
}
