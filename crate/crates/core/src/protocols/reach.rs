//! One-round all-pairs reachability from the degree sequence.
//!
//! Sort vertices by non-decreasing out-degree as `v_1, …, v_n`. On a graph
//! with complete underlying graph the vertices reachable from `v_i` are
//! exactly `v_1, …, v_k` where `k ≥ i` is the smallest index with
//! `(n − k)·k = Σ_{j ≤ k} (d_in(v_j) − d_out(v_j))`.

use serde::{Serialize, Serializer};

use super::ProtocolError;
use crate::engine::{
    decode_pair, decode_uint, encode_uint, pair_message, AlgorithmError, Inbox, Step, VertexAlgorithm, VertexContext,
};
use crate::graph::{Digraph, ReachMatrix, VertexId};

/// `(d_in, d_out)` for every vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeTable {
    entries: Vec<(usize, usize)>,
}

impl DegreeTable {
    pub fn from_graph(g: &Digraph) -> Self {
        Self { entries: (0..g.n()).map(|v| (g.in_degree(v), g.out_degree(v))).collect() }
    }

    pub fn from_entries(entries: Vec<(usize, usize)>) -> Result<Self, ProtocolError> {
        let n = entries.len();
        for (vertex, &(d_in, d_out)) in entries.iter().enumerate() {
            if let Some(degree) = [d_in, d_out].into_iter().find(|&d| d >= n) {
                return Err(ProtocolError::DegreeOutOfRange { vertex, degree, n });
            }
        }
        Ok(Self { entries })
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.entries[v].0
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.entries[v].1
    }

    /// Vertices sorted by `(d_out, id)`.
    pub fn sorted_order(&self) -> Vec<VertexId> {
        let mut order: Vec<VertexId> = (0..self.n()).collect();
        order.sort_by_key(|&v| (self.out_degree(v), v));
        order
    }

    fn check_ordering(&self, ordering: &[VertexId]) -> Result<(), ProtocolError> {
        let n = self.n();
        let invalid = ProtocolError::InvalidOrdering { n };
        if ordering.len() != n {
            return Err(invalid);
        }
        let mut seen = vec![false; n];
        for &v in ordering {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(invalid);
            }
        }
        if ordering.windows(2).any(|w| self.out_degree(w[0]) > self.out_degree(w[1])) {
            return Err(invalid);
        }
        Ok(())
    }
}

/// For each position `i` (0-based) in `ordering`, the length `k` of the
/// reachable prefix, plus the number of identity evaluations performed.
fn closing_prefix_lengths(table: &DegreeTable, ordering: &[VertexId]) -> (Vec<Option<usize>>, usize) {
    let n = ordering.len() as i64;
    let mut prefix_sum = 0i64;
    let closed: Vec<bool> = ordering
        .iter()
        .enumerate()
        .map(|(idx, &v)| {
            let k = idx as i64 + 1;
            prefix_sum += table.in_degree(v) as i64 - table.out_degree(v) as i64;
            (n - k) * k == prefix_sum
        })
        .collect();
    let mut lengths = vec![None; ordering.len()];
    let mut next_closed = None;
    for idx in (0..ordering.len()).rev() {
        if closed[idx] {
            next_closed = Some(idx + 1);
        }
        lengths[idx] = next_closed;
    }
    (lengths, closed.len())
}

/// The vertices reachable from `ordering[position]` (0-based), in ordering order.
pub fn reachable_set_from_degrees(
    table: &DegreeTable,
    ordering: &[VertexId],
    position: usize,
) -> Result<Vec<VertexId>, ProtocolError> {
    table.check_ordering(ordering)?;
    if position >= ordering.len() {
        return Err(ProtocolError::InvalidOrdering { n: table.n() });
    }
    let (lengths, _) = closing_prefix_lengths(table, ordering);
    let k = lengths[position].ok_or(ProtocolError::NoClosingIndex { position })?;
    Ok(ordering[..k].to_vec())
}

/// Full reachability relation in prefix form: each vertex reaches a prefix of
/// the degree ordering. Storage is `O(n)`; [`ReachPrefixes::to_matrix`]
/// expands it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachPrefixes {
    order: Vec<VertexId>,
    rank: Vec<usize>,
    prefix_len: Vec<usize>,
}

impl ReachPrefixes {
    pub fn n(&self) -> usize {
        self.order.len()
    }

    pub fn reaches(&self, x: VertexId, y: VertexId) -> bool {
        self.rank[y] < self.prefix_len[self.rank[x]]
    }

    pub fn reachable_from(&self, x: VertexId) -> Vec<VertexId> {
        let mut set = self.order[..self.prefix_len[self.rank[x]]].to_vec();
        set.sort_unstable();
        set
    }

    pub fn to_matrix(&self) -> ReachMatrix {
        ReachMatrix::from_fn(self.n(), |x, y| self.reaches(x, y))
    }

    /// Compares against a matrix without materializing this relation.
    pub fn matches(&self, m: &ReachMatrix) -> bool {
        m.n() == self.n() && (0..self.n()).all(|x| (0..self.n()).all(|y| m.get(x, y) == self.reaches(x, y)))
    }
}

impl Serialize for ReachPrefixes {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_matrix().serialize(s)
    }
}

fn prefixes_for(table: &DegreeTable, order: Vec<VertexId>) -> Result<(ReachPrefixes, usize), ProtocolError> {
    let (lengths, checks) = closing_prefix_lengths(table, &order);
    let prefix_len = lengths
        .into_iter()
        .enumerate()
        .map(|(position, k)| k.ok_or(ProtocolError::NoClosingIndex { position }))
        .collect::<Result<Vec<_>, _>>()?;
    let mut rank = vec![0; order.len()];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
    }
    Ok((ReachPrefixes { order, rank, prefix_len }, checks))
}

/// All-pairs reachability from a degree table, sorting ties by vertex id.
pub fn all_pairs_reachability(table: &DegreeTable) -> Result<ReachPrefixes, ProtocolError> {
    prefixes_for(table, table.sorted_order()).map(|(p, _)| p)
}

/// Same, under an explicit non-decreasing ordering.
pub fn all_pairs_reachability_with_order(
    table: &DegreeTable,
    ordering: Vec<VertexId>,
) -> Result<ReachPrefixes, ProtocolError> {
    table.check_ordering(&ordering)?;
    prefixes_for(table, ordering).map(|(p, _)| p)
}

/// One-round reachability protocol. Every vertex broadcasts its in- and
/// out-degree, then derives the whole reachability relation locally.
#[derive(Debug, Clone, Default)]
pub struct Reach1 {
    in_degree_only: bool,
    id: VertexId,
    n: usize,
    own: (usize, usize),
}

impl Reach1 {
    pub fn new() -> Self {
        Self::default()
    }

    /// Broadcast only the in-degree (`⌈log₂ n⌉` bits); receivers infer
    /// `d_out = n − 1 − d_in`. Correct only when the graph has no
    /// anti-parallel pair.
    pub fn in_degree_only() -> Self {
        Self { in_degree_only: true, ..Self::default() }
    }
}

impl VertexAlgorithm for Reach1 {
    type Output = ReachPrefixes;

    fn init(&mut self, ctx: &VertexContext<'_>) -> Result<Step<ReachPrefixes>, AlgorithmError> {
        self.id = ctx.id;
        self.n = ctx.n;
        self.own = (ctx.in_degree(), ctx.out_degree());
        let msg = if self.in_degree_only {
            encode_uint(ctx.in_degree(), ctx.n)?
        } else {
            pair_message(ctx.in_degree(), ctx.out_degree(), ctx.n)?
        };
        Ok(Step::Continue(msg))
    }

    fn step(&mut self, _round: usize, inbox: &Inbox<'_>) -> Result<Step<ReachPrefixes>, AlgorithmError> {
        if inbox.len() != self.n - 1 {
            return Err(
                ProtocolError::MissingNeighbors { vertex: self.id, heard: inbox.len(), expected: self.n - 1 }.into()
            );
        }
        let mut entries = vec![(0, 0); self.n];
        entries[self.id] = self.own;
        for (sender, msg) in inbox.iter() {
            entries[sender] = if self.in_degree_only {
                let d_in = decode_uint(msg, self.n)?;
                (d_in, self.n - 1 - d_in)
            } else {
                decode_pair(msg, self.n)?
            };
        }
        let table = DegreeTable::from_entries(entries)?;
        Ok(Step::Halt(all_pairs_reachability(&table)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{run, BitBudget};
    use crate::graph::fixtures::*;
    use crate::graph::reach_oracle;

    #[test]
    fn tournament_prefix_example() {
        let g = transitive_tournament();
        let table = DegreeTable::from_graph(&g);
        // ordering (c, b, a), position of b
        assert_eq!(reachable_set_from_degrees(&table, &[2, 1, 0], 1).unwrap(), vec![2, 1]);
        assert_eq!(reachable_set_from_degrees(&table, &[2, 1, 0], 2).unwrap(), vec![2, 1, 0]);
        assert_eq!(reachable_set_from_degrees(&table, &[2, 1, 0], 0).unwrap(), vec![2]);
    }

    #[test]
    fn cycle_and_singleton() {
        let table = DegreeTable::from_graph(&three_cycle());
        for ordering in [[0, 1, 2], [2, 0, 1], [1, 2, 0]] {
            let mut set = reachable_set_from_degrees(&table, &ordering, 0).unwrap();
            set.sort();
            assert_eq!(set, vec![0, 1, 2]);
        }
        let single = DegreeTable::from_entries(vec![(0, 0)]).unwrap();
        assert_eq!(reachable_set_from_degrees(&single, &[0], 0).unwrap(), vec![0]);
    }

    #[test]
    fn bad_orderings_are_rejected() {
        let table = DegreeTable::from_graph(&transitive_tournament());
        let invalid = Err(ProtocolError::InvalidOrdering { n: 3 });
        assert_eq!(reachable_set_from_degrees(&table, &[0, 1, 2], 0), invalid);
        assert_eq!(reachable_set_from_degrees(&table, &[2, 2, 0], 0), invalid);
        assert_eq!(reachable_set_from_degrees(&table, &[2, 1], 0), invalid);
        assert_eq!(reachable_set_from_degrees(&table, &[2, 1, 0], 3), invalid);
        assert!(DegreeTable::from_entries(vec![(0, 2), (0, 0)]).is_err());
    }

    #[test]
    fn identity_failure_is_reported() {
        // path 0→1→2 is not diameter one; the identity only closes at k = n,
        // so every vertex appears to reach everything.
        let path = Digraph::new(3, [(0, 1), (1, 2)]).unwrap();
        let table = DegreeTable::from_graph(&path);
        let prefixes = all_pairs_reachability(&table).unwrap();
        assert!(!prefixes.matches(&reach_oracle(&path)));
        // a degree table no complete graph can produce
        let bogus = DegreeTable::from_entries(vec![(0, 0), (0, 0), (1, 0)]).unwrap();
        let ordering = bogus.sorted_order();
        assert_eq!(
            reachable_set_from_degrees(&bogus, &ordering, 0),
            Err(ProtocolError::NoClosingIndex { position: 0 })
        );
    }

    #[test]
    fn local_work_is_linear_in_n() {
        for n in [1, 2, 5, 17, 64] {
            let g = crate::instances::gen_random_diam1(n, 1.0 / 3.0, n as u64);
            let table = DegreeTable::from_graph(&g);
            let (_, checks) = prefixes_for(&table, table.sorted_order()).unwrap();
            assert_eq!(checks, n);
        }
    }

    #[test]
    fn protocol_matches_oracle_in_one_round() {
        for g in [transitive_tournament(), three_cycle()] {
            let report = run(&g, |_| Reach1::new(), 2, BitBudget::for_n(3)).unwrap();
            assert_eq!(report.rounds_used, 1);
            assert_eq!(report.max_message_bits, 4);
            let oracle = reach_oracle(&g);
            assert!(report.outputs.iter().all(|out| out.to_matrix() == oracle));
        }
        let complete = Digraph::new(3, [(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)]).unwrap();
        let report = run(&complete, |_| Reach1::new(), 2, BitBudget::for_n(3)).unwrap();
        assert_eq!(report.outputs[0].to_matrix(), ReachMatrix::from_fn(3, |_, _| true));
        let single = Digraph::new(1, []).unwrap();
        let report = run(&single, |_| Reach1::new(), 1, BitBudget::for_n(1)).unwrap();
        assert_eq!(report.outputs[0].reachable_from(0), vec![0]);
    }

    #[test]
    fn in_degree_only_variant_halves_messages() {
        let g = transitive_tournament();
        let report = run(&g, |_| Reach1::in_degree_only(), 2, BitBudget::for_n(3)).unwrap();
        assert_eq!(report.max_message_bits, 2);
        assert_eq!(report.outputs[1].to_matrix(), reach_oracle(&g));
    }

    #[test]
    fn off_hypothesis_run_fails_loudly() {
        let path = Digraph::new(3, [(0, 1), (1, 2)]).unwrap();
        let err = run(&path, |_| Reach1::new(), 2, BitBudget::for_n(3)).unwrap_err();
        assert!(err.to_string().contains("heard from 1 of 2"), "{err}");
    }

    #[test]
    fn serializes_as_bitstring_rows() {
        let table = DegreeTable::from_graph(&transitive_tournament());
        let json = serde_json::to_string(&all_pairs_reachability(&table).unwrap()).unwrap();
        assert_eq!(json, r#"["111","011","001"]"#);
    }
}
