//! Two-round 3-approximate all-pairs distances.
//!
//! For a threshold `i`, `M(i)` is the largest out-degree among vertices of
//! out-degree `> i` entered by an edge from a vertex of out-degree `≤ i`
//! (undefined when there is none). Each vertex `x` gets a threshold
//! sequence `f_0[x] = max d_out over {x} ∪ N_out(x)`, `f_k[x] = M(f_{k−1}[x])`.
//! If `i` is the first index with `f_i[x] ≥ d_out(y)` then
//! `d(x, y) ≤ 3(i + 1) ≤ 3·d(x, y)`; if there is none, `y` is unreachable.
//!
//! `M(i)` can be recomputed from out-degrees and the values
//! `m_v = max d_out over N_out(v)` alone, which is what makes two rounds
//! enough.

use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::ProtocolError;
use crate::engine::{decode_uint, encode_uint, AlgorithmError, Inbox, Step, VertexAlgorithm, VertexContext};
use crate::graph::{Digraph, Distance, VertexId};

/// Why a threshold sequence is malformed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FSequenceViolation {
    WrongLength {
        expected: usize,
        got: usize,
    },
    /// A defined value follows an undefined one.
    NotAbsorbing {
        index: usize,
    },
    NotIncreasing {
        index: usize,
    },
    /// The value at index `n` is defined.
    LastDefined,
    ValueOutOfRange {
        index: usize,
        value: usize,
    },
}

/// Threshold sequence `f_0[x], …, f_n[x]`. Stored as its defined prefix;
/// every later index is undefined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FSequence {
    owner: VertexId,
    n: usize,
    defined: Vec<usize>,
}

impl FSequence {
    /// Builds from an explicit `n + 1` entry listing. Rejects sequences where
    /// a defined value follows an undefined one.
    pub fn from_options(owner: VertexId, n: usize, values: &[Option<usize>]) -> Result<Self, FSequenceViolation> {
        if values.len() != n + 1 {
            return Err(FSequenceViolation::WrongLength { expected: n + 1, got: values.len() });
        }
        let defined: Vec<usize> = values.iter().map_while(|v| *v).collect();
        if let Some(index) = values[defined.len()..].iter().position(Option::is_some) {
            return Err(FSequenceViolation::NotAbsorbing { index: defined.len() + index });
        }
        Ok(Self { owner, n, defined })
    }

    pub fn owner(&self) -> VertexId {
        self.owner
    }

    /// Number of entries, `n + 1`.
    pub fn len(&self) -> usize {
        self.n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `f_index[x]`, or `None` for ⊥.
    pub fn get(&self, index: usize) -> Option<usize> {
        self.defined.get(index).copied()
    }

    pub fn defined_prefix(&self) -> &[usize] {
        &self.defined
    }

    pub fn to_options(&self) -> Vec<Option<usize>> {
        (0..=self.n).map(|i| self.get(i)).collect()
    }

    /// Values are below `n`, strictly increase, and index `n` is undefined.
    pub fn check(&self) -> Result<(), FSequenceViolation> {
        if let Some((index, &value)) = self.defined.iter().enumerate().find(|(_, &v)| v >= self.n) {
            return Err(FSequenceViolation::ValueOutOfRange { index, value });
        }
        if let Some(i) = self.defined.windows(2).position(|w| w[0] >= w[1]) {
            return Err(FSequenceViolation::NotIncreasing { index: i + 1 });
        }
        if self.defined.len() > self.n {
            return Err(FSequenceViolation::LastDefined);
        }
        Ok(())
    }
}

impl fmt::Display for FSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for i in 0..=self.n {
            if i > 0 {
                f.write_str(", ")?;
            }
            match self.get(i) {
                Some(v) => write!(f, "{v}")?,
                None => f.write_str("⊥")?,
            }
        }
        f.write_str(")")
    }
}

/// `m_v = max{d_out(u) : u ∈ N_out(v)}`, undefined for sinks.
pub fn m_values(g: &Digraph) -> Vec<Option<usize>> {
    (0..g.n()).map(|v| g.out_neighbors(v).iter().map(|&u| g.out_degree(u)).max()).collect()
}

/// `M(0), …, M(n − 1)` evaluated straight from the edge set.
fn global_thresholds(g: &Digraph) -> Vec<Option<usize>> {
    (0..g.n())
        .map(|i| {
            (0..g.n())
                .filter(|&u| g.out_degree(u) > i && g.in_neighbors(u).iter().any(|&w| g.out_degree(w) <= i))
                .map(|u| g.out_degree(u))
                .max()
        })
        .collect()
}

fn build_sequence(owner: VertexId, n: usize, first: usize, next: impl Fn(usize) -> Option<usize>) -> FSequence {
    let mut defined = vec![first];
    let mut current = first;
    // indices 1..=n; a defined f_n is kept so `check` can flag it
    while defined.len() <= n {
        match next(current) {
            Some(v) => {
                defined.push(v);
                current = v;
            }
            None => break,
        }
    }
    FSequence { owner, n, defined }
}

fn global_sequence(g: &Digraph, thresholds: &[Option<usize>], x: VertexId) -> FSequence {
    let first =
        std::iter::once(x).chain(g.out_neighbors(x).iter().copied()).map(|v| g.out_degree(v)).max().unwrap_or(0);
    build_sequence(x, g.n(), first, |i| thresholds.get(i).copied().flatten())
}

/// Threshold sequence of `x` computed from the full graph.
pub fn f_sequence_global(g: &Digraph, x: VertexId) -> FSequence {
    global_sequence(g, &global_thresholds(g), x)
}

pub fn f_sequences_global(g: &Digraph) -> Vec<FSequence> {
    let thresholds = global_thresholds(g);
    (0..g.n()).map(|x| global_sequence(g, &thresholds, x)).collect()
}

/// `M'(i)` for every `i`, derived only from out-degrees and m-values:
/// `M'(i) = max{m_v : 0 < d_out(v) ≤ i, m_v > i}`.
#[derive(Debug, Clone)]
pub struct LocalThresholds {
    /// `best[i] = max{m_v : 0 < d_out(v) ≤ i}`
    best: Vec<Option<usize>>,
}

impl LocalThresholds {
    /// m-values of vertices with zero out-degree are ignored.
    pub fn new(d_out: &[usize], m: &[Option<usize>]) -> Self {
        let n = d_out.len();
        let mut best = vec![None; n];
        for (v, &d) in d_out.iter().enumerate() {
            if d > 0 && d < n {
                if let Some(mv) = m[v] {
                    best[d] = best[d].max(Some(mv));
                }
            }
        }
        for i in 1..n {
            best[i] = best[i].max(best[i - 1]);
        }
        Self { best }
    }

    pub fn threshold(&self, i: usize) -> Option<usize> {
        self.best.get(i).copied().flatten().filter(|&mv| mv > i)
    }

    /// `f_0[x] = 0` for a sink, else `max(d_out(x), m_x)`.
    pub fn sequence(&self, d_out: &[usize], m: &[Option<usize>], x: VertexId) -> FSequence {
        let first = match d_out[x] {
            0 => 0,
            d => d.max(m[x].unwrap_or(d)),
        };
        build_sequence(x, d_out.len(), first, |i| self.threshold(i))
    }
}

/// Threshold sequence of `x` computed from out-degrees and m-values only.
pub fn f_sequence_local(d_out: &[usize], m: &[Option<usize>], x: VertexId) -> FSequence {
    LocalThresholds::new(d_out, m).sequence(d_out, m, x)
}

/// Distance estimate: `0`, a positive multiple of 3, or infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct DistEstimate(Distance);

impl DistEstimate {
    pub const ZERO: DistEstimate = DistEstimate(Distance::Finite(0));
    pub const INFINITE: DistEstimate = DistEstimate(Distance::Infinite);

    pub fn value(self) -> Distance {
        self.0
    }

    pub fn finite(self) -> Option<usize> {
        self.0.finite()
    }
}

impl fmt::Display for DistEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `3(i + 1)` for the first index `i < n` with `f_i[x] ≥ d_out(y)`; zero on
/// the diagonal.
pub fn estimate_distance(fx: &FSequence, d_out_y: usize, same_vertex: bool) -> DistEstimate {
    if same_vertex {
        return DistEstimate::ZERO;
    }
    // the defined prefix is increasing, so the first crossing is a partition point
    let defined = &fx.defined[..fx.defined.len().min(fx.n)];
    let i = defined.partition_point(|&f| f < d_out_y);
    if i < defined.len() {
        DistEstimate(Distance::Finite(3 * (i + 1)))
    } else {
        DistEstimate::INFINITE
    }
}

/// All-pairs estimates in compact form: out-degrees plus one threshold
/// sequence per vertex. [`DistEstimates::get`] evaluates a single entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistEstimates {
    d_out: Vec<usize>,
    sequences: Vec<FSequence>,
}

impl DistEstimates {
    pub fn n(&self) -> usize {
        self.d_out.len()
    }

    pub fn get(&self, x: VertexId, y: VertexId) -> DistEstimate {
        estimate_distance(&self.sequences[x], self.d_out[y], x == y)
    }

    pub fn sequences(&self) -> &[FSequence] {
        &self.sequences
    }

    pub fn to_matrix(&self) -> Vec<Vec<DistEstimate>> {
        (0..self.n()).map(|x| (0..self.n()).map(|y| self.get(x, y)).collect()).collect()
    }
}

impl Serialize for DistEstimates {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.n()))?;
        for x in 0..self.n() {
            let row: Vec<DistEstimate> = (0..self.n()).map(|y| self.get(x, y)).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

/// Pure form of the protocol's final local computation.
pub fn apsp3_estimates(d_out: &[usize], m: &[Option<usize>]) -> DistEstimates {
    let thresholds = LocalThresholds::new(d_out, m);
    DistEstimates {
        d_out: d_out.to_vec(),
        sequences: (0..d_out.len()).map(|x| thresholds.sequence(d_out, m, x)).collect(),
    }
}

/// Two-round protocol: broadcast `d_out`, then broadcast `m_v` (sinks send a
/// zero that receivers ignore), then evaluate every estimate locally.
#[derive(Debug, Clone, Default)]
pub struct Apsp3 {
    id: VertexId,
    n: usize,
    out_neighbors: Vec<VertexId>,
    d_out: Vec<usize>,
}

impl Apsp3 {
    pub fn new() -> Self {
        Self::default()
    }

    fn expect_everyone(&self, inbox: &Inbox<'_>) -> Result<(), ProtocolError> {
        if inbox.len() == self.n - 1 {
            Ok(())
        } else {
            Err(ProtocolError::MissingNeighbors { vertex: self.id, heard: inbox.len(), expected: self.n - 1 })
        }
    }
}

impl VertexAlgorithm for Apsp3 {
    type Output = DistEstimates;

    fn init(&mut self, ctx: &VertexContext<'_>) -> Result<Step<DistEstimates>, AlgorithmError> {
        self.id = ctx.id;
        self.n = ctx.n;
        self.out_neighbors = ctx.out_neighbors.to_vec();
        self.d_out = vec![0; ctx.n];
        self.d_out[ctx.id] = ctx.out_degree();
        Ok(Step::Continue(encode_uint(ctx.out_degree(), ctx.n)?))
    }

    fn step(&mut self, round: usize, inbox: &Inbox<'_>) -> Result<Step<DistEstimates>, AlgorithmError> {
        self.expect_everyone(inbox)?;
        if round == 1 {
            for (sender, msg) in inbox.iter() {
                self.d_out[sender] = decode_uint(msg, self.n)?;
            }
            let m = self.out_neighbors.iter().map(|&u| self.d_out[u]).max().unwrap_or(0);
            return Ok(Step::Continue(encode_uint(m, self.n)?));
        }
        let mut m = vec![None; self.n];
        m[self.id] = self.out_neighbors.iter().map(|&u| self.d_out[u]).max();
        for (sender, msg) in inbox.iter() {
            let value = decode_uint(msg, self.n)?;
            if self.d_out[sender] > 0 {
                m[sender] = Some(value);
            }
        }
        Ok(Step::Halt(apsp3_estimates(&self.d_out, &m)))
    }
}
