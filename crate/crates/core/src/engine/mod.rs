//! Deterministic round-synchronous Broadcast CONGEST simulator.
//!
//! Round 0 is local initialization. In round `r ≥ 1` every vertex receives
//! the messages its underlying-graph neighbors broadcast at the end of round
//! `r − 1`, keyed by sender, and produces either its next broadcast or its
//! final output. Communication ignores edge directions. Halted vertices
//! broadcast the empty message.

mod message;

use std::error::Error as StdError;

use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::graph::{Digraph, VertexId};

pub use message::{
    ceil_log2, decode_pair, decode_uint, encode_uint, pair_message, uint_width, BitBudget, BroadcastMessage,
    EncodeError,
};

pub type AlgorithmError = Box<dyn StdError + Send + Sync>;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("vertex {vertex} tried to broadcast {bits} bits in round {round} (budget {limit})")]
    BudgetExceeded { vertex: VertexId, round: usize, bits: usize, limit: usize },
    #[error("{} vertices still running after {rounds} rounds (first: {})", unhalted.len(), unhalted[0])]
    NotHalted { rounds: usize, unhalted: Vec<VertexId> },
    #[error("vertex {vertex} failed in round {round}: {source}")]
    Algorithm {
        vertex: VertexId,
        round: usize,
        #[source]
        source: AlgorithmError,
    },
}

/// What a vertex knows about itself before the first round.
#[derive(Debug, Clone, Copy)]
pub struct VertexContext<'a> {
    pub id: VertexId,
    pub n: usize,
    pub out_neighbors: &'a [VertexId],
    pub in_neighbors: &'a [VertexId],
    pub underlying_neighbors: &'a [VertexId],
}

impl VertexContext<'_> {
    pub fn out_degree(&self) -> usize {
        self.out_neighbors.len()
    }

    pub fn in_degree(&self) -> usize {
        self.in_neighbors.len()
    }
}

/// Messages delivered to one vertex in one round, ascending by sender id.
/// Contains exactly one entry per underlying neighbor.
pub struct Inbox<'a> {
    entries: Vec<(VertexId, &'a BroadcastMessage)>,
}

impl<'a> Inbox<'a> {
    pub fn iter(&self) -> impl Iterator<Item = (VertexId, &'a BroadcastMessage)> + '_ {
        self.entries.iter().copied()
    }

    pub fn get(&self, sender: VertexId) -> Option<&'a BroadcastMessage> {
        self.entries.binary_search_by_key(&sender, |&(s, _)| s).ok().map(|i| self.entries[i].1)
    }

    pub fn senders(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.entries.iter().map(|&(s, _)| s)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Result of one local step: broadcast a message next round, or stop with output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step<O> {
    Continue(BroadcastMessage),
    Halt(O),
}

/// Per-vertex round procedure. One instance runs at each vertex; its state
/// may depend only on its context and the messages it has received.
pub trait VertexAlgorithm {
    type Output;

    /// Round 0. A `Continue` message is broadcast in round 1.
    fn init(&mut self, ctx: &VertexContext<'_>) -> Result<Step<Self::Output>, AlgorithmError>;

    /// Round `round ≥ 1`.
    fn step(&mut self, round: usize, inbox: &Inbox<'_>) -> Result<Step<Self::Output>, AlgorithmError>;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunReport<O> {
    pub rounds_used: usize,
    pub max_message_bits: usize,
    /// Indexed by vertex id.
    pub outputs: Vec<O>,
    /// `per_round_bits[r - 1][v]`: length of the message `v` broadcast in round `r`.
    pub per_round_bits: Vec<Vec<usize>>,
}

impl<O> RunReport<O> {
    /// Last round in which any vertex broadcast a non-empty message.
    pub fn last_active_round(&self) -> usize {
        self.per_round_bits.iter().rposition(|row| row.iter().any(|&b| b > 0)).map_or(0, |i| i + 1)
    }
}

struct OutputMap<'a, O>(&'a [O]);

impl<O: Serialize> Serialize for OutputMap<'_, O> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (v, out) in self.0.iter().enumerate() {
            map.serialize_entry(&v.to_string(), out)?;
        }
        map.end()
    }
}

impl<O: Serialize> Serialize for RunReport<O> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("RunReport", 4)?;
        st.serialize_field("rounds", &self.rounds_used)?;
        st.serialize_field("max_bits", &self.max_message_bits)?;
        st.serialize_field("outputs", &OutputMap(&self.outputs))?;
        st.serialize_field("per_round_bits", &self.per_round_bits)?;
        st.end()
    }
}

fn check_budget(msg: &BroadcastMessage, vertex: VertexId, round: usize, budget: BitBudget) -> Result<(), RunError> {
    if msg.len() > budget.limit {
        Err(RunError::BudgetExceeded { vertex, round, bits: msg.len(), limit: budget.limit })
    } else {
        Ok(())
    }
}

/// Runs one algorithm instance per vertex of `g` until every vertex halts or
/// `max_rounds` rounds have elapsed. Vertices are stepped in ascending id
/// order, so identical inputs give identical reports.
pub fn run<A, F>(
    g: &Digraph,
    mut factory: F,
    max_rounds: usize,
    budget: BitBudget,
) -> Result<RunReport<A::Output>, RunError>
where
    A: VertexAlgorithm,
    F: FnMut(VertexId) -> A,
{
    let n = g.n();
    let neighbors: Vec<Vec<VertexId>> = (0..n).map(|v| g.underlying_neighbors(v)).collect();
    let mut algorithms: Vec<A> = (0..n).map(&mut factory).collect();
    let mut outputs: Vec<Option<A::Output>> = (0..n).map(|_| None).collect();
    let mut outbox = vec![BroadcastMessage::empty(); n];

    for (v, alg) in algorithms.iter_mut().enumerate() {
        let ctx = VertexContext {
            id: v,
            n,
            out_neighbors: g.out_neighbors(v),
            in_neighbors: g.in_neighbors(v),
            underlying_neighbors: &neighbors[v],
        };
        match alg.init(&ctx).map_err(|source| RunError::Algorithm { vertex: v, round: 0, source })? {
            Step::Continue(msg) => {
                check_budget(&msg, v, 1, budget)?;
                outbox[v] = msg;
            }
            Step::Halt(out) => outputs[v] = Some(out),
        }
    }

    let mut per_round_bits = Vec::new();
    let mut round = 0;
    while round < max_rounds && outputs.iter().any(Option::is_none) {
        round += 1;
        per_round_bits.push(outbox.iter().map(BroadcastMessage::len).collect());
        let mut next = vec![BroadcastMessage::empty(); n];
        for v in 0..n {
            if outputs[v].is_some() {
                continue;
            }
            let inbox = Inbox { entries: neighbors[v].iter().map(|&u| (u, &outbox[u])).collect() };
            match algorithms[v].step(round, &inbox).map_err(|source| RunError::Algorithm {
                vertex: v,
                round,
                source,
            })? {
                Step::Continue(msg) => {
                    check_budget(&msg, v, round + 1, budget)?;
                    next[v] = msg;
                }
                Step::Halt(out) => outputs[v] = Some(out),
            }
        }
        outbox = next;
    }

    let unhalted: Vec<VertexId> = (0..n).filter(|&v| outputs[v].is_none()).collect();
    if !unhalted.is_empty() {
        return Err(RunError::NotHalted { rounds: round, unhalted });
    }
    let max_message_bits = per_round_bits.iter().flatten().copied().max().unwrap_or(0);
    Ok(RunReport {
        rounds_used: round,
        max_message_bits,
        outputs: outputs.into_iter().map(Option::unwrap).collect(),
        per_round_bits,
    })
}
