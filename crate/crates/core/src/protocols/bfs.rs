use crate::engine::{
    decode_uint, encode_uint, AlgorithmError, BroadcastMessage, Inbox, Step, VertexAlgorithm, VertexContext,
};
use crate::graph::{Distance, VertexId};

/// Baseline single-source distance flooding along directed edges.
///
/// A vertex that improves its tentative distance broadcasts it in the next
/// round; receivers only accept offers from their in-neighbors. Every
/// vertex halts after `n` rounds.
#[derive(Debug, Clone)]
pub struct BfsSssp {
    source: VertexId,
    n: usize,
    in_neighbors: Vec<VertexId>,
    dist: Option<usize>,
}

impl BfsSssp {
    pub fn new(source: VertexId) -> Self {
        Self { source, n: 0, in_neighbors: Vec::new(), dist: None }
    }

    fn output(&self) -> Distance {
        self.dist.map_or(Distance::Infinite, Distance::Finite)
    }
}

impl VertexAlgorithm for BfsSssp {
    type Output = Distance;

    fn init(&mut self, ctx: &VertexContext<'_>) -> Result<Step<Distance>, AlgorithmError> {
        self.n = ctx.n;
        self.in_neighbors = ctx.in_neighbors.to_vec();
        if ctx.id == self.source {
            self.dist = Some(0);
            return Ok(Step::Continue(encode_uint(0, ctx.n)?));
        }
        Ok(Step::Continue(BroadcastMessage::empty()))
    }

    fn step(&mut self, round: usize, inbox: &Inbox<'_>) -> Result<Step<Distance>, AlgorithmError> {
        let mut improved = false;
        for (sender, msg) in inbox.iter() {
            if msg.is_empty() || self.in_neighbors.binary_search(&sender).is_err() {
                continue;
            }
            let offer = decode_uint(msg, self.n)? + 1;
            if self.dist.is_none_or(|d| offer < d) {
                self.dist = Some(offer);
                improved = true;
            }
        }
        if round >= self.n {
            return Ok(Step::Halt(self.output()));
        }
        match self.dist {
            Some(d) if improved => Ok(Step::Continue(encode_uint(d, self.n)?)),
            _ => Ok(Step::Continue(BroadcastMessage::empty())),
        }
    }
}
