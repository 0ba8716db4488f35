//! Per-graph oracle comparisons shared by the experiment runner and the
//! property suites.

use serde::Serialize;

use crate::engine::{run, BitBudget, RunError, RunReport};
use crate::graph::{apsp_oracle, bfs_distances, reach_oracle, Digraph, DistMatrix, Distance, VertexId};
use crate::protocols::{Apsp3, BfsSssp, DistEstimates, Reach1, ReachPrefixes};

pub fn run_reach1(g: &Digraph, budget: BitBudget, max_rounds: usize) -> Result<RunReport<ReachPrefixes>, RunError> {
    run(g, |_| Reach1::new(), max_rounds, budget)
}

pub fn run_apsp3(g: &Digraph, budget: BitBudget, max_rounds: usize) -> Result<RunReport<DistEstimates>, RunError> {
    run(g, |_| Apsp3::new(), max_rounds, budget)
}

pub fn run_bfs(
    g: &Digraph,
    source: VertexId,
    budget: BitBudget,
    max_rounds: usize,
) -> Result<RunReport<Distance>, RunError> {
    run(g, |_| BfsSssp::new(source), max_rounds, budget)
}

/// Vertices whose output differs from the oracle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactComparison {
    pub oracle_match: bool,
    pub mismatched_vertices: Vec<VertexId>,
}

/// Every vertex's reachability output against the oracle. Outputs equal to
/// vertex 0's share one matrix comparison.
pub fn compare_reach(g: &Digraph, outputs: &[ReachPrefixes]) -> ExactComparison {
    let oracle = reach_oracle(g);
    let first_ok = outputs[0].matches(&oracle);
    let mismatched_vertices: Vec<VertexId> = outputs
        .iter()
        .enumerate()
        .filter(|(_, out)| if *out == &outputs[0] { !first_ok } else { !out.matches(&oracle) })
        .map(|(v, _)| v)
        .collect();
    ExactComparison { oracle_match: mismatched_vertices.is_empty(), mismatched_vertices }
}

pub fn compare_bfs(g: &Digraph, source: VertexId, outputs: &[Distance]) -> ExactComparison {
    let oracle = bfs_distances(g, source);
    let mismatched_vertices: Vec<VertexId> = (0..g.n()).filter(|&v| outputs[v] != oracle[v]).collect();
    ExactComparison { oracle_match: mismatched_vertices.is_empty(), mismatched_vertices }
}

/// One pair breaking `d ≤ d̂ ≤ 3d` (or the diagonal / reachability rule).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SandwichViolation {
    pub vertex: VertexId,
    pub x: VertexId,
    pub y: VertexId,
    pub exact: Distance,
    pub estimate: Distance,
}

/// Ratio statistics of `d̂ / d` over reachable ordered pairs `x ≠ y`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SandwichStats {
    pub pairs: usize,
    pub violations: usize,
    pub first_violation: Option<SandwichViolation>,
    pub ratio_min: f64,
    pub ratio_mean: f64,
    pub ratio_max: f64,
}

fn pair_ok(x: VertexId, y: VertexId, exact: Distance, estimate: Distance) -> bool {
    if x == y {
        return estimate == Distance::Finite(0);
    }
    match (exact, estimate) {
        (Distance::Finite(d), Distance::Finite(e)) => d <= e && e <= 3 * d,
        (Distance::Infinite, Distance::Infinite) => true,
        _ => false,
    }
}

/// Checks one vertex's estimates against exact distances.
pub fn sandwich(vertex: VertexId, estimates: &DistEstimates, exact: &DistMatrix) -> SandwichStats {
    let n = exact.n();
    let mut stats = SandwichStats {
        pairs: 0,
        violations: 0,
        first_violation: None,
        ratio_min: f64::INFINITY,
        ratio_mean: 0.0,
        ratio_max: 0.0,
    };
    let mut ratio_sum = 0.0;
    for x in 0..n {
        for y in 0..n {
            let (d, e) = (exact.get(x, y), estimates.get(x, y).value());
            if !pair_ok(x, y, d, e) {
                stats.violations += 1;
                stats.first_violation.get_or_insert(SandwichViolation { vertex, x, y, exact: d, estimate: e });
            }
            if let (true, Distance::Finite(d), Distance::Finite(e)) = (x != y, d, e) {
                let ratio = e as f64 / d as f64;
                stats.pairs += 1;
                ratio_sum += ratio;
                stats.ratio_min = stats.ratio_min.min(ratio);
                stats.ratio_max = stats.ratio_max.max(ratio);
            }
        }
    }
    if stats.pairs > 0 {
        stats.ratio_mean = ratio_sum / stats.pairs as f64;
    } else {
        stats.ratio_min = 0.0;
    }
    stats
}

/// Sandwich check of every vertex's output; identical outputs are checked once.
pub fn compare_apsp(g: &Digraph, outputs: &[DistEstimates]) -> SandwichStats {
    let exact = apsp_oracle(g);
    let mut stats = sandwich(0, &outputs[0], &exact);
    for (v, out) in outputs.iter().enumerate().skip(1) {
        if out != &outputs[0] {
            let other = sandwich(v, out, &exact);
            stats.violations += other.violations;
            if stats.first_violation.is_none() {
                stats.first_violation = other.first_violation;
            }
        }
    }
    stats
}
