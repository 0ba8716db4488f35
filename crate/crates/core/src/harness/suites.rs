//! Named property suites run by `verify`. Every suite tallies checks and
//! keeps the first failing instance so it can be replayed with `run`.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::checks::{compare_apsp, compare_bfs, compare_reach, run_apsp3, run_bfs, run_reach1};
use super::{worker_pool, HarnessError};
use crate::engine::{ceil_log2, BitBudget};
use crate::graph::{apsp_oracle, bfs_distances, closed_set_check, reach_oracle, Digraph, Distance};
use crate::instances::{
    enumerate_diam1, expected_dist_j, gen_f, gen_j, gen_random_diam1, generate, validate_instance, InstanceDescriptor,
    Role, DEFAULT_ANTIPARALLEL_PROB,
};
use crate::protocols::{all_pairs_reachability_with_order, f_sequence_global, f_sequence_local, m_values, DegreeTable};

pub const SUITE_NAMES: &[&str] =
    &["lemma1", "lemma2-exhaustive", "fseq", "sandwich", "dis2", "families", "injectivity", "round-growth"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub description: String,
    pub instance: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checked: usize,
    pub failures: usize,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub stats: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

/// Running count of checks; combines associatively so parallel reductions
/// stay deterministic.
#[derive(Debug, Clone, Default)]
struct Tally {
    checked: usize,
    failures: usize,
    first: Option<Counterexample>,
}

impl Tally {
    fn check(&mut self, ok: bool, describe: impl FnOnce() -> Counterexample) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(describe());
            }
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.checked += other.checked;
        self.failures += other.failures;
        self.first = self.first.or(other.first);
        self
    }

    fn into_report(self, suite: &str, stats: Value) -> SuiteReport {
        SuiteReport {
            suite: suite.to_string(),
            passed: self.failures == 0,
            checked: self.checked,
            failures: self.failures,
            stats,
            counterexample: self.first,
        }
    }
}

fn graph_cx(description: String, g: &Digraph) -> Counterexample {
    Counterexample { description, instance: serde_json::to_value(g).expect("graphs serialize") }
}

/// Runs `check` over `items` on the worker pool, folding in input order.
fn par_tally<T: Sync>(items: &[T], check: impl Fn(&T, &mut Tally) + Sync + Send) -> Tally {
    worker_pool().install(|| {
        items
            .par_iter()
            .map(|item| {
                let mut t = Tally::default();
                check(item, &mut t);
                t
            })
            .reduce(Tally::default, Tally::merge)
    })
}

/// Every diameter-1 digraph on `exhaustive_n` vertices, then `random_count`
/// seeded random ones with sizes cycling through `2..=max_n`.
pub fn diam1_corpus(exhaustive_n: usize, random_count: usize, max_n: usize, seed: u64) -> Vec<Digraph> {
    let mut graphs: Vec<Digraph> = if exhaustive_n > 0 { enumerate_diam1(exhaustive_n).collect() } else { Vec::new() };
    let span = max_n.max(2) - 1;
    graphs.extend(
        (0..random_count)
            .map(|i| gen_random_diam1(2 + i % span, DEFAULT_ANTIPARALLEL_PROB, seed.wrapping_add(i as u64))),
    );
    graphs
}

/// Closed-set identity: `Σ_A (d_in − d_out) = |A^c|·|A|` exactly when no
/// edge leaves `A`. Exhaustive over every subset of every diameter-1 digraph
/// with at most `exhaustive_max_n` vertices, then `random_pairs` random
/// (graph, subset) pairs; half of the random subsets are reachable sets so
/// the closed side is exercised too.
pub fn closed_set_identity(
    exhaustive_max_n: usize,
    random_pairs: usize,
    random_max_n: usize,
    seed: u64,
) -> SuiteReport {
    let check_set = |g: &Digraph, set: &[usize], t: &mut Tally| {
        let c = closed_set_check(g, set).expect("corpus graphs have diameter one");
        t.check((c.lhs == c.rhs) == c.no_outgoing, || {
            graph_cx(format!("subset {set:?}: lhs {} rhs {} closed {}", c.lhs, c.rhs, c.no_outgoing), g)
        });
    };
    let small: Vec<Digraph> = (1..=exhaustive_max_n).flat_map(enumerate_diam1).collect();
    let exhaustive = par_tally(&small, |g, t| {
        for mask in 0u32..(1 << g.n()) {
            let set: Vec<usize> = (0..g.n()).filter(|&v| mask >> v & 1 == 1).collect();
            check_set(g, &set, t);
        }
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(usize, u64, u64)> =
        (0..random_pairs).map(|_| (rng.gen_range(1..=random_max_n.max(1)), rng.gen(), rng.gen())).collect();
    let random = par_tally(&pairs, |&(n, graph_seed, set_seed), t| {
        let g = gen_random_diam1(n, DEFAULT_ANTIPARALLEL_PROB, graph_seed);
        let mut rng = ChaCha8Rng::seed_from_u64(set_seed);
        let set: Vec<usize> = if rng.gen_bool(0.5) {
            reach_oracle(&g).reachable_from(rng.gen_range(0..n))
        } else {
            let density: f64 = rng.gen();
            (0..n).filter(|_| rng.gen_bool(density)).collect()
        };
        check_set(&g, &set, t);
    });
    let stats = json!({ "exhaustive_checks": exhaustive.checked, "random_checks": random.checked });
    exhaustive.merge(random).into_report("lemma1", stats)
}

/// One-round reachability on every graph: bit-exact against the oracle, one
/// round, `2⌈log₂ n⌉`-bit messages. The degree-only reconstruction is also
/// checked under the reversed tie-break order.
pub fn reach1_corpus(suite: &str, graphs: &[Digraph]) -> SuiteReport {
    let t = par_tally(graphs, |g, t| {
        let n = g.n();
        match run_reach1(g, BitBudget::for_n(n), 2) {
            Ok(r) => {
                let cmp = compare_reach(g, &r.outputs);
                t.check(cmp.oracle_match, || {
                    graph_cx(format!("outputs of {:?} differ from oracle", cmp.mismatched_vertices), g)
                });
                t.check(r.rounds_used == 1, || graph_cx(format!("{} rounds", r.rounds_used), g));
                let want = 2 * ceil_log2(n);
                t.check(r.max_message_bits == want, || {
                    graph_cx(format!("max message {} bits, expected {want}", r.max_message_bits), g)
                });
            }
            Err(e) => t.check(false, || graph_cx(format!("run failed: {e}"), g)),
        }
        let table = DegreeTable::from_graph(g);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| (table.out_degree(v), std::cmp::Reverse(v)));
        let ok = all_pairs_reachability_with_order(&table, order).is_ok_and(|p| p.matches(&reach_oracle(g)));
        t.check(ok, || graph_cx("reversed tie-break order disagrees with oracle".into(), g));
    });
    let stats = json!({ "graphs": graphs.len() });
    t.into_report(suite, stats)
}

/// Two-round estimates: diagonal zero, finite exactly when reachable,
/// `d ≤ d̂ ≤ 3d`, two rounds, `⌈log₂ n⌉`-bit messages.
pub fn sandwich(graphs: &[Digraph]) -> SuiteReport {
    let t = par_tally(graphs, |g, t| {
        let n = g.n();
        match run_apsp3(g, BitBudget::for_n(n), 3) {
            Ok(r) => {
                let stats = compare_apsp(g, &r.outputs);
                t.check(stats.violations == 0, || {
                    graph_cx(format!("{} sandwich violations, first {:?}", stats.violations, stats.first_violation), g)
                });
                t.check(r.rounds_used == 2, || graph_cx(format!("{} rounds", r.rounds_used), g));
                let want = ceil_log2(n);
                t.check(r.max_message_bits == want, || {
                    graph_cx(format!("max message {} bits, expected {want}", r.max_message_bits), g)
                });
            }
            Err(e) => t.check(false, || graph_cx(format!("run failed: {e}"), g)),
        }
    });
    t.into_report("sandwich", json!({ "graphs": graphs.len() }))
}

/// Structure of every threshold sequence the protocol produces, and
/// agreement of the local and global threshold definitions.
pub fn fseq(graphs: &[Digraph]) -> SuiteReport {
    let t = par_tally(graphs, |g, t| {
        let n = g.n();
        let d_out: Vec<usize> = (0..n).map(|v| g.out_degree(v)).collect();
        let m = m_values(g);
        let produced = match run_apsp3(g, BitBudget::for_n(n), 3) {
            Ok(r) => r.outputs.into_iter().next().expect("n ≥ 1"),
            Err(e) => return t.check(false, || graph_cx(format!("run failed: {e}"), g)),
        };
        for x in 0..n {
            let global = f_sequence_global(g, x);
            let seq = &produced.sequences()[x];
            t.check(seq.check().is_ok(), || graph_cx(format!("sequence of {x} {seq}: {:?}", seq.check()), g));
            let local = f_sequence_local(&d_out, &m, x);
            t.check(local == global, || graph_cx(format!("vertex {x}: local {local} vs global {global}"), g));
            t.check(*seq == global, || graph_cx(format!("vertex {x}: protocol {seq} vs global {global}"), g));
        }
    });
    t.into_report("fseq", json!({ "graphs": graphs.len() }))
}

/// Whenever `d_out(x) ≥ d_out(y)`, `y` is within distance 2 of `x`.
pub fn dis2(graphs: &[Digraph]) -> SuiteReport {
    let t = par_tally(graphs, |g, t| {
        let d = apsp_oracle(g);
        for x in 0..g.n() {
            for y in (0..g.n()).filter(|&y| y != x && g.out_degree(x) >= g.out_degree(y)) {
                t.check(d.get(x, y) <= Distance::Finite(2), || {
                    graph_cx(
                        format!("d({x},{y}) = {} with d_out {} ≥ {}", d.get(x, y), g.out_degree(x), g.out_degree(y)),
                        g,
                    )
                });
            }
        }
    });
    t.into_report("dis2", json!({ "graphs": graphs.len() }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FamilySweep {
    pub max_k: usize,
    pub max_q: usize,
    pub sigmas_per_point: usize,
    pub j_max_k: usize,
    pub seed: u64,
}

impl Default for FamilySweep {
    fn default() -> Self {
        Self { max_k: 6, max_q: 6, sigmas_per_point: 50, j_max_k: 5, seed: 0 }
    }
}

/// Every validator check on a parameter sweep of all three families, plus
/// the `J` distance row recomputed from the all-pairs oracle.
pub fn families(sweep: FamilySweep) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(sweep.seed);
    let mut descriptors = Vec::new();
    for k in 1..=sweep.max_k {
        for q in 1..=sweep.max_q {
            for _ in 0..sweep.sigmas_per_point {
                let sigma: Vec<bool> = (0..k).map(|_| rng.gen()).collect();
                descriptors.push(InstanceDescriptor::F { k, q, sigma: sigma.clone() });
                descriptors.push(InstanceDescriptor::FPrime { k, q, sigma });
            }
        }
    }
    for k in 1..=sweep.j_max_k {
        descriptors.push(InstanceDescriptor::J { k, sigma: vec![k; k] });
        for _ in 0..sweep.sigmas_per_point {
            descriptors.push(InstanceDescriptor::J { k, sigma: (0..k).map(|_| rng.gen_range(1..=k)).collect() });
        }
    }
    let t = par_tally(&descriptors, |desc, t| {
        let inst = match generate(desc) {
            Ok(inst) => inst,
            Err(e) => {
                return t.check(false, || Counterexample { description: format!("{desc}: {e}"), instance: Value::Null })
            }
        };
        let cx = |what: String| Counterexample {
            description: format!("{desc}: {what}"),
            instance: serde_json::to_value(&inst).expect("instances serialize"),
        };
        for c in validate_instance(&inst, desc).checks {
            t.check(c.passed, || cx(format!("{} failed: {}", c.name, c.detail)));
        }
        if let InstanceDescriptor::J { k, sigma } = desc {
            let expected = expected_dist_j(*k, sigma).expect("generated descriptors are valid");
            let row = apsp_oracle(&inst.graph).row(inst.source).to_vec();
            let ok = inst
                .roles
                .iter()
                .enumerate()
                .all(|(v, role)| Some(row[v]) == expected.get(role).map(|&d| Distance::Finite(d)));
            t.check(ok, || cx("all-pairs oracle row from s disagrees with closed form".into()));
        }
    });
    t.into_report("families", json!({ "instances": descriptors.len(), "sweep": sweep }))
}

fn sigma_bits(k: usize, mask: u64) -> Vec<bool> {
    (0..k).map(|i| mask >> i & 1 == 1).collect()
}

/// `σ ↦ (s reaches v_q^1, …, s reaches v_q^k)` on `F`.
pub fn f_signature(k: usize, q: usize, sigma: &[bool]) -> Vec<bool> {
    let inst = gen_f(k, q, sigma).expect("valid parameters");
    let dist = bfs_distances(&inst.graph, inst.source);
    (1..=k)
        .map(|path| dist[inst.vertex_of(Role::PathVertex { path, index: q }).expect("role present")].is_finite())
        .collect()
}

/// `σ ↦ (d(s, v_k^1), …, d(s, v_k^k))` on `J`.
pub fn j_signature(k: usize, sigma: &[usize]) -> Vec<Distance> {
    let inst = gen_j(k, sigma).expect("valid parameters");
    let dist = bfs_distances(&inst.graph, inst.source);
    (1..=k).map(|path| dist[inst.vertex_of(Role::PathVertex { path, index: k }).expect("role present")]).collect()
}

fn all_j_sigmas(k: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..k.pow(k as u32)).map(move |mut code| {
        (0..k)
            .map(|_| {
                let digit = code % k + 1;
                code /= k;
                digit
            })
            .collect()
    })
}

/// Distinct hidden strings must give distinct observations at the far end
/// of the paths: all `2^k` strings for `F`, all `k^k` sequences for `J`.
pub fn injectivity(f_max_k: usize, f_max_q: usize, j_max_k: usize) -> SuiteReport {
    let points: Vec<(usize, usize)> = (1..=f_max_k).flat_map(|k| (1..=f_max_q).map(move |q| (k, q))).collect();
    let f = par_tally(&points, |&(k, q), t| {
        let mut seen = HashSet::new();
        for mask in 0..1u64 << k {
            let sigma = sigma_bits(k, mask);
            let fresh = seen.insert(f_signature(k, q, &sigma));
            t.check(fresh, || Counterexample {
                description: format!("F k={k} q={q}: signature of sigma {mask:0k$b} repeats"),
                instance: serde_json::to_value(gen_f(k, q, &sigma).unwrap()).unwrap(),
            });
        }
    });
    let ks: Vec<usize> = (1..=j_max_k).collect();
    let j = par_tally(&ks, |&k, t| {
        let mut seen = HashSet::new();
        for sigma in all_j_sigmas(k) {
            let fresh = seen.insert(j_signature(k, &sigma));
            t.check(fresh, || Counterexample {
                description: format!("J k={k}: signature of sigma {sigma:?} repeats"),
                instance: serde_json::to_value(gen_j(k, &sigma).unwrap()).unwrap(),
            });
        }
    });
    let stats = json!({ "f_strings": f.checked, "j_sequences": j.checked });
    f.merge(j).into_report("injectivity", stats)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrowthRow {
    pub k: usize,
    pub n: usize,
    pub bfs_rounds: usize,
    pub bfs_last_active_round: usize,
    pub bfs_correct: bool,
    pub reach1_rounds: usize,
    pub apsp3_rounds: usize,
}

/// Flooding BFS on `J(k, all-k)` against the constant-round protocols on a
/// random diameter-1 digraph of the same size.
pub fn growth_row(k: usize, seed: u64) -> Result<GrowthRow, HarnessError> {
    let inst = gen_j(k, &vec![k; k])?;
    let n = inst.graph.n();
    let wrap = |id: String| move |source| HarnessError::Run { instance: id, source };
    let bfs = run_bfs(&inst.graph, inst.source, BitBudget::for_n(n), n + 1).map_err(wrap(format!("J:k={k}")))?;
    let bfs_correct = compare_bfs(&inst.graph, inst.source, &bfs.outputs).oracle_match;
    let (bfs_rounds, bfs_last_active_round) = (bfs.rounds_used, bfs.last_active_round());
    drop(bfs);
    let g = gen_random_diam1(n, DEFAULT_ANTIPARALLEL_PROB, seed.wrapping_add(k as u64));
    let id = format!("R1:n={n},seed={}", seed.wrapping_add(k as u64));
    let reach1_rounds = run_reach1(&g, BitBudget::for_n(n), 2).map_err(wrap(id.clone()))?.rounds_used;
    let apsp3_rounds = run_apsp3(&g, BitBudget::for_n(n), 3).map_err(wrap(id))?.rounds_used;
    Ok(GrowthRow { k, n, bfs_rounds, bfs_last_active_round, bfs_correct, reach1_rounds, apsp3_rounds })
}

/// Rows for each `k` (ascending), checked for `≥ 2k` BFS rounds, strictly
/// growing BFS rounds, and constant 1 and 2 rounds for the protocols.
pub fn round_growth(ks: &[usize], seed: u64) -> Result<(SuiteReport, Vec<GrowthRow>), HarnessError> {
    let rows = ks.iter().map(|&k| growth_row(k, seed)).collect::<Result<Vec<_>, _>>()?;
    let mut t = Tally::default();
    let row_cx = |r: &GrowthRow, what: &str| Counterexample {
        description: format!("k={}: {what}", r.k),
        instance: serde_json::to_value(r).unwrap(),
    };
    for r in &rows {
        t.check(r.bfs_correct, || row_cx(r, "BFS distances differ from oracle"));
        t.check(r.bfs_last_active_round >= 2 * r.k && r.bfs_rounds >= 2 * r.k, || {
            row_cx(r, "BFS finished before 2k rounds")
        });
        t.check(r.reach1_rounds == 1, || row_cx(r, "reach1 did not take 1 round"));
        t.check(r.apsp3_rounds == 2, || row_cx(r, "apsp3 did not take 2 rounds"));
    }
    for w in rows.windows(2) {
        t.check(w[1].bfs_last_active_round > w[0].bfs_last_active_round, || {
            row_cx(&w[1], "BFS rounds not increasing in k")
        });
    }
    let stats = serde_json::to_value(&rows).unwrap();
    Ok((t.into_report("round-growth", stats), rows))
}

pub fn growth_csv(rows: &[GrowthRow]) -> String {
    let mut out = String::from("k,n,bfs_rounds,bfs_last_active_round,bfs_correct,reach1_rounds,apsp3_rounds\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.k, r.n, r.bfs_rounds, r.bfs_last_active_round, r.bfs_correct, r.reach1_rounds, r.apsp3_rounds
        ));
    }
    out
}

/// Runs a suite at its default scale.
pub fn run_suite(name: &str, seed: u64) -> Result<SuiteReport, HarnessError> {
    let random = || diam1_corpus(0, 500, 64, seed);
    Ok(match name {
        "lemma1" => closed_set_identity(4, 10_000, 64, seed),
        "lemma2-exhaustive" => reach1_corpus("lemma2-exhaustive", &enumerate_diam1(4).collect::<Vec<_>>()),
        "fseq" => fseq(&diam1_corpus(4, 500, 64, seed)),
        "sandwich" => sandwich(&random()),
        "dis2" => dis2(&random()),
        "families" => families(FamilySweep { seed, ..FamilySweep::default() }),
        "injectivity" => injectivity(12, 4, 5),
        "round-growth" => round_growth(&[4, 8, 16, 32], seed)?.0,
        other => return Err(HarnessError::UnknownSuite(other.to_string())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        assert!(closed_set_identity(3, 200, 12, 1).passed);
        let corpus = diam1_corpus(3, 20, 16, 1);
        assert_eq!(corpus.len(), 47);
        for report in [reach1_corpus("r", &corpus), sandwich(&corpus), fseq(&corpus), dis2(&corpus)] {
            assert!(report.passed, "{report:?}");
        }
        let sweep = FamilySweep { max_k: 3, max_q: 3, sigmas_per_point: 3, j_max_k: 3, seed: 1 };
        assert!(families(sweep).passed);
        let inj = injectivity(5, 2, 3);
        assert!(inj.passed);
        assert_eq!(inj.checked, (2 + 4 + 8 + 16 + 32) * 2 + 1 + 4 + 27);
    }

    #[test]
    fn failure_carries_counterexample() {
        // a graph without complete underlying graph trips the reach1 run
        let g = Digraph::new(3, [(0, 1), (1, 2)]).unwrap();
        let report = reach1_corpus("r", &[g]);
        assert!(!report.passed);
        let cx = report.counterexample.unwrap();
        assert_eq!(cx.instance["n"], 3);
        assert!(cx.description.contains("run failed"));
    }

    #[test]
    fn growth_rows_small() {
        let (report, rows) = round_growth(&[2, 3], 0).unwrap();
        assert!(report.passed, "{report:?}");
        assert_eq!(rows[1].n, 20);
        assert!(growth_csv(&rows).starts_with("k,n,"));
    }

    #[test]
    fn unknown_suite() {
        assert!(matches!(run_suite("nope", 0), Err(HarnessError::UnknownSuite(_))));
    }

    #[test]
    fn j_sigma_enumeration() {
        let all: Vec<_> = all_j_sigmas(2).collect();
        assert_eq!(all, vec![vec![1, 1], vec![2, 1], vec![1, 2], vec![2, 2]]);
    }
}
