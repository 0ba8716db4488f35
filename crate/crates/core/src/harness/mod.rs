//! Experiment runner behind the CLI: load or generate instances, run a
//! protocol under the engine, compare with the oracles, and assemble
//! JSON/CSV reports.

pub mod checks;
pub mod suites;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::engine::{BitBudget, RunError};
use crate::graph::{parse_any, Digraph, GraphError, VertexId};
use crate::instances::{
    gen_random_diam1, generate, DescriptorError, InstanceDescriptor, InstanceError, DEFAULT_ANTIPARALLEL_PROB,
};
use checks::{
    compare_apsp, compare_bfs, compare_reach, run_apsp3, run_bfs, run_reach1, ExactComparison, SandwichStats,
};

pub use suites::{run_suite, SuiteReport, SUITE_NAMES};

/// Caps the worker pool used for corpus runs and suites.
pub const WORKERS_ENV: &str = "CONGEST_DIAM1_WORKERS";

/// Instances above this size skip the oracle comparison unless overridden.
pub const DEFAULT_ORACLE_LIMIT: usize = 512;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Descriptor(#[from] DescriptorError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{protocol} requires a diameter-1 network, but instance {instance} has underlying diameter {diameter}")]
    Incompatible { protocol: Protocol, instance: String, diameter: crate::Distance },
    #[error("source {source_vertex} is not a vertex of instance {instance} (n = {n})")]
    BadSource { source_vertex: VertexId, instance: String, n: usize },
    #[error("instance {instance}: {source}")]
    Run {
        instance: String,
        #[source]
        source: RunError,
    },
    #[error("unknown suite {0:?} (expected one of: {list})", list = SUITE_NAMES.join(", "))]
    UnknownSuite(String),
    #[error("bad corpus spec: {0}")]
    Corpus(String),
}

impl HarnessError {
    /// 1 for failures the protocol run itself produced, 2 for bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Run { .. } => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Protocol {
    Reach1,
    Apsp3,
    Bfs,
}

impl Protocol {
    pub fn requires_diameter_one(self) -> bool {
        matches!(self, Protocol::Reach1 | Protocol::Apsp3)
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Protocol::Reach1 => "reach1",
            Protocol::Apsp3 => "apsp3",
            Protocol::Bfs => "bfs",
        })
    }
}

impl FromStr for Protocol {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "reach1" => Ok(Protocol::Reach1),
            "apsp3" => Ok(Protocol::Apsp3),
            "bfs" => Ok(Protocol::Bfs),
            _ => Err(format!("unknown protocol {s:?} (expected reach1, apsp3 or bfs)")),
        }
    }
}

/// Seeded batch of random diameter-1 digraphs. Instance `i` has size
/// `sizes[i % sizes.len()]` and seed `seed + i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusSpec {
    pub sizes: Vec<usize>,
    pub count: usize,
    pub seed: u64,
    pub p: f64,
}

impl FromStr for CorpusSpec {
    type Err = HarnessError;

    /// `sizes=2-128,count=1000,seed=7,p=0.33`; a size range `a-b` expands
    /// to every size in it, a list is `4;8;16`.
    fn from_str(s: &str) -> Result<Self, HarnessError> {
        let bad = |m: String| HarnessError::Corpus(m);
        let mut spec = CorpusSpec { sizes: vec![32], count: 1, seed: 0, p: DEFAULT_ANTIPARALLEL_PROB };
        for part in s.split(',').filter(|p| !p.is_empty()) {
            let (key, value) = part.split_once('=').ok_or_else(|| bad(format!("expected key=value, got {part:?}")))?;
            let num = |v: &str| v.parse::<u64>().map_err(|_| bad(format!("{key}: not a number: {v:?}")));
            match key {
                "sizes" | "n" => {
                    spec.sizes = if let Some((a, b)) = value.split_once('-') {
                        (num(a)? as usize..=num(b)? as usize).collect()
                    } else {
                        value.split(';').map(|v| num(v).map(|x| x as usize)).collect::<Result<_, _>>()?
                    };
                }
                "count" => spec.count = num(value)? as usize,
                "seed" => spec.seed = num(value)?,
                "p" => spec.p = value.parse().map_err(|_| bad(format!("p: not a number: {value:?}")))?,
                _ => return Err(bad(format!("unknown key {key:?}"))),
            }
        }
        if spec.sizes.is_empty() || spec.sizes.contains(&0) {
            return Err(bad("sizes must be non-empty and positive".into()));
        }
        if !(0.0..=1.0).contains(&spec.p) {
            return Err(bad(format!("p = {} is not a probability", spec.p)));
        }
        Ok(spec)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceSource {
    Descriptor(String),
    File(PathBuf),
    Corpus(CorpusSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub instances: Vec<InstanceSource>,
    pub protocol: Protocol,
    /// Overrides the default `2·⌈log₂ n⌉`.
    pub budget_bits: Option<usize>,
    /// Defaults to `n + 1`.
    pub max_rounds: Option<usize>,
    /// BFS source; defaults to the instance's designated source.
    pub source: Option<VertexId>,
    pub include_outputs: bool,
    pub oracle_limit: usize,
}

impl ExperimentConfig {
    pub fn new(protocol: Protocol, instances: Vec<InstanceSource>) -> Self {
        Self {
            instances,
            protocol,
            budget_bits: None,
            max_rounds: None,
            source: None,
            include_outputs: false,
            oracle_limit: DEFAULT_ORACLE_LIMIT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedInstance {
    pub id: String,
    pub graph: Digraph,
    pub source: VertexId,
}

pub fn random_corpus(spec: &CorpusSpec) -> Vec<NamedInstance> {
    (0..spec.count)
        .map(|i| {
            let n = spec.sizes[i % spec.sizes.len()];
            let seed = spec.seed + i as u64;
            NamedInstance {
                id: format!("R1:n={n},p={},seed={seed}", spec.p),
                graph: gen_random_diam1(n, spec.p, seed),
                source: 0,
            }
        })
        .collect()
}

/// Reads canonical JSON (with an optional `"source"` field, as written by
/// `gen`) or an edge list.
pub fn load_instance_file(path: &std::path::Path) -> Result<NamedInstance, HarnessError> {
    let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io { path: path.into(), source })?;
    let graph = parse_any(&text)?;
    let source = serde_json::from_str::<serde_json::Value>(&text)
        .ok()
        .and_then(|v| v.get("source").and_then(serde_json::Value::as_u64))
        .unwrap_or(0) as VertexId;
    Ok(NamedInstance { id: path.display().to_string(), graph, source })
}

pub fn load_instances(sources: &[InstanceSource]) -> Result<Vec<NamedInstance>, HarnessError> {
    let mut out = Vec::new();
    for src in sources {
        match src {
            InstanceSource::Descriptor(text) => {
                let desc: InstanceDescriptor = text.parse()?;
                let inst = generate(&desc)?;
                out.push(NamedInstance { id: desc.to_string(), graph: inst.graph, source: inst.source });
            }
            InstanceSource::File(path) => out.push(load_instance_file(path)?),
            InstanceSource::Corpus(spec) => out.extend(random_corpus(spec)),
        }
    }
    Ok(out)
}

pub fn check_compatibility(protocol: Protocol, inst: &NamedInstance, source: VertexId) -> Result<(), HarnessError> {
    if protocol.requires_diameter_one() && !inst.graph.is_underlying_complete() {
        return Err(HarnessError::Incompatible {
            protocol,
            instance: inst.id.clone(),
            diameter: inst.graph.underlying_diameter(),
        });
    }
    if protocol == Protocol::Bfs && source >= inst.graph.n() {
        return Err(HarnessError::BadSource { source_vertex: source, instance: inst.id.clone(), n: inst.graph.n() });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum OracleComparison {
    Exact(ExactComparison),
    Sandwich(SandwichStats),
    Skipped { skipped: String },
}

impl OracleComparison {
    pub fn passed(&self) -> bool {
        match self {
            OracleComparison::Exact(c) => c.oracle_match,
            OracleComparison::Sandwich(s) => s.violations == 0,
            OracleComparison::Skipped { .. } => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceResult {
    pub id: String,
    pub n: usize,
    pub edges: usize,
    pub protocol: Protocol,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<VertexId>,
    pub budget_bits: usize,
    pub rounds: usize,
    pub last_active_round: usize,
    pub max_bits: usize,
    pub oracle: OracleComparison,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outputs: Option<serde_json::Value>,
    /// Full instance, attached when the comparison failed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Digraph>,
}

fn outputs_json<T: Serialize>(outputs: &[T]) -> serde_json::Value {
    let map = outputs
        .iter()
        .enumerate()
        .map(|(v, o)| (v.to_string(), serde_json::to_value(o).expect("outputs serialize")))
        .collect();
    serde_json::Value::Object(map)
}

pub fn run_instance(cfg: &ExperimentConfig, inst: &NamedInstance) -> Result<InstanceResult, HarnessError> {
    let g = &inst.graph;
    let n = g.n();
    let source = cfg.source.unwrap_or(inst.source);
    check_compatibility(cfg.protocol, inst, source)?;
    let budget = cfg.budget_bits.map_or(BitBudget::for_n(n), BitBudget::bits);
    let max_rounds = cfg.max_rounds.unwrap_or(n + 1);
    let with_oracle = n <= cfg.oracle_limit;
    let skipped = || OracleComparison::Skipped { skipped: format!("n = {n} above oracle limit {}", cfg.oracle_limit) };
    let wrap = |source| HarnessError::Run { instance: inst.id.clone(), source };

    let (rounds, last_active, max_bits, oracle, outputs) = match cfg.protocol {
        Protocol::Reach1 => {
            let r = run_reach1(g, budget, max_rounds).map_err(wrap)?;
            let oracle = if with_oracle { OracleComparison::Exact(compare_reach(g, &r.outputs)) } else { skipped() };
            let outputs = cfg.include_outputs.then(|| outputs_json(&r.outputs));
            (r.rounds_used, r.last_active_round(), r.max_message_bits, oracle, outputs)
        }
        Protocol::Apsp3 => {
            let r = run_apsp3(g, budget, max_rounds).map_err(wrap)?;
            let oracle = if with_oracle { OracleComparison::Sandwich(compare_apsp(g, &r.outputs)) } else { skipped() };
            let outputs = cfg.include_outputs.then(|| outputs_json(&r.outputs));
            (r.rounds_used, r.last_active_round(), r.max_message_bits, oracle, outputs)
        }
        Protocol::Bfs => {
            let r = run_bfs(g, source, budget, max_rounds).map_err(wrap)?;
            let oracle =
                if with_oracle { OracleComparison::Exact(compare_bfs(g, source, &r.outputs)) } else { skipped() };
            let outputs = cfg.include_outputs.then(|| outputs_json(&r.outputs));
            (r.rounds_used, r.last_active_round(), r.max_message_bits, oracle, outputs)
        }
    };
    let passed = oracle.passed();
    Ok(InstanceResult {
        id: inst.id.clone(),
        n,
        edges: g.edge_count(),
        protocol: cfg.protocol,
        source: (cfg.protocol == Protocol::Bfs).then_some(source),
        budget_bits: budget.limit,
        rounds,
        last_active_round: last_active,
        max_bits,
        oracle,
        passed,
        outputs,
        counterexample: (!passed).then(|| g.clone()),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioSummary {
    pub min: f64,
    pub mean: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub protocol: Protocol,
    pub config: ExperimentConfig,
    pub instances: Vec<InstanceResult>,
    pub total: usize,
    pub failed: usize,
    pub max_rounds_used: usize,
    pub max_bits: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<RatioSummary>,
}

impl ExperimentReport {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "id,n,edges,protocol,rounds,last_active_round,max_bits,passed,oracle_match,violations,ratio_min,ratio_mean,ratio_max\n",
        );
        for r in &self.instances {
            let (matched, violations, ratios) = match &r.oracle {
                OracleComparison::Exact(c) => {
                    (c.oracle_match.to_string(), String::new(), [String::new(), String::new(), String::new()])
                }
                OracleComparison::Sandwich(s) => (
                    String::new(),
                    s.violations.to_string(),
                    [s.ratio_min.to_string(), s.ratio_mean.to_string(), s.ratio_max.to_string()],
                ),
                OracleComparison::Skipped { .. } => Default::default(),
            };
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                csv_escape(&r.id),
                r.n,
                r.edges,
                r.protocol,
                r.rounds,
                r.last_active_round,
                r.max_bits,
                r.passed,
                matched,
                violations,
                ratios[0],
                ratios[1],
                ratios[2]
            ));
        }
        out
    }
}

pub fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Worker pool sized by [`WORKERS_ENV`] when it holds a positive integer.
pub fn worker_pool() -> rayon::ThreadPool {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = std::env::var(WORKERS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()).filter(|&n| n > 0) {
        builder = builder.num_threads(n);
    }
    builder.build().expect("worker pool")
}

/// Loads every instance, checks compatibility up front, then runs them on
/// the worker pool. Results keep input order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport, HarnessError> {
    let instances = load_instances(&cfg.instances)?;
    for inst in &instances {
        check_compatibility(cfg.protocol, inst, cfg.source.unwrap_or(inst.source))?;
    }
    let results = worker_pool()
        .install(|| instances.par_iter().map(|inst| run_instance(cfg, inst)).collect::<Result<Vec<_>, _>>())?;
    let sandwiches: Vec<&SandwichStats> = results
        .iter()
        .filter_map(|r| match &r.oracle {
            OracleComparison::Sandwich(s) if s.pairs > 0 => Some(s),
            _ => None,
        })
        .collect();
    let ratio = (!sandwiches.is_empty()).then(|| {
        let pairs: usize = sandwiches.iter().map(|s| s.pairs).sum();
        RatioSummary {
            min: sandwiches.iter().map(|s| s.ratio_min).fold(f64::INFINITY, f64::min),
            mean: sandwiches.iter().map(|s| s.ratio_mean * s.pairs as f64).sum::<f64>() / pairs as f64,
            max: sandwiches.iter().map(|s| s.ratio_max).fold(0.0, f64::max),
        }
    });
    Ok(ExperimentReport {
        protocol: cfg.protocol,
        config: cfg.clone(),
        total: results.len(),
        failed: results.iter().filter(|r| !r.passed).count(),
        max_rounds_used: results.iter().map(|r| r.rounds).max().unwrap_or(0),
        max_bits: results.iter().map(|r| r.max_bits).max().unwrap_or(0),
        instances: results,
        ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(protocol: Protocol, desc: &str) -> ExperimentConfig {
        ExperimentConfig::new(protocol, vec![InstanceSource::Descriptor(desc.into())])
    }

    #[test]
    fn reach1_on_random_instance() {
        let report = run_experiment(&cfg(Protocol::Reach1, "R1:n=32,p=0.33,seed=7")).unwrap();
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["instances"][0]["rounds"], 1);
        assert_eq!(json["instances"][0]["oracle"]["oracle_match"], true);
        assert_eq!(report.max_bits, 10);
    }

    #[test]
    fn apsp3_ratios_within_bounds() {
        let report = run_experiment(&cfg(Protocol::Apsp3, "R1:n=32,p=0.33,seed=7")).unwrap();
        assert!(report.passed());
        assert_eq!(report.instances[0].rounds, 2);
        let ratio = report.ratio.unwrap();
        assert!(1.0 <= ratio.min && ratio.max <= 3.0);
    }

    #[test]
    fn bfs_on_j_needs_many_rounds() {
        let report = run_experiment(&cfg(Protocol::Bfs, "J:k=4")).unwrap();
        let r = &report.instances[0];
        assert!(r.passed && r.last_active_round >= 8 && r.rounds >= 8);
    }

    #[test]
    fn incompatible_and_budget_errors() {
        let err = run_experiment(&cfg(Protocol::Reach1, "J:k=2,sigma=1-2")).unwrap_err();
        assert!(matches!(err, HarnessError::Incompatible { .. }));
        assert_eq!(err.exit_code(), 2);
        let mut c = cfg(Protocol::Reach1, "R1:n=8,seed=1");
        c.budget_bits = Some(5);
        let err = run_experiment(&c).unwrap_err();
        assert!(matches!(err, HarnessError::Run { source: RunError::BudgetExceeded { .. }, .. }));
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn corpus_spec_parsing() {
        let spec: CorpusSpec = "sizes=2-5,count=10,seed=3".parse().unwrap();
        assert_eq!(spec.sizes, vec![2, 3, 4, 5]);
        let corpus = random_corpus(&spec);
        assert_eq!(corpus.len(), 10);
        assert_eq!(corpus[5].graph.n(), 3);
        assert_eq!("sizes=4;8".parse::<CorpusSpec>().unwrap().sizes, vec![4, 8]);
        assert!("sizes=0".parse::<CorpusSpec>().is_err());
        assert!("bogus=1".parse::<CorpusSpec>().is_err());
    }

    #[test]
    fn csv_has_row_per_instance() {
        let c =
            ExperimentConfig::new(Protocol::Apsp3, vec![InstanceSource::Corpus("sizes=4;6,count=3".parse().unwrap())]);
        let csv = run_experiment(&c).unwrap().to_csv();
        assert_eq!(csv.lines().count(), 4);
        assert_eq!(csv_escape("a,b"), "\"a,b\"");
    }

    #[test]
    fn reports_are_deterministic() {
        let c = ExperimentConfig::new(
            Protocol::Apsp3,
            vec![InstanceSource::Corpus("sizes=3-9,count=6,seed=2".parse().unwrap())],
        );
        let a = serde_json::to_string(&run_experiment(&c).unwrap()).unwrap();
        let b = serde_json::to_string(&run_experiment(&c).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
