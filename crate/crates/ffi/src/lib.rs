//! C ABI for the simulator. Every handle is opaque and owned by the caller
//! once returned; release it with the matching `*_free`. Functions return a
//! [`CongestStatus`]; on failure [`congest_last_error`] describes it.
//!
//! Strings returned through `char **` out-parameters are heap allocated and
//! must be released with [`congest_string_free`].

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use congest_diam1::engine::{BitBudget, RunError, RunReport};
use congest_diam1::graph::{parse_any, Digraph, Distance, GraphError};
use congest_diam1::harness::checks::{run_apsp3, run_bfs, run_reach1};
use congest_diam1::harness::{run_suite, HarnessError};
use congest_diam1::instances::{generate, InstanceDescriptor, LabeledInstance};
use congest_diam1::protocols::{DistEstimates, ReachPrefixes};

/// Distance value standing for "unreachable".
pub const CONGEST_INFINITY: u64 = u64::MAX;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CongestStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidGraph = 4,
    InvalidParameter = 5,
    Incompatible = 6,
    BudgetExceeded = 7,
    NotHalted = 8,
    ProtocolFailure = 9,
    OutOfRange = 10,
    WrongResultKind = 11,
    Panic = 12,
}

/// A directed graph.
pub struct CongestGraph(Digraph);

/// A generated family instance: a graph plus a designated source.
pub struct CongestInstance {
    graph: CongestGraph,
    inner: LabeledInstance,
}

enum Outputs {
    Reach(ReachPrefixes),
    Apsp(DistEstimates),
    Bfs(Vec<Distance>),
}

/// Outcome of one protocol run. Outputs are those of vertex 0 for reach1
/// and apsp3 (every vertex computes the same relation) and the per-vertex
/// distances for bfs.
pub struct CongestResult {
    rounds: usize,
    max_bits: usize,
    last_active_round: usize,
    outputs: Outputs,
    json: String,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

fn fail(status: CongestStatus, msg: impl Into<String>) -> CongestStatus {
    set_error(msg);
    status
}

/// Runs `f`, mapping panics to [`CongestStatus::Panic`].
fn guard(f: impl FnOnce() -> CongestStatus) -> CongestStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(CongestStatus::Panic, "internal panic"))
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, CongestStatus> {
    if s.is_null() {
        return Err(fail(CongestStatus::NullPointer, "string argument is null"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(CongestStatus::InvalidUtf8, "string argument is not UTF-8"))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> CongestStatus {
    if out.is_null() {
        return fail(CongestStatus::NullPointer, "output pointer is null");
    }
    *out = CString::new(s).expect("JSON contains no nul bytes").into_raw();
    CongestStatus::Ok
}

unsafe fn write_handle<T>(out: *mut *mut T, value: T) -> CongestStatus {
    if out.is_null() {
        return fail(CongestStatus::NullPointer, "output pointer is null");
    }
    *out = Box::into_raw(Box::new(value));
    CongestStatus::Ok
}

fn graph_status(e: &GraphError) -> CongestStatus {
    match e {
        GraphError::Parse(_) => CongestStatus::ParseError,
        _ => CongestStatus::InvalidGraph,
    }
}

fn run_status(e: &RunError) -> CongestStatus {
    match e {
        RunError::BudgetExceeded { .. } => CongestStatus::BudgetExceeded,
        RunError::NotHalted { .. } => CongestStatus::NotHalted,
        RunError::Algorithm { .. } => CongestStatus::ProtocolFailure,
    }
}

fn distance_u64(d: Distance) -> u64 {
    d.finite().map_or(CONGEST_INFINITY, |d| d as u64)
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn congest_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

#[no_mangle]
pub unsafe extern "C" fn congest_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses canonical JSON `{"n": .., "edges": [[u, v], ..]}` or an edge list.
#[no_mangle]
pub unsafe extern "C" fn congest_graph_from_json(text: *const c_char, out: *mut *mut CongestGraph) -> CongestStatus {
    guard(|| {
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_any(text) {
            Ok(g) => write_handle(out, CongestGraph(g)),
            Err(e) => fail(graph_status(&e), e.to_string()),
        }
    })
}

/// Builds a graph from `edge_count` pairs laid out as `[u0, v0, u1, v1, ..]`.
#[no_mangle]
pub unsafe extern "C" fn congest_graph_from_edges(
    n: usize,
    edges: *const usize,
    edge_count: usize,
    out: *mut *mut CongestGraph,
) -> CongestStatus {
    guard(|| {
        if edges.is_null() && edge_count > 0 {
            return fail(CongestStatus::NullPointer, "edge array is null");
        }
        let flat = if edge_count == 0 { &[][..] } else { std::slice::from_raw_parts(edges, 2 * edge_count) };
        match Digraph::new(n, flat.chunks_exact(2).map(|p| (p[0], p[1]))) {
            Ok(g) => write_handle(out, CongestGraph(g)),
            Err(e) => fail(graph_status(&e), e.to_string()),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn congest_graph_free(g: *mut CongestGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Vertex count, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn congest_graph_vertex_count(g: *const CongestGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.n())
}

/// Edge count, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn congest_graph_edge_count(g: *const CongestGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.edge_count())
}

/// Underlying (undirected) diameter; [`CONGEST_INFINITY`] when disconnected.
#[no_mangle]
pub unsafe extern "C" fn congest_graph_underlying_diameter(g: *const CongestGraph, out: *mut u64) -> CongestStatus {
    guard(|| match (g.as_ref(), out.is_null()) {
        (Some(g), false) => {
            *out = distance_u64(g.0.underlying_diameter());
            CongestStatus::Ok
        }
        _ => fail(CongestStatus::NullPointer, "graph or output pointer is null"),
    })
}

#[no_mangle]
pub unsafe extern "C" fn congest_graph_to_json(g: *const CongestGraph, out: *mut *mut c_char) -> CongestStatus {
    guard(|| match g.as_ref() {
        Some(g) => write_string(out, serde_json::to_string(&g.0).expect("graphs serialize")),
        None => fail(CongestStatus::NullPointer, "graph is null"),
    })
}

/// Generates the instance named by a descriptor such as `"J:k=2,sigma=1-2"`.
#[no_mangle]
pub unsafe extern "C" fn congest_instance_generate(
    descriptor: *const c_char,
    out: *mut *mut CongestInstance,
) -> CongestStatus {
    guard(|| {
        let text = match read_str(descriptor) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let desc: InstanceDescriptor = match text.parse() {
            Ok(d) => d,
            Err(e) => return fail(CongestStatus::ParseError, HarnessError::from(e).to_string()),
        };
        match generate(&desc) {
            Ok(inner) => write_handle(out, CongestInstance { graph: CongestGraph(inner.graph.clone()), inner }),
            Err(e) => fail(CongestStatus::InvalidParameter, e.to_string()),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn congest_instance_free(inst: *mut CongestInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Graph of an instance, borrowed: valid while the instance lives; do not free.
#[no_mangle]
pub unsafe extern "C" fn congest_instance_graph(inst: *const CongestInstance) -> *const CongestGraph {
    inst.as_ref().map_or(ptr::null(), |i| &i.graph as *const CongestGraph)
}

/// Designated source vertex, or `usize::MAX` for a null handle.
#[no_mangle]
pub unsafe extern "C" fn congest_instance_source(inst: *const CongestInstance) -> usize {
    inst.as_ref().map_or(usize::MAX, |i| i.inner.source)
}

/// Graph JSON plus `"source"` and a `"roles"` map.
#[no_mangle]
pub unsafe extern "C" fn congest_instance_to_json(
    inst: *const CongestInstance,
    out: *mut *mut c_char,
) -> CongestStatus {
    guard(|| match inst.as_ref() {
        Some(i) => write_string(out, serde_json::to_string(&i.inner).expect("instances serialize")),
        None => fail(CongestStatus::NullPointer, "instance is null"),
    })
}

fn budget(g: &Digraph, bits: usize) -> BitBudget {
    if bits == 0 {
        BitBudget::for_n(g.n())
    } else {
        BitBudget::bits(bits)
    }
}

fn finish<O: serde::Serialize>(
    report: Result<RunReport<O>, RunError>,
    wrap: impl FnOnce(Vec<O>) -> Outputs,
    out: *mut *mut CongestResult,
) -> CongestStatus {
    match report {
        Ok(r) => {
            let json = serde_json::to_string(&r).expect("reports serialize");
            let result = CongestResult {
                rounds: r.rounds_used,
                max_bits: r.max_message_bits,
                last_active_round: r.last_active_round(),
                outputs: wrap(r.outputs),
                json,
            };
            unsafe { write_handle(out, result) }
        }
        Err(e) => fail(run_status(&e), e.to_string()),
    }
}

fn require_diameter_one(g: &Digraph) -> Option<CongestStatus> {
    (!g.is_underlying_complete()).then(|| {
        fail(
            CongestStatus::Incompatible,
            format!("protocol requires a diameter-1 network; underlying diameter is {}", g.underlying_diameter()),
        )
    })
}

/// One-round all-pairs reachability. `budget_bits = 0` selects the default
/// `2·⌈log₂ n⌉`.
#[no_mangle]
pub unsafe extern "C" fn congest_run_reach1(
    g: *const CongestGraph,
    budget_bits: usize,
    out: *mut *mut CongestResult,
) -> CongestStatus {
    guard(|| {
        let Some(g) = g.as_ref() else { return fail(CongestStatus::NullPointer, "graph is null") };
        if let Some(s) = require_diameter_one(&g.0) {
            return s;
        }
        let report = run_reach1(&g.0, budget(&g.0, budget_bits), 2);
        finish(report, |o| Outputs::Reach(o.into_iter().next().expect("n ≥ 1")), out)
    })
}

/// Two-round 3-approximate all-pairs distances.
#[no_mangle]
pub unsafe extern "C" fn congest_run_apsp3(
    g: *const CongestGraph,
    budget_bits: usize,
    out: *mut *mut CongestResult,
) -> CongestStatus {
    guard(|| {
        let Some(g) = g.as_ref() else { return fail(CongestStatus::NullPointer, "graph is null") };
        if let Some(s) = require_diameter_one(&g.0) {
            return s;
        }
        let report = run_apsp3(&g.0, budget(&g.0, budget_bits), 3);
        finish(report, |o| Outputs::Apsp(o.into_iter().next().expect("n ≥ 1")), out)
    })
}

/// Flooding BFS from `source`. `max_rounds = 0` selects `n + 1`.
#[no_mangle]
pub unsafe extern "C" fn congest_run_bfs(
    g: *const CongestGraph,
    source: usize,
    budget_bits: usize,
    max_rounds: usize,
    out: *mut *mut CongestResult,
) -> CongestStatus {
    guard(|| {
        let Some(g) = g.as_ref() else { return fail(CongestStatus::NullPointer, "graph is null") };
        if source >= g.0.n() {
            return fail(CongestStatus::OutOfRange, format!("source {source} out of range (n = {})", g.0.n()));
        }
        let rounds = if max_rounds == 0 { g.0.n() + 1 } else { max_rounds };
        finish(run_bfs(&g.0, source, budget(&g.0, budget_bits), rounds), Outputs::Bfs, out)
    })
}

#[no_mangle]
pub unsafe extern "C" fn congest_result_free(r: *mut CongestResult) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

#[no_mangle]
pub unsafe extern "C" fn congest_result_rounds(r: *const CongestResult) -> usize {
    r.as_ref().map_or(0, |r| r.rounds)
}

#[no_mangle]
pub unsafe extern "C" fn congest_result_max_bits(r: *const CongestResult) -> usize {
    r.as_ref().map_or(0, |r| r.max_bits)
}

/// Last round in which any vertex broadcast a non-empty message.
#[no_mangle]
pub unsafe extern "C" fn congest_result_last_active_round(r: *const CongestResult) -> usize {
    r.as_ref().map_or(0, |r| r.last_active_round)
}

fn check_pair(n: usize, x: usize, y: usize) -> Option<CongestStatus> {
    (x >= n || y >= n)
        .then(|| fail(CongestStatus::OutOfRange, format!("vertex pair ({x}, {y}) out of range (n = {n})")))
}

/// Whether `y` is reachable from `x` (reach1 results only).
#[no_mangle]
pub unsafe extern "C" fn congest_result_reaches(
    r: *const CongestResult,
    x: usize,
    y: usize,
    out: *mut bool,
) -> CongestStatus {
    guard(|| {
        let (Some(r), false) = (r.as_ref(), out.is_null()) else {
            return fail(CongestStatus::NullPointer, "result or output pointer is null");
        };
        let Outputs::Reach(p) = &r.outputs else {
            return fail(CongestStatus::WrongResultKind, "not a reach1 result");
        };
        if let Some(s) = check_pair(p.n(), x, y) {
            return s;
        }
        *out = p.reaches(x, y);
        CongestStatus::Ok
    })
}

/// Estimated distance from `x` to `y` (apsp3 results only);
/// [`CONGEST_INFINITY`] when unreachable.
#[no_mangle]
pub unsafe extern "C" fn congest_result_estimate(
    r: *const CongestResult,
    x: usize,
    y: usize,
    out: *mut u64,
) -> CongestStatus {
    guard(|| {
        let (Some(r), false) = (r.as_ref(), out.is_null()) else {
            return fail(CongestStatus::NullPointer, "result or output pointer is null");
        };
        let Outputs::Apsp(e) = &r.outputs else {
            return fail(CongestStatus::WrongResultKind, "not an apsp3 result");
        };
        if let Some(s) = check_pair(e.n(), x, y) {
            return s;
        }
        *out = distance_u64(e.get(x, y).value());
        CongestStatus::Ok
    })
}

/// Distance of `v` from the source (bfs results only).
#[no_mangle]
pub unsafe extern "C" fn congest_result_distance(r: *const CongestResult, v: usize, out: *mut u64) -> CongestStatus {
    guard(|| {
        let (Some(r), false) = (r.as_ref(), out.is_null()) else {
            return fail(CongestStatus::NullPointer, "result or output pointer is null");
        };
        let Outputs::Bfs(d) = &r.outputs else {
            return fail(CongestStatus::WrongResultKind, "not a bfs result");
        };
        match d.get(v) {
            Some(&dist) => {
                *out = distance_u64(dist);
                CongestStatus::Ok
            }
            None => fail(CongestStatus::OutOfRange, format!("vertex {v} out of range (n = {})", d.len())),
        }
    })
}

/// Full run report: rounds, max bits, every vertex's output.
#[no_mangle]
pub unsafe extern "C" fn congest_result_to_json(r: *const CongestResult, out: *mut *mut c_char) -> CongestStatus {
    guard(|| match r.as_ref() {
        Some(r) => write_string(out, r.json.clone()),
        None => fail(CongestStatus::NullPointer, "result is null"),
    })
}

/// Runs a named property suite; writes its JSON summary and whether it passed.
#[no_mangle]
pub unsafe extern "C" fn congest_verify_suite(
    suite: *const c_char,
    seed: u64,
    passed: *mut bool,
    summary_json: *mut *mut c_char,
) -> CongestStatus {
    guard(|| {
        let name = match read_str(suite) {
            Ok(t) => t,
            Err(s) => return s,
        };
        if passed.is_null() {
            return fail(CongestStatus::NullPointer, "output pointer is null");
        }
        match run_suite(name, seed) {
            Ok(report) => {
                *passed = report.passed;
                write_string(summary_json, serde_json::to_string(&report).expect("reports serialize"))
            }
            Err(e @ HarnessError::UnknownSuite(_)) => fail(CongestStatus::InvalidParameter, e.to_string()),
            Err(e) => fail(CongestStatus::ProtocolFailure, e.to_string()),
        }
    })
}
