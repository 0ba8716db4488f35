use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use congest_diam1_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = congest_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

unsafe fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = CStr::from_ptr(p).to_string_lossy().into_owned();
    congest_string_free(p);
    s
}

unsafe fn tournament() -> *mut CongestGraph {
    let mut g = ptr::null_mut();
    let edges = [0usize, 1, 0, 2, 1, 2];
    assert_eq!(congest_graph_from_edges(3, edges.as_ptr(), 3, &mut g), CongestStatus::Ok);
    g
}

#[test]
fn reach1_on_tournament() {
    unsafe {
        let g = tournament();
        assert_eq!(congest_graph_vertex_count(g), 3);
        assert_eq!(congest_graph_edge_count(g), 3);
        let mut r = ptr::null_mut();
        assert_eq!(congest_run_reach1(g, 0, &mut r), CongestStatus::Ok);
        assert_eq!(congest_result_rounds(r), 1);
        assert_eq!(congest_result_max_bits(r), 4);
        let mut reach = false;
        assert_eq!(congest_result_reaches(r, 0, 2, &mut reach), CongestStatus::Ok);
        assert!(reach);
        assert_eq!(congest_result_reaches(r, 2, 0, &mut reach), CongestStatus::Ok);
        assert!(!reach);
        assert_eq!(congest_result_reaches(r, 3, 0, &mut reach), CongestStatus::OutOfRange);
        let mut est = 0;
        assert_eq!(congest_result_estimate(r, 0, 1, &mut est), CongestStatus::WrongResultKind);
        assert!(last_error().contains("apsp3"));
        congest_result_free(r);
        congest_graph_free(g);
    }
}

#[test]
fn apsp3_estimates_and_json() {
    unsafe {
        let mut g = ptr::null_mut();
        let json = cstr(r#"{"n": 3, "edges": [[0, 1], [0, 2], [1, 2]]}"#);
        assert_eq!(congest_graph_from_json(json.as_ptr(), &mut g), CongestStatus::Ok);
        let mut r = ptr::null_mut();
        assert_eq!(congest_run_apsp3(g, 0, &mut r), CongestStatus::Ok);
        assert_eq!(congest_result_rounds(r), 2);
        let mut d = 0;
        assert_eq!(congest_result_estimate(r, 0, 2, &mut d), CongestStatus::Ok);
        assert_eq!(d, 3);
        assert_eq!(congest_result_estimate(r, 2, 0, &mut d), CongestStatus::Ok);
        assert_eq!(d, CONGEST_INFINITY);
        let mut s = ptr::null_mut();
        assert_eq!(congest_result_to_json(r, &mut s), CongestStatus::Ok);
        let report: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
        assert_eq!(report["outputs"]["1"], serde_json::json!([[0, 3, 3], ["inf", 0, 3], ["inf", "inf", 0]]));
        congest_result_free(r);
        congest_graph_free(g);
    }
}

#[test]
fn bfs_on_generated_instance() {
    unsafe {
        let mut inst = ptr::null_mut();
        assert_eq!(congest_instance_generate(cstr("J:k=2,sigma=1-2").as_ptr(), &mut inst), CongestStatus::Ok);
        let g = congest_instance_graph(inst);
        assert_eq!(congest_graph_vertex_count(g), 9);
        let mut diameter = 0;
        assert_eq!(congest_graph_underlying_diameter(g, &mut diameter), CongestStatus::Ok);
        assert_eq!(diameter, 2);
        let source = congest_instance_source(inst);
        let mut r = ptr::null_mut();
        assert_eq!(congest_run_bfs(g, source, 0, 0, &mut r), CongestStatus::Ok);
        assert!(congest_result_last_active_round(r) >= 4);
        let mut d = 0;
        // v_2^2 sits at the end of the longer path: σ(2) + 2
        assert_eq!(congest_result_distance(r, 7, &mut d), CongestStatus::Ok);
        assert_eq!(d, 4);
        let mut s = ptr::null_mut();
        assert_eq!(congest_instance_to_json(inst, &mut s), CongestStatus::Ok);
        assert!(take_string(s).contains("\"roles\""));
        // reach1 refuses a diameter-2 instance
        let mut r2 = ptr::null_mut();
        assert_eq!(congest_run_reach1(g, 0, &mut r2), CongestStatus::Incompatible);
        assert!(r2.is_null());
        congest_result_free(r);
        congest_instance_free(inst);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(congest_graph_from_json(ptr::null(), &mut g), CongestStatus::NullPointer);
        assert_eq!(congest_graph_from_json(cstr("{\"n\": 2").as_ptr(), &mut g), CongestStatus::ParseError);
        let self_loop = [1usize, 1];
        assert_eq!(congest_graph_from_edges(2, self_loop.as_ptr(), 1, &mut g), CongestStatus::InvalidGraph);
        assert!(!last_error().is_empty());
        let mut inst = ptr::null_mut();
        assert_eq!(congest_instance_generate(cstr("F:k=3,q=x").as_ptr(), &mut inst), CongestStatus::ParseError);
        assert!(last_error().contains("position"));
        assert_eq!(
            congest_instance_generate(cstr("J:k=2,sigma=3-1").as_ptr(), &mut inst),
            CongestStatus::InvalidParameter
        );

        let g = tournament();
        let mut r = ptr::null_mut();
        assert_eq!(congest_run_reach1(g, 1, &mut r), CongestStatus::BudgetExceeded);
        assert_eq!(congest_run_bfs(g, 0, 0, 1, &mut r), CongestStatus::NotHalted);
        assert_eq!(congest_run_bfs(g, 5, 0, 0, &mut r), CongestStatus::OutOfRange);
        assert_eq!(congest_run_reach1(g, 0, &mut r), CongestStatus::Ok);
        assert!(congest_last_error().is_null());
        congest_result_free(r);
        congest_graph_free(g);
        congest_graph_free(ptr::null_mut());
        assert_eq!(congest_graph_vertex_count(ptr::null()), 0);
    }
}

#[test]
fn verify_suite_through_ffi() {
    unsafe {
        let mut passed = false;
        let mut s = ptr::null_mut();
        assert_eq!(congest_verify_suite(cstr("lemma2-exhaustive").as_ptr(), 0, &mut passed, &mut s), CongestStatus::Ok);
        assert!(passed);
        assert!(take_string(s).contains("\"checked\""));
        assert_eq!(
            congest_verify_suite(cstr("nope").as_ptr(), 0, &mut passed, &mut s),
            CongestStatus::InvalidParameter
        );
    }
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(crate_dir().join("include/congest_diam1.h")).unwrap();
    for name in [
        "congest_graph_from_json",
        "congest_run_reach1",
        "congest_run_apsp3",
        "congest_run_bfs",
        "congest_result_free",
        "congest_last_error",
        "typedef struct CongestGraph CongestGraph",
        "CONGEST_INFINITY",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}

/// Compiles `tests/smoke.c` against the header and, when the static library
/// is next to the test binary, links and runs it. Skipped without a C compiler.
#[test]
fn c_smoke_program() {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("no C compiler, skipping");
        return;
    }
    let include = crate_dir().join("include");
    let source = crate_dir().join("tests/smoke.c");
    let syntax = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(&include)
        .arg(&source)
        .output()
        .unwrap();
    assert!(syntax.status.success(), "{}", String::from_utf8_lossy(&syntax.stderr));

    // target/<profile>/deps/ffi-<hash> → target/<profile>/libcongest_diam1_ffi.a
    let exe = std::env::current_exe().unwrap();
    let lib = exe.parent().and_then(|d| d.parent()).map(|d| d.join("libcongest_diam1_ffi.a"));
    let Some(lib) = lib.filter(|l| l.exists()) else {
        eprintln!("static library not built, skipping link");
        return;
    };
    let dir = tempfile::tempdir().unwrap();
    let bin = dir.path().join("smoke");
    let link = Command::new(&cc)
        .args(["-std=c99", "-I"])
        .arg(&include)
        .arg(&source)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .output()
        .unwrap();
    assert!(link.status.success(), "{}", String::from_utf8_lossy(&link.stderr));
    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success(), "{}{}", String::from_utf8_lossy(&run.stdout), String::from_utf8_lossy(&run.stderr));
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok rounds=1 estimate=3");
}
