use std::ffi::{CStr, CString};
use std::ptr;

use cw3iso::graph::Graph;
use cw3iso::kexpr::parse_text;
use cw3iso_ffi::*;

fn cycle(n: usize, order: &[usize]) -> *mut Cw3Graph {
    let g = cw3_graph_new(n);
    for i in 0..n {
        assert_eq!(unsafe { cw3_graph_add_edge(g, order[i], order[(i + 1) % n]) }, Cw3Status::Ok);
    }
    g
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(cw3_last_error()) }.to_str().unwrap().to_string()
}

#[test]
fn rotated_cycles_are_isomorphic_with_a_valid_witness() {
    let g = cycle(5, &[0, 1, 2, 3, 4]);
    let h = cycle(5, &[2, 4, 1, 3, 0]);
    let mut verdict = Cw3Verdict::NonIsomorphic;
    let mut w = vec![usize::MAX; 5];
    let st = unsafe { cw3_iso(g, h, &mut verdict, w.as_mut_ptr()) };
    assert_eq!(st, Cw3Status::Ok);
    assert_eq!(verdict, Cw3Verdict::Isomorphic);
    let hg = Graph::from_edges(5, [(2, 4), (4, 1), (1, 3), (3, 0), (0, 2)]).unwrap();
    for i in 0..5 {
        assert!(hg.has_edge(w[i], w[(i + 1) % 5]));
    }
    unsafe {
        cw3_graph_free(g);
        cw3_graph_free(h);
    }
}

#[test]
fn cycle_and_path_differ() {
    let g = cycle(5, &[0, 1, 2, 3, 4]);
    let h = cw3_graph_new(5);
    for i in 0..4 {
        unsafe { cw3_graph_add_edge(h, i, i + 1) };
    }
    let mut verdict = Cw3Verdict::Isomorphic;
    assert_eq!(unsafe { cw3_iso(g, h, &mut verdict, ptr::null_mut()) }, Cw3Status::Ok);
    assert_eq!(verdict, Cw3Verdict::NonIsomorphic);
    unsafe {
        cw3_graph_free(g);
        cw3_graph_free(h);
    }
}

#[test]
fn colors_are_respected() {
    let g = cycle(4, &[0, 1, 2, 3]);
    let h = cycle(4, &[0, 1, 2, 3]);
    unsafe {
        cw3_graph_set_color(g, 0, 7);
        cw3_graph_set_color(h, 1, 7);
    }
    let mut verdict = Cw3Verdict::NonIsomorphic;
    let mut w = [0usize; 4];
    unsafe { cw3_iso(g, h, &mut verdict, w.as_mut_ptr()) };
    assert_eq!(verdict, Cw3Verdict::Isomorphic);
    assert_eq!(w[0], 1);
    unsafe { cw3_graph_set_color(h, 3, 7) };
    unsafe { cw3_iso(g, h, &mut verdict, ptr::null_mut()) };
    assert_eq!(verdict, Cw3Verdict::NonIsomorphic);
    unsafe {
        cw3_graph_free(g);
        cw3_graph_free(h);
    }
}

#[test]
fn bad_edges_report_status_and_message() {
    let g = cw3_graph_new(3);
    assert_eq!(unsafe { cw3_graph_add_edge(g, 0, 3) }, Cw3Status::VertexOutOfRange);
    assert!(last_error().contains("outside"));
    assert_eq!(unsafe { cw3_graph_add_edge(g, 1, 1) }, Cw3Status::SelfLoop);
    assert_eq!(unsafe { cw3_graph_add_edge(g, 0, 1) }, Cw3Status::Ok);
    assert_eq!(unsafe { cw3_graph_add_edge(g, 1, 0) }, Cw3Status::DuplicateEdge);
    assert_eq!(unsafe { cw3_graph_set_color(g, 5, 1) }, Cw3Status::VertexOutOfRange);
    assert_eq!(unsafe { cw3_graph_vertex_count(g) }, 3);
    unsafe { cw3_graph_free(g) };
}

#[test]
fn null_arguments_are_rejected() {
    let mut verdict = Cw3Verdict::Isomorphic;
    assert_eq!(unsafe { cw3_iso(ptr::null(), ptr::null(), &mut verdict, ptr::null_mut()) }, Cw3Status::NullPointer);
    assert_eq!(unsafe { cw3_graph_add_edge(ptr::null_mut(), 0, 1) }, Cw3Status::NullPointer);
    assert_eq!(unsafe { cw3_graph_vertex_count(ptr::null()) }, 0);
    unsafe { cw3_graph_free(ptr::null_mut()) };
    unsafe { cw3_string_free(ptr::null_mut()) };
}

#[test]
fn parse_and_decompose_round_trip() {
    let text = CString::new("5 5\n0 1\n1 2\n2 3\n3 4\n4 0\n").unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { cw3_graph_parse(text.as_ptr(), Cw3Format::EdgeList, &mut g) }, Cw3Status::Ok);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { cw3_decompose(g, &mut out) }, Cw3Status::Ok);
    assert!(!out.is_null());
    let expr = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_string();
    let k = parse_text(&expr).unwrap();
    let a = k.tree.eval().unwrap();
    let id = |name: &str| k.names.iter().position(|x| x == name).unwrap();
    for i in 0..5 {
        assert!(a.graph.has_edge(id(&format!("v{i}")), id(&format!("v{}", (i + 1) % 5))));
    }
    assert_eq!(a.graph.m(), 5);
    unsafe {
        cw3_string_free(out);
        cw3_graph_free(g);
    }
}

#[test]
fn parse_errors_carry_positions() {
    let text = CString::new("3 1\n0 x\n").unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { cw3_graph_parse(text.as_ptr(), Cw3Format::EdgeList, &mut g) }, Cw3Status::ParseError);
    assert!(last_error().starts_with("2:3:"), "{}", last_error());
    let g6 = CString::new("DQc").unwrap();
    assert_eq!(unsafe { cw3_graph_parse(g6.as_ptr(), Cw3Format::Graph6, &mut g) }, Cw3Status::Ok);
    assert_eq!(unsafe { cw3_graph_vertex_count(g) }, 5);
    unsafe { cw3_graph_free(g) };
}

#[test]
fn prism_decomposition_reports_excess_width() {
    let edges = [(0, 2), (0, 3), (0, 4), (1, 3), (1, 4), (1, 5), (2, 4), (2, 5), (3, 5)];
    let g = cw3_graph_new(6);
    for (u, v) in edges {
        unsafe { cw3_graph_add_edge(g, u, v) };
    }
    let mut out = std::ptr::dangling_mut();
    assert_eq!(unsafe { cw3_decompose(g, &mut out) }, Cw3Status::Ok);
    assert!(out.is_null());
    unsafe { cw3_graph_free(g) };
}

#[test]
fn header_declares_every_entry_point() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/cw3iso.h")).unwrap();
    for f in [
        "cw3_last_error",
        "cw3_graph_new",
        "cw3_graph_free",
        "cw3_graph_add_edge",
        "cw3_graph_set_color",
        "cw3_graph_vertex_count",
        "cw3_graph_parse",
        "cw3_iso",
        "cw3_decompose",
        "cw3_string_free",
    ] {
        assert!(header.contains(&format!("{f}(")), "{f} missing from header");
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(out) = std::process::Command::new("cc")
        .args(["-fsyntax-only", "-xc", "-include", concat!(env!("CARGO_MANIFEST_DIR"), "/include/cw3iso.h"), "/dev/null"])
        .output()
    else {
        eprintln!("no C compiler; skipping");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
