mod common;

use std::path::{Path, PathBuf};
use std::process::Command;

use cw3iso::graph::Graph;
use cw3iso::io::{parse_edge_list, parse_graph6, read_graph, to_graph6, write_edge_list, Format};
use cw3iso::kexpr::{parse_text, random_expression, KExpr};
use proptest::prelude::*;

const C5: &str = "join(1,3; u(ren(3,2; join(2,3; u(join(1,2; u(a:1,b:2)), join(1,3; u(c:3,d:1))))), e:3))";

fn cw3iso(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cw3iso")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn file(dir: &Path, name: &str, text: &str) -> String {
    let p: PathBuf = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn graph6_reference_vector() {
    let g = parse_graph6("DQc").unwrap();
    let expected = Graph::from_edges(5, [(0, 2), (0, 4), (1, 3), (3, 4)]).unwrap();
    assert_eq!(g, expected);
    assert_eq!(to_graph6(&g), "DQc");
    assert_eq!(parse_graph6(">>graph6<<DQc\n").unwrap(), expected);
}

#[test]
fn graph6_rejects_bad_input() {
    assert!(parse_graph6("").is_err());
    assert!(parse_graph6("DQ").is_err());
    assert!(parse_graph6("DQd").is_err(), "padding bits must be zero");
    assert_eq!(parse_graph6("D Qc").unwrap_err().column, 2);
}

#[test]
fn edge_list_errors_carry_positions() {
    let e = parse_edge_list("3 1\n0 x\n").unwrap_err();
    assert_eq!((e.line, e.column), (2, 3));
    let e = parse_edge_list("3 1\n0 3\n").unwrap_err();
    assert!(e.message.contains("out of range"));
    assert!(parse_edge_list("3 1\n1 1\n").unwrap_err().message.contains("self-loop"));
    assert!(parse_edge_list("3 2\n0 1\n1 0\n").unwrap_err().message.contains("duplicate"));
    assert!(parse_edge_list("3 2\n0 1\n").unwrap_err().message.contains("declares 2"));
    assert_eq!(parse_edge_list("").unwrap_err().line, 1);
}

#[test]
fn edge_list_comments_and_colors() {
    let g = read_graph("# triangle\n3 2\n\n0 1\nc 2 7\n1 2\n", Format::EdgeList).unwrap();
    assert_eq!(g.graph, Graph::path(3));
    assert_eq!(g.colors, Some(vec![0, 0, 7]));
    assert_eq!(parse_edge_list(&write_edge_list(&g.graph, g.colors.as_deref())).unwrap(), g);
}

fn any_graph() -> impl Strategy<Value = Graph> {
    (0usize..70).prop_flat_map(|n| {
        let pairs = n * n.saturating_sub(1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let all = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            Graph::from_edges(n, all.zip(bits).filter(|(_, b)| *b).map(|(e, _)| e)).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn graph6_roundtrip(g in any_graph()) {
        prop_assert_eq!(parse_graph6(&to_graph6(&g)).unwrap(), g);
    }

    #[test]
    fn edge_list_roundtrip(g in any_graph()) {
        prop_assert_eq!(parse_edge_list(&write_edge_list(&g, None)).unwrap().graph, g);
    }

    #[test]
    fn expression_text_roundtrip(n in 1usize..30, k in 1u8..=4, seed in any::<u64>()) {
        let e = KExpr::with_default_names(random_expression(n, k, seed));
        let back = parse_text(&e.to_text()).unwrap();
        prop_assert_eq!(back.tree.eval().unwrap().graph.m(), e.tree.eval().unwrap().graph.m());
        prop_assert_eq!(back.to_text(), e.canonical_ids().to_text());
    }

    #[test]
    fn random_expressions_are_deterministic(n in 1usize..30, k in 1u8..=4, seed in any::<u64>()) {
        prop_assert_eq!(random_expression(n, k, seed), random_expression(n, k, seed));
    }
}

#[test]
fn iso_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let c5 = file(dir.path(), "c5", "5 5\n0 1\n1 2\n2 3\n3 4\n4 0\n");
    let c5b = file(dir.path(), "c5b", "5 5\n0 2\n2 4\n4 1\n1 3\n3 0\n");
    let p5 = file(dir.path(), "p5", "5 4\n0 1\n1 2\n2 3\n3 4\n");
    let prism = file(dir.path(), "prism", &write_edge_list(&common::prism(), None));
    let bad = file(dir.path(), "bad", "5 1\n0 1\n0 z\n");
    let (code, out, _) = cw3iso(&["iso", &c5, &c5b, "--witness"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next(), Some("ISOMORPHIC"));
    assert_eq!(out.lines().count(), 6);
    assert_eq!(cw3iso(&["iso", &c5, &p5]).0, 1);
    assert_eq!(cw3iso(&["iso", &prism, &prism]).0, 2);
    let (code, _, err) = cw3iso(&["iso", &c5, &bad]);
    assert_eq!(code, 65);
    assert!(err.contains(":3:3:"), "{err}");
    assert_eq!(cw3iso(&["iso", &c5, "/nonexistent/graph"]).0, 66);
    assert_eq!(cw3iso(&["frobnicate"]).0, 64);
    let (code, out, _) = cw3iso(&["--format", "graph6", "--json", "iso", &file(dir.path(), "g6", "DQc"), &file(dir.path(), "h6", "DQc")]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], "isomorphic");
}

#[test]
fn eval_prints_the_c5_labels() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = cw3iso(&["eval", &file(dir.path(), "c5.k", C5)]);
    assert_eq!(code, 0);
    let g = parse_edge_list(&out).unwrap().graph;
    assert_eq!(g, Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap());
    for line in ["# 0 a:1", "# 1 b:2", "# 2 c:2", "# 3 d:1", "# 4 e:3"] {
        assert!(out.contains(line), "{out}");
    }
}

/// `decompose` then `eval` gives back the input once eval's vertex ids are
/// mapped through the printed names.
#[test]
fn decompose_then_eval_roundtrips() {
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..8 {
        let g = common::expression_graph(6 + seed as usize * 3, seed);
        let (code, expr, _) = cw3iso(&["decompose", &file(dir.path(), "g", &write_edge_list(&g, None))]);
        assert_eq!(code, 0);
        let (code, out, _) = cw3iso(&["eval", &file(dir.path(), "g.k", &expr)]);
        assert_eq!(code, 0);
        let evaluated = parse_edge_list(&out).unwrap().graph;
        let mut back = vec![0; g.n()];
        for line in out.lines().filter_map(|l| l.strip_prefix("# ")) {
            let (id, rest) = line.split_once(' ').unwrap();
            let name = rest.split(':').next().unwrap();
            back[id.parse::<usize>().unwrap()] = name.strip_prefix('v').unwrap().parse().unwrap();
        }
        assert_eq!(evaluated.permuted(&back), g, "seed {seed}");
    }
}

#[test]
fn mdtree_and_other_views() {
    let dir = tempfile::tempdir().unwrap();
    let k3 = file(dir.path(), "k3", "3 3\n0 1\n1 2\n0 2\n");
    let (code, out, _) = cw3iso(&["mdtree", &k3]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let kinds: Vec<&str> = v["nodes"].as_array().unwrap().iter().map(|n| n["kind"].as_str().unwrap()).collect();
    assert_eq!(kinds.iter().filter(|k| **k == "series").count(), 1);
    assert_eq!(kinds.iter().filter(|k| **k == "leaf").count(), 3);
    let (code, dot, _) = cw3iso(&["mdtree", "--dot", &k3]);
    assert_eq!(code, 0);
    assert!(dot.starts_with("graph mdtree {") && dot.contains("series"));
    let c5 = file(dir.path(), "c5", "5 5\n0 1\n1 2\n2 3\n3 4\n4 0\n");
    let (code, out, _) = cw3iso(&["labg", &c5]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 5);
    assert_eq!(cw3iso(&["skeleton", &c5]).0, 0);
    let (code, out, _) = cw3iso(&["gen-expr", "7", "3", "--seed", "9"]);
    assert_eq!(code, 0);
    assert_eq!(parse_text(out.trim()).unwrap().tree.size(), 7);
    assert_eq!(cw3iso(&["gen-expr", "7", "9"]).0, 64);
}
