#![allow(dead_code)]

use std::collections::BTreeSet;

use cw3iso::decomposition::{find_proper_split, modular_decomposition, skeleton, MdKind};
use cw3iso::graph::{Graph, Label};
use cw3iso::kexpr::ParseTree;
use cw3iso::oracle::{all_proper_splits, strong_modules, Witness};
use cw3iso::struct_iso::StructIso;
use cw3iso::kexpr::random_expression;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_perm(n: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// Graph of a random 3-expression.
pub fn expression_graph(n: usize, seed: u64) -> Graph {
    random_expression(n, 3, seed).eval().unwrap().graph
}

pub fn with_edge_toggled(g: &Graph, u: usize, v: usize) -> Graph {
    let edges = g.edges().iter().copied().filter(|&e| e != (u.min(v), u.max(v)));
    let mut edges: Vec<_> = edges.collect();
    if !g.has_edge(u, v) {
        edges.push((u, v));
    }
    Graph::from_edges(g.n(), edges).unwrap()
}

/// Triangular prism, the smallest graph here of clique-width four.
pub fn prism() -> Graph {
    Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)]).unwrap()
}

pub fn md_matches_strong_modules(g: &Graph) {
    let t = modular_decomposition(g);
    let from_tree: BTreeSet<Vec<usize>> = t.nodes.iter().map(|n| n.vertices.clone()).collect();
    let from_oracle: BTreeSet<Vec<usize>> = strong_modules(g).into_iter().collect();
    assert_eq!(from_tree, from_oracle, "strong modules differ for {g:?}");
    for node in &t.nodes {
        let Some(q) = &node.quotient else { continue };
        let k = q.n();
        match node.kind {
            MdKind::Series => assert_eq!(q.m(), k * (k - 1) / 2),
            MdKind::Parallel => assert_eq!(q.m(), 0),
            MdKind::Prime => assert!(k >= 4 && q.is_prime()),
            MdKind::Leaf(_) => unreachable!(),
        }
    }
}

pub fn skeleton_matches_splits(g: &Graph) {
    let expected: BTreeSet<Vec<usize>> =
        all_proper_splits(g).iter().map(|s| s.normalized().a_side()).collect();
    let sk = skeleton(g).unwrap();
    assert_eq!(sk.contract(), *g, "contraction differs for {g:?}");
    let derived: Vec<_> = sk.all_splits(g);
    for s in &derived {
        assert!(s.is_valid_for(g) && s.is_proper());
    }
    for s in sk.special_splits(g) {
        assert!(s.is_valid_for(g) && s.is_proper());
    }
    let got: BTreeSet<Vec<usize>> = derived.iter().map(|s| s.a_side()).collect();
    assert_eq!(got, expected, "splits differ for {g:?}");
    let found = find_proper_split(g).unwrap();
    assert_eq!(found.is_some(), !expected.is_empty());
}

/// `t` with vertex `v` renamed to `perm[v]` and every label passed through
/// `sigma` (indexed by label, entry 0 unused).
pub fn rename(t: &ParseTree, perm: &[usize], sigma: &[Label; 5]) -> ParseTree {
    let s = |l: Label| sigma[l as usize];
    match t {
        ParseTree::Leaf { vertex, label } => ParseTree::leaf(perm[*vertex], s(*label)),
        ParseTree::Union(cs) => ParseTree::union(cs.iter().map(|c| rename(c, perm, sigma)).collect()),
        ParseTree::Join { a, b, child } => ParseTree::join(s(*a), s(*b), rename(child, perm, sigma)),
        ParseTree::Rename { from, to, child } => ParseTree::rename(s(*from), s(*to), rename(child, perm, sigma)),
    }
}

pub fn sigma_from(p: &[Label]) -> [Label; 5] {
    let mut s = [0; 5];
    for (i, &x) in p.iter().enumerate() {
        s[i + 1] = x;
    }
    s
}

/// `iso` maps `eval(a)` onto `eval(b)` and carries labels by `label_map`.
pub fn sound(a: &ParseTree, b: &ParseTree, iso: &StructIso) -> bool {
    let (ga, gb) = (a.eval().unwrap(), b.eval().unwrap());
    Witness { map: iso.witness.clone() }.validates(&ga.graph, &gb.graph)
        && (0..ga.n()).all(|v| iso.label_map.get(ga.label(v)) == Some(gb.label(iso.witness[v])))
}

pub fn compose(f: &[usize], g: &[usize]) -> Vec<usize> {
    f.iter().map(|&x| g[x]).collect()
}
