//! Brute-force reference implementations. Nothing here calls into the
//! decomposition, parse-tree construction, or isomorphism machinery; the
//! point is to have an independent second opinion at small sizes.

mod canon;
mod cwd;

pub use canon::certificate;
pub use cwd::{brute_cwd_le3, brute_labeled_cwd_le3, CwdOracle};

use std::collections::HashSet;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::decomposition::Split;
use crate::graph::{ColoredGraph, Graph, Vertex};

/// A vertex bijection: `map[v]` is the image of `v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub map: Vec<Vertex>,
}

impl Witness {
    /// True iff `map` is a bijection preserving adjacency and non-adjacency.
    pub fn validates(&self, g: &Graph, h: &Graph) -> bool {
        let n = g.n();
        if h.n() != n || self.map.len() != n || g.m() != h.m() {
            return false;
        }
        let mut hit = vec![false; n];
        for &x in &self.map {
            if x >= n || std::mem::replace(&mut hit[x], true) {
                return false;
            }
        }
        g.edges()
            .iter()
            .all(|&(u, v)| h.has_edge(self.map[u], self.map[v]))
    }

    /// As [`Witness::validates`], additionally requiring colors to match.
    pub fn validates_colored(&self, g: &ColoredGraph, h: &ColoredGraph) -> bool {
        self.validates(&g.graph, &h.graph)
            && (0..g.n()).all(|v| g.color(v) == h.color(self.map[v]))
    }
}

/// Backtracking isomorphism search with degree pruning.
pub fn brute_iso(g: &Graph, h: &Graph) -> Option<Witness> {
    brute_iso_colored(&ColoredGraph::uncolored(g.clone()), &ColoredGraph::uncolored(h.clone()))
}

/// Backtracking search for a color-preserving isomorphism.
pub fn brute_iso_colored(g: &ColoredGraph, h: &ColoredGraph) -> Option<Witness> {
    let n = g.n();
    if h.n() != n || g.graph.m() != h.graph.m() {
        return None;
    }
    let key = |x: &ColoredGraph, v: Vertex| (x.color(v), x.graph.degree(v));
    let mut kg: Vec<_> = (0..n).map(|v| key(g, v)).collect();
    let mut kh: Vec<_> = (0..n).map(|v| key(h, v)).collect();
    kg.sort_unstable();
    kh.sort_unstable();
    if kg != kh {
        return None;
    }
    // map vertices in BFS order so every step is constrained by earlier ones
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        order.push(s);
        let mut i = order.len() - 1;
        while i < order.len() {
            let u = order[i];
            for w in g.graph.neighbors(u).ones() {
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                }
            }
            i += 1;
        }
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if extend(g, h, &order, 0, &mut map, &mut used) {
        Some(Witness { map })
    } else {
        None
    }
}

fn extend(
    g: &ColoredGraph,
    h: &ColoredGraph,
    order: &[Vertex],
    depth: usize,
    map: &mut [Vertex],
    used: &mut [bool],
) -> bool {
    let Some(&u) = order.get(depth) else {
        return true;
    };
    for x in 0..h.n() {
        if used[x] || h.color(x) != g.color(u) || h.graph.degree(x) != g.graph.degree(u) {
            continue;
        }
        let consistent = order[..depth]
            .iter()
            .all(|&w| g.graph.has_edge(u, w) == h.graph.has_edge(x, map[w]));
        if !consistent {
            continue;
        }
        map[u] = x;
        used[x] = true;
        if extend(g, h, order, depth + 1, map, used) {
            return true;
        }
        used[x] = false;
        map[u] = usize::MAX;
    }
    false
}

fn is_module_by_definition(g: &Graph, m: &FixedBitSet) -> bool {
    let members: Vec<Vertex> = m.ones().collect();
    let Some(&first) = members.first() else {
        return false;
    };
    (0..g.n())
        .filter(|x| !m.contains(*x))
        .all(|x| members.iter().all(|&v| g.has_edge(v, x) == g.has_edge(first, x)))
}

/// Every module (including the trivial ones), as sorted vertex lists in
/// increasing bitmask order. Exponential; meant for `n <= 12`.
pub fn all_modules(g: &Graph) -> Vec<Vec<Vertex>> {
    let n = g.n();
    assert!(n <= 20, "all_modules is exponential in n");
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let mut m = FixedBitSet::with_capacity(n);
        for v in 0..n {
            if mask & (1 << v) != 0 {
                m.insert(v);
            }
        }
        if is_module_by_definition(g, &m) {
            out.push(m.ones().collect());
        }
    }
    out
}

/// Strong modules: modules overlapping no other module.
pub fn strong_modules(g: &Graph) -> Vec<Vec<Vertex>> {
    let all = all_modules(g);
    let sets: Vec<HashSet<Vertex>> = all.iter().map(|m| m.iter().copied().collect()).collect();
    let overlaps = |a: &HashSet<Vertex>, b: &HashSet<Vertex>| {
        !a.is_disjoint(b) && !a.is_subset(b) && !b.is_subset(a)
    };
    all.iter()
        .zip(&sets)
        .filter(|(_, s)| !sets.iter().any(|t| overlaps(s, t)))
        .map(|(m, _)| m.clone())
        .collect()
}

/// Every proper split, each reported once with vertex 0 on the `a` side.
pub fn all_proper_splits(g: &Graph) -> Vec<Split> {
    let n = g.n();
    assert!(n <= 20, "all_proper_splits is exponential in n");
    let mut out = Vec::new();
    if n < 4 {
        return out;
    }
    for mask in 0u32..(1 << (n - 1)) {
        let a_side: Vec<Vertex> = std::iter::once(0)
            .chain((1..n).filter(|&v| mask & (1 << (v - 1)) != 0))
            .collect();
        if a_side.len() < 2 || n - a_side.len() < 2 {
            continue;
        }
        let mut a = FixedBitSet::with_capacity(n);
        a_side.iter().for_each(|&v| a.insert(v));
        let b_side: Vec<Vertex> = (0..n).filter(|&v| !a.contains(v)).collect();
        let a_front: Vec<Vertex> = a_side
            .iter()
            .copied()
            .filter(|&u| b_side.iter().any(|&v| g.has_edge(u, v)))
            .collect();
        let b_front: Vec<Vertex> = b_side
            .iter()
            .copied()
            .filter(|&v| a_side.iter().any(|&u| g.has_edge(u, v)))
            .collect();
        let biclique = a_front
            .iter()
            .all(|&u| b_front.iter().all(|&v| g.has_edge(u, v)));
        if biclique {
            out.push(Split::from_parts(n, &a_side, &b_side, &a_front, &b_front));
        }
    }
    out
}

/// One representative of every isomorphism class of graphs on `n`
/// vertices, built by adding a vertex to each class on `n - 1` vertices in
/// every possible way and keeping one graph per certificate.
pub fn graphs_up_to_iso(n: usize) -> Vec<Graph> {
    let mut level = vec![Graph::empty(0)];
    for k in 0..n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for g in &level {
            for mask in 0u64..(1 << k) {
                let mut edges: Vec<(Vertex, Vertex)> = g.edges().to_vec();
                edges.extend((0..k).filter(|&u| mask & (1 << u) != 0).map(|u| (u, k)));
                let h = Graph::from_edges(k + 1, edges).unwrap();
                if seen.insert(certificate(&h, &vec![0; k + 1])) {
                    next.push(h);
                }
            }
        }
        level = next;
    }
    level
}

/// As [`graphs_up_to_iso`], keeping only connected graphs.
pub fn connected_graphs_up_to_iso(n: usize) -> Vec<Graph> {
    graphs_up_to_iso(n)
        .into_iter()
        .filter(|g| g.is_connected())
        .collect()
}
