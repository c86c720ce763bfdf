//! Exact "clique-width at most three" test by exhaustive top-down search.
//!
//! A connected labeled graph on two or more vertices is generated by a
//! 3-expression only if its last operation is a join of some complete pair
//! of label classes or a rename that merged a class split in two; both are
//! tried in every possible way. States are memoized by certificate up to
//! permutation of the three labels.

use std::collections::HashMap;

use super::canon::certificate;
use crate::graph::{Graph, Label, LabeledGraph, Vertex};

const PERMS: [[u32; 4]; 6] = [
    [0, 1, 2, 3],
    [0, 1, 3, 2],
    [0, 2, 1, 3],
    [0, 2, 3, 1],
    [0, 3, 1, 2],
    [0, 3, 2, 1],
];

/// Reusable search state; the memo table carries over between queries.
#[derive(Default)]
pub struct CwdOracle {
    memo: HashMap<Vec<u64>, bool>,
}

impl CwdOracle {
    pub fn new() -> Self {
        Self::default()
    }

    /// True iff some expression over labels `1..=3` generates `g` with
    /// exactly its labels. Labels must lie in `1..=3`.
    pub fn labeled(&mut self, g: &LabeledGraph) -> bool {
        assert!(
            g.labels().iter().all(|&l| (1..=3).contains(&l)),
            "the oracle works over labels 1..=3"
        );
        self.solve(&g.graph, g.labels())
    }

    /// True iff `g` has clique-width at most three.
    pub fn unlabeled(&mut self, g: &Graph) -> bool {
        self.solve(g, &vec![1; g.n()])
    }

    fn key(g: &Graph, labels: &[Label]) -> Vec<u64> {
        PERMS
            .iter()
            .map(|p| {
                let colors: Vec<u32> = labels.iter().map(|&l| p[l as usize]).collect();
                certificate(g, &colors)
            })
            .min()
            .unwrap()
    }

    fn solve(&mut self, g: &Graph, labels: &[Label]) -> bool {
        let n = g.n();
        if n <= 1 {
            return true;
        }
        let comps = g.connected_components();
        if comps.len() > 1 {
            return comps.iter().all(|c| {
                let sub = g.induced_subgraph(c);
                let sub_labels: Vec<Label> = c.iter().map(|&v| labels[v]).collect();
                self.solve(&sub, &sub_labels)
            });
        }
        let key = Self::key(g, labels);
        if let Some(&known) = self.memo.get(&key) {
            return known;
        }
        let answer = self.connected(g, labels);
        self.memo.insert(key, answer);
        answer
    }

    fn connected(&mut self, g: &Graph, labels: &[Label]) -> bool {
        let n = g.n();
        let class = |l: Label| -> Vec<Vertex> { (0..n).filter(|&v| labels[v] == l).collect() };
        let used: Vec<Label> = (1..=3).filter(|&l| labels.contains(&l)).collect();

        // last operation is a join of a complete pair
        for (i, &a) in used.iter().enumerate() {
            for &b in &used[i + 1..] {
                let (va, vb) = (class(a), class(b));
                if va.iter().all(|&u| vb.iter().all(|&v| g.has_edge(u, v))) {
                    let rest = g
                        .edges()
                        .iter()
                        .copied()
                        .filter(|&(u, v)| {
                            let (x, y) = (labels[u], labels[v]);
                            !((x == a && y == b) || (x == b && y == a))
                        });
                    let below = Graph::from_edges(n, rest).unwrap();
                    if self.solve(&below, labels) {
                        return true;
                    }
                }
            }
        }

        // last operation is a rename merging a class split in two
        if used.len() <= 2 {
            let fresh = (1..=3).find(|l| !used.contains(l)).unwrap();
            for &a in &used {
                let va = class(a);
                let k = va.len();
                if !(2..24).contains(&k) {
                    continue;
                }
                for mask in 1u32..(1 << k) - 1 {
                    let mut split = labels.to_vec();
                    for (i, &v) in va.iter().enumerate() {
                        if mask & (1 << i) != 0 {
                            split[v] = fresh;
                        }
                    }
                    if self.solve(g, &split) {
                        return true;
                    }
                }
            }
        }
        false
    }
}

/// True iff `g` has clique-width at most three. Exponential; meant for
/// `n <= 8`.
pub fn brute_cwd_le3(g: &Graph) -> bool {
    CwdOracle::new().unlabeled(g)
}

/// True iff some 3-expression generates `g` with exactly its labels.
pub fn brute_labeled_cwd_le3(g: &LabeledGraph) -> bool {
    CwdOracle::new().labeled(g)
}
