//! Structural isomorphism of parse trees: level-wise matching of immediate
//! significant descendants through isomorphisms of their colored quotient
//! graphs.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::graph::{Label, Vertex, MAX_LABEL};
use crate::invariant::{mix, multiset};
use crate::kexpr::{quotient_graph, ParseTree, QuotientGraph};

const LEAF_TAG: u64 = 0x6c65_6166;

/// A bijection between two label sets. `map[l]` is the image of `l`, or 0
/// when `l` is outside the domain.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct LabelBijection {
    map: [Label; MAX_LABEL as usize + 1],
}

impl LabelBijection {
    /// Pairs `from[i]` with `to[i]`. `None` unless both are duplicate-free
    /// and of equal length.
    pub fn from_pairs(from: &[Label], to: &[Label]) -> Option<Self> {
        if from.len() != to.len() {
            return None;
        }
        let mut map = [0; MAX_LABEL as usize + 1];
        let mut hit = [false; MAX_LABEL as usize + 1];
        for (&a, &b) in from.iter().zip(to) {
            if map[a as usize] != 0 || std::mem::replace(&mut hit[b as usize], true) {
                return None;
            }
            map[a as usize] = b;
        }
        Some(LabelBijection { map })
    }

    pub fn identity(labels: &[Label]) -> Self {
        Self::from_pairs(labels, labels).expect("distinct labels")
    }

    pub fn get(&self, l: Label) -> Option<Label> {
        match self.map.get(l as usize) {
            Some(&x) if x != 0 => Some(x),
            _ => None,
        }
    }

    pub fn domain(&self) -> Vec<Label> {
        (1..=MAX_LABEL).filter(|&l| self.map[l as usize] != 0).collect()
    }

    pub fn inverse(&self) -> Self {
        let mut map = [0; MAX_LABEL as usize + 1];
        for l in self.domain() {
            map[self.map[l as usize] as usize] = l;
        }
        LabelBijection { map }
    }

    /// `other ∘ self`, defined where `self` lands in the domain of `other`.
    pub fn then(&self, other: &LabelBijection) -> Self {
        let mut map = [0; MAX_LABEL as usize + 1];
        for l in self.domain() {
            map[l as usize] = other.get(self.map[l as usize]).unwrap_or(0);
        }
        LabelBijection { map }
    }

    fn code(&self) -> u32 {
        self.map[1..].iter().fold(0, |acc, &x| acc * 8 + x as u32)
    }
}

impl fmt::Debug for LabelBijection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self.domain().iter().map(|&l| format!("{l}->{}", self.map[l as usize])).collect();
        write!(f, "{{{}}}", pairs.join(", "))
    }
}

/// Every bijection from `from` onto `to` (both duplicate-free).
pub fn label_bijections(from: &[Label], to: &[Label]) -> Vec<LabelBijection> {
    if from.len() != to.len() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut perm: Vec<Label> = to.to_vec();
    permutations(&mut perm, 0, &mut |p| {
        if let Some(b) = LabelBijection::from_pairs(from, p) {
            out.push(b);
        }
    });
    out
}

fn permutations(items: &mut Vec<Label>, k: usize, f: &mut impl FnMut(&[Label])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, f);
        items.swap(k, i);
    }
}

/// `ISO(Q_g, Q_h)`: bijections of quotient vertices (labels) preserving
/// adjacency and color classes.
pub fn quotient_isos(qg: &QuotientGraph, qh: &QuotientGraph) -> Vec<LabelBijection> {
    label_bijections(&qg.vertices, &qh.vertices)
        .into_iter()
        .filter(|b| {
            let idx = |q: &QuotientGraph, l: Label| q.index_of(l).expect("vertex of q");
            (0..qg.len()).all(|i| {
                let hi = idx(qh, b.get(qg.vertices[i]).unwrap());
                (0..qg.len()).all(|j| {
                    let hj = idx(qh, b.get(qg.vertices[j]).unwrap());
                    qg.has_edge(i, j) == qh.has_edge(hi, hj)
                        && (qg.colors[i] == qg.colors[j]) == (qh.colors[hi] == qh.colors[hj])
                })
            })
        })
        .collect()
}

/// Result of a successful comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructIso {
    /// Map on the final labels of the first tree.
    pub label_map: LabelBijection,
    /// `witness[v]` is the image of vertex `v`.
    pub witness: Vec<Vertex>,
}

enum Node {
    Leaf {
        vertex: Vertex,
        label: Label,
        color: u32,
    },
    Union {
        labels: Vec<Label>,
        descs: Vec<(usize, QuotientGraph)>,
        size: usize,
    },
}

struct Flat {
    nodes: Vec<Node>,
    hash: Vec<u64>,
    root: usize,
    n: usize,
}

impl Flat {
    /// The root is a union over the tree's significant top, so every tree
    /// is compared from a union node.
    fn new(t: &ParseTree, colors: Option<&[u32]>) -> Flat {
        let t = &t.normalized();
        let mut f = Flat {
            nodes: Vec::new(),
            hash: Vec::new(),
            root: 0,
            n: 0,
        };
        let top = t.significant_top();
        let child = f.add(top.node, colors);
        let labels = t.root_labels();
        let q = quotient_graph(&top.node.root_labels(), &top.path);
        let size = f.size(child);
        f.root = f.push_union(labels, vec![(child, q)], size);
        f.n = size;
        f
    }

    fn size(&self, i: usize) -> usize {
        match &self.nodes[i] {
            Node::Leaf { .. } => 1,
            Node::Union { size, .. } => *size,
        }
    }

    fn add(&mut self, t: &ParseTree, colors: Option<&[u32]>) -> usize {
        match t {
            ParseTree::Leaf { vertex, label } => {
                let color = colors.map_or(0, |c| c[*vertex]);
                self.nodes.push(Node::Leaf {
                    vertex: *vertex,
                    label: *label,
                    color,
                });
                self.hash.push(mix(LEAF_TAG, color as u64));
                self.nodes.len() - 1
            }
            ParseTree::Union(_) => {
                let descs: Vec<(usize, QuotientGraph)> = t
                    .immediate_significant_descendants()
                    .expect("union")
                    .into_iter()
                    .map(|d| {
                        let child = self.add(d.node, colors);
                        (child, quotient_graph(&d.node.root_labels(), &d.path))
                    })
                    .collect();
                let size = descs.iter().map(|d| self.size(d.0)).sum();
                self.push_union(t.root_labels(), descs, size)
            }
            _ => unreachable!("significant descendants are leaves or unions"),
        }
    }

    fn push_union(&mut self, labels: Vec<Label>, descs: Vec<(usize, QuotientGraph)>, size: usize) -> usize {
        let h = mix(
            size as u64,
            multiset(descs.iter().map(|(c, q)| mix(self.hash[*c], quotient_invariant(q)))),
        );
        self.nodes.push(Node::Union { labels, descs, size });
        self.hash.push(h);
        self.nodes.len() - 1
    }
}

/// Label-name-free summary of a quotient graph.
fn quotient_invariant(q: &QuotientGraph) -> u64 {
    let degs = multiset((0..q.len()).map(|i| {
        let same = (0..q.len()).filter(|&j| q.colors[j] == q.colors[i]).count();
        mix(q.adj[i].count_ones() as u64, same as u64)
    }));
    mix(q.len() as u64, degs)
}

type Matching = Vec<(usize, LabelBijection)>;

struct Matcher<'a> {
    g: &'a Flat,
    h: &'a Flat,
    memo: HashMap<(usize, usize, u32), Option<Matching>>,
}

impl Matcher<'_> {
    /// Whether `T_g ≅^π T_h`, recording the descendant matching.
    fn check(&mut self, g: usize, h: usize, pi: LabelBijection) -> bool {
        if self.g.hash[g] != self.h.hash[h] {
            return false;
        }
        let key = (g, h, pi.code());
        if let Some(m) = self.memo.get(&key) {
            return m.is_some();
        }
        let result = self.compute(g, h, pi);
        let ok = result.is_some();
        self.memo.insert(key, result);
        ok
    }

    fn compute(&mut self, g: usize, h: usize, pi: LabelBijection) -> Option<Matching> {
        match (&self.g.nodes[g], &self.h.nodes[h]) {
            (
                Node::Leaf { label: lg, color: cg, .. },
                Node::Leaf { label: lh, color: ch, .. },
            ) => (cg == ch && pi.get(*lg) == Some(*lh)).then(Vec::new),
            (
                Node::Union { descs: dg, size: sg, .. },
                Node::Union { descs: dh, size: sh, .. },
            ) => {
                if dg.len() != dh.len() || sg != sh {
                    return None;
                }
                let mut used = vec![false; dh.len()];
                let mut matching = Vec::with_capacity(dg.len());
                for (cg, qg) in dg {
                    let found = (0..dh.len()).filter(|&j| !used[j]).find_map(|j| {
                        let (ch, qh) = &dh[j];
                        quotient_isos(qg, qh)
                            .into_iter()
                            .filter(|pi_i| colors_agree(qg, qh, pi_i, &pi))
                            .find(|pi_i| self.check(*cg, *ch, *pi_i))
                            .map(|pi_i| (j, pi_i))
                    })?;
                    used[found.0] = true;
                    matching.push(found);
                }
                Some(matching)
            }
            _ => None,
        }
    }

    fn witness(&self, g: usize, h: usize, pi: LabelBijection, out: &mut [Vertex]) {
        match (&self.g.nodes[g], &self.h.nodes[h]) {
            (Node::Leaf { vertex: vg, .. }, Node::Leaf { vertex: vh, .. }) => out[*vg] = *vh,
            (Node::Union { descs: dg, .. }, Node::Union { descs: dh, .. }) => {
                let m = self.memo[&(g, h, pi.code())].as_ref().expect("matched pair");
                for (i, &(j, pi_i)) in m.iter().enumerate() {
                    self.witness(dg[i].0, dh[j].0, pi_i, out);
                }
            }
            _ => unreachable!("matched pairs have the same shape"),
        }
    }
}

/// `π_i/color = π` on the colors of `qg`.
fn colors_agree(qg: &QuotientGraph, qh: &QuotientGraph, pi_i: &LabelBijection, pi: &LabelBijection) -> bool {
    (0..qg.len()).all(|i| {
        let image = qh.index_of(pi_i.get(qg.vertices[i]).unwrap()).unwrap();
        pi.get(qg.colors[i]) == Some(qh.colors[image])
    })
}

/// Some `π` with `tg ≅^π th`, with the vertex map it induces. Nested
/// unions are flattened first, so trees are compared up to associativity
/// of union.
pub fn structurally_isomorphic(tg: &ParseTree, th: &ParseTree) -> Option<StructIso> {
    compare(Flat::new(tg, None), Flat::new(th, None))
}

/// As [`structurally_isomorphic`], matching leaves only to leaves of the
/// same vertex color.
pub fn structurally_isomorphic_colored(
    tg: &ParseTree,
    colors_g: &[u32],
    th: &ParseTree,
    colors_h: &[u32],
) -> Option<StructIso> {
    compare(Flat::new(tg, Some(colors_g)), Flat::new(th, Some(colors_h)))
}

fn compare(g: Flat, h: Flat) -> Option<StructIso> {
    if g.n != h.n {
        return None;
    }
    let (Node::Union { labels: lg, .. }, Node::Union { labels: lh, .. }) = (&g.nodes[g.root], &h.nodes[h.root]) else {
        unreachable!("roots are unions")
    };
    let mut m = Matcher {
        g: &g,
        h: &h,
        memo: HashMap::new(),
    };
    for pi in label_bijections(lg, lh) {
        if m.check(g.root, h.root, pi) {
            let mut witness = vec![usize::MAX; g.n];
            m.witness(g.root, h.root, pi, &mut witness);
            return Some(StructIso { label_map: pi, witness });
        }
    }
    None
}
