use std::collections::HashMap;
use std::rc::Rc;

use log::trace;
use serde::Serialize;

use super::cases::{
    decompose_leaf_bi, decompose_leaf_ti, fresh_labels, membership_d, membership_u, pc1, pc2, pc3,
    Case, Step,
};
use super::labg::{build_labg, pair_labelings, CandidateLabeling};
use crate::decomposition::{modular_decomposition, MdKind, MdTree};
use crate::graph::{full_set, Label, LabeledGraph, Vertex};
use crate::invariant::{mix, mix_all, multiset, refine};
use crate::kexpr::{ParseTree, PathOp};

const MODULE_TAG: u64 = 0x6d6f_6475_6c65;

/// Counters collected over one or more decompositions.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub pieces: usize,
    pub steps_tried: usize,
    pub contractions: usize,
    /// Chosen steps whose invariant key was shared by another step.
    pub ties: usize,
    /// Bilabeled pieces outside PC1-PC3 that were decomposed.
    pub dispatches: usize,
    /// Of those, pieces belonging to more than one of `U_1, U_2, D̄_1, D̄_2`.
    pub overlaps: usize,
}

type PieceKey = (Vec<(Vertex, Label, u64)>, Vec<(Vertex, Vertex)>);

/// A labeled graph being decomposed. Vertex `i` stands for input vertex
/// `ids[i]`, or for a contracted module whose tree is `sub[i]`.
#[derive(Clone)]
struct Piece {
    ids: Vec<Vertex>,
    a: LabeledGraph,
    weight: Vec<u64>,
    sub: Vec<Option<Rc<(ParseTree, Label)>>>,
}

impl Piece {
    fn n(&self) -> usize {
        self.ids.len()
    }

    fn restrict(&self, keep: &[Vertex], labels: &[Label]) -> Piece {
        let graph = self.a.graph.induced_subgraph(keep);
        Piece {
            ids: keep.iter().map(|&v| self.ids[v]).collect(),
            a: LabeledGraph::new(graph, keep.iter().map(|&v| labels[v]).collect())
                .expect("labels are in range"),
            weight: keep.iter().map(|&v| self.weight[v]).collect(),
            sub: keep.iter().map(|&v| self.sub[v].clone()).collect(),
        }
    }

    /// Pieces reached along different paths may share vertices and labels
    /// but not edges, so edges are part of the key.
    fn key(&self) -> PieceKey {
        let vertices = (0..self.n())
            .map(|v| (self.ids[v], self.a.label(v), self.weight[v]))
            .collect();
        let edges = self.a.graph.edges().iter().map(|&(u, v)| (self.ids[u], self.ids[v])).collect();
        (vertices, edges)
    }

    fn initial(&self) -> Vec<u64> {
        (0..self.n())
            .map(|v| mix(self.weight[v], self.a.label(v) as u64))
            .collect()
    }

    fn is_monochromatic(&self) -> bool {
        self.a.label_set().len() == 1
    }

    fn leaf(&self) -> ParseTree {
        let label = self.a.label(0);
        match &self.sub[0] {
            None => ParseTree::leaf(self.ids[0], label),
            Some(t) if t.1 == label => t.0.clone(),
            Some(t) => ParseTree::rename(t.1, label, t.0.clone()),
        }
    }
}

/// Decomposition search with memoization. Choices are ordered by
/// isomorphism-invariant keys, so isomorphic inputs see the same sequence
/// of successes and failures.
pub struct Decomposer {
    memo: HashMap<PieceKey, Option<ParseTree>>,
    pub stats: Stats,
}

impl Default for Decomposer {
    fn default() -> Self {
        Self::new()
    }
}

impl Decomposer {
    pub fn new() -> Self {
        Decomposer {
            memo: HashMap::new(),
            stats: Stats::default(),
        }
    }

    /// A parse tree of `a`, or `None` if the search finds none. `weights`
    /// (one per vertex) are colors that steer the choice order only.
    pub fn run(&mut self, a: &LabeledGraph, weights: &[u64]) -> Option<ParseTree> {
        assert_eq!(weights.len(), a.n());
        let piece = Piece {
            ids: (0..a.n()).collect(),
            a: a.clone(),
            weight: weights.to_vec(),
            sub: vec![None; a.n()],
        };
        self.piece(&piece)
    }

    fn piece(&mut self, p: &Piece) -> Option<ParseTree> {
        if p.n() == 1 {
            return Some(p.leaf());
        }
        let key = p.key();
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        self.stats.pieces += 1;
        let result = self.piece_uncached(p);
        self.memo.insert(key, result.clone());
        result
    }

    fn piece_uncached(&mut self, p: &Piece) -> Option<ParseTree> {
        let comps = p.a.graph.connected_components();
        if comps.len() > 1 {
            let mut trees = Vec::with_capacity(comps.len());
            for c in &comps {
                trees.push(self.piece(&p.restrict(c, p.a.labels()))?);
            }
            return Some(ParseTree::union(trees));
        }
        let md = modular_decomposition(&p.a.graph);
        let mono = p.is_monochromatic();
        let root = md.node(md.root());
        if !(mono && root.kind == MdKind::Series) {
            let mut modules = Vec::new();
            if mono {
                for &c in &root.children {
                    if md.node(c).vertices.len() >= 2 {
                        modules.push(md.node(c).vertices.clone());
                    }
                }
            } else {
                l_modules(&md, md.root(), p.a.labels(), &mut modules);
            }
            if !modules.is_empty() {
                self.stats.contractions += 1;
                let q = self.contract(p, &modules)?;
                return self.piece(&q);
            }
        }
        let steps = self.steps(p, mono, root.kind == MdKind::Series);
        self.search(p, steps)
    }

    /// Replaces each module by one vertex carrying its tree.
    fn contract(&mut self, p: &Piece, modules: &[Vec<Vertex>]) -> Option<Piece> {
        let n = p.n();
        let mut rep_of: Vec<Option<usize>> = vec![None; n];
        let mut sub = p.sub.clone();
        let mut weight = p.weight.clone();
        for m in modules {
            let inner = p.restrict(m, p.a.labels());
            let tree = self.piece(&inner)?;
            let h = multiset(refine(&inner.a.graph, &inner.initial()));
            weight[m[0]] = mix(MODULE_TAG, h);
            sub[m[0]] = Some(Rc::new((tree, p.a.label(m[0]))));
            for &v in &m[1..] {
                rep_of[v] = Some(m[0]);
            }
        }
        let keep: Vec<Vertex> = (0..n).filter(|&v| rep_of[v].is_none()).collect();
        let q = Piece {
            ids: p.ids.clone(),
            a: p.a.clone(),
            weight,
            sub,
        };
        Some(q.restrict(&keep, p.a.labels()))
    }

    fn steps(&mut self, p: &Piece, mono: bool, series: bool) -> Vec<Step> {
        let a = &p.a;
        if mono && series {
            let l = a.label(0);
            let Some(f) = fresh_labels(a, 1) else {
                return Vec::new();
            };
            return a
                .graph
                .coconnected_components(&full_set(a.n()))
                .into_iter()
                .map(|q| Step {
                    case: Case::Series,
                    relabel: q.into_iter().map(|v| (v, f[0])).collect(),
                    ops: vec![PathOp::Join(f[0], l), PathOp::Rename(f[0], l)],
                })
                .collect();
        }
        if mono {
            return labg_steps(a);
        }
        match a.label_set().len() {
            2 => {
                let steps = decompose_leaf_bi(a);
                if pc1(a).is_empty() && pc2(a).is_empty() && pc3(a).is_empty() {
                    self.stats.dispatches += 1;
                }
                steps
            }
            _ => decompose_leaf_ti(a),
        }
    }

    fn search(&mut self, p: &Piece, steps: Vec<Step>) -> Option<ParseTree> {
        let colors = refine(&p.a.graph, &p.initial());
        let mut keyed: Vec<(Case, u64, Step)> = steps
            .into_iter()
            .map(|s| (s.case, step_key(&s, &colors), s))
            .collect();
        keyed.sort_by_key(|k| (k.0, k.1));
        for (i, (case, key, step)) in keyed.iter().enumerate() {
            self.stats.steps_tried += 1;
            let Some(applied) = step.apply(&p.a) else {
                continue;
            };
            let below = Piece {
                a: applied.below.clone(),
                ..p.clone()
            };
            let mut trees = Vec::with_capacity(applied.components.len());
            for c in &applied.components {
                match self.piece(&below.restrict(c, below.a.labels())) {
                    Some(t) => trees.push(t),
                    None => break,
                }
            }
            if trees.len() < applied.components.len() {
                continue;
            }
            let tied = keyed.iter().enumerate().any(|(j, k)| j != i && k.0 == *case && k.1 == *key);
            if tied {
                self.stats.ties += 1;
            }
            if p.a.label_set().len() == 2 && pc1(&p.a).is_empty() && pc2(&p.a).is_empty() && pc3(&p.a).is_empty() {
                let labels = p.a.label_set();
                let members = labels
                    .iter()
                    .map(|&l| membership_u(&p.a, l) as usize + membership_d(&p.a, l) as usize)
                    .sum::<usize>();
                if members > 1 {
                    self.stats.overlaps += 1;
                }
            }
            trace!("piece of {} vertices: {:?} step", p.n(), case);
            return Some(ParseTree::union(trees).with_ops(&applied.ops));
        }
        trace!("piece of {} vertices: no step succeeds", p.n());
        None
    }
}

/// Invariant key of a step: which labels move where, described by the
/// refined colors of the moved vertices, plus the operations.
fn step_key(s: &Step, colors: &[u64]) -> u64 {
    let moved = multiset(s.relabel.iter().map(|&(v, l)| mix(colors[v], l as u64)));
    let ops = mix_all(
        0,
        s.ops.iter().map(|op| match *op {
            PathOp::Join(a, b) => mix(1, (a as u64) << 8 | b as u64),
            PathOp::Rename(a, b) => mix(2, (a as u64) << 8 | b as u64),
        }),
    );
    mix(moved, ops)
}

/// Maximal modules of size two or more whose vertices share a label. Every
/// module is a strong module or a union of children of a degenerate node,
/// so the walk stops at the first uniformly labeled node and groups
/// uniformly labeled children of degenerate nodes by label.
fn l_modules(md: &MdTree, node: usize, labels: &[Label], out: &mut Vec<Vec<Vertex>>) {
    let nd = md.node(node);
    let uniform = |i: usize| -> Option<Label> {
        let vs = &md.node(i).vertices;
        let l = labels[vs[0]];
        vs.iter().all(|&v| labels[v] == l).then_some(l)
    };
    match nd.kind {
        MdKind::Leaf(_) => {}
        MdKind::Prime => {
            for &c in &nd.children {
                match uniform(c) {
                    Some(_) if md.node(c).vertices.len() >= 2 => out.push(md.node(c).vertices.clone()),
                    Some(_) => {}
                    None => l_modules(md, c, labels, out),
                }
            }
        }
        MdKind::Series | MdKind::Parallel => {
            let mut groups: Vec<(Label, Vec<Vertex>)> = Vec::new();
            for &c in &nd.children {
                match uniform(c) {
                    Some(l) => match groups.iter_mut().find(|g| g.0 == l) {
                        Some(g) => g.1.extend(&md.node(c).vertices),
                        None => groups.push((l, md.node(c).vertices.clone())),
                    },
                    None => l_modules(md, c, labels, out),
                }
            }
            for (_, mut g) in groups {
                if g.len() >= 2 {
                    g.sort_unstable();
                    out.push(g);
                }
            }
        }
    }
}

/// Steps for a unilabeled prime piece: each candidate labeling, with the
/// classes other than the "rest" class moved to fresh labels and renamed
/// back on top. Pair labelings come last.
fn labg_steps(a: &LabeledGraph) -> Vec<Step> {
    let l = a.label(0);
    let Ok(cands) = build_labg(&a.graph) else {
        return Vec::new();
    };
    let Some(f) = fresh_labels(a, 2) else {
        return Vec::new();
    };
    let step = |case: Case, c: CandidateLabeling| {
        let rest = *c.graph.label_set().last().expect("labeled");
        let fresh_of = |x: Label| f[x as usize - 1];
        Step {
            case,
            relabel: (0..a.n())
                .filter(|&v| c.graph.label(v) != rest)
                .map(|v| (v, fresh_of(c.graph.label(v))))
                .collect(),
            ops: (1..rest).map(|x| PathOp::Rename(fresh_of(x), l)).collect(),
        }
    };
    let mut out: Vec<Step> = cands.into_iter().map(|c| step(Case::Labg, c)).collect();
    out.extend(pair_labelings(&a.graph).into_iter().map(|c| step(Case::LabgPair, c)));
    out
}
