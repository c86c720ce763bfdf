use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::graph::{empty_set, full_set, Graph, Label, LabeledGraph, Vertex, MAX_LABEL};
use crate::kexpr::PathOp;

/// Which rule proposed a step. The derive order is the order in which
/// steps are tried.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Case {
    TiUniversal,
    TiPair,
    Pc1,
    Pc2Double,
    Pc2,
    Pc3,
    U,
    D,
    /// Unilabeled, not co-connected: peel one co-component.
    Series,
    /// Unilabeled prime: relabel by a candidate of the piece.
    Labg,
    /// Unilabeled prime: relabel a pair of vertices.
    LabgPair,
}

/// One decomposition step: relabel some vertices, then the operations in
/// `ops` (innermost first) rebuild the input from the union of the
/// connected components left after removing the edges those joins create.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Step {
    pub case: Case,
    pub relabel: Vec<(Vertex, Label)>,
    pub ops: Vec<PathOp>,
}

/// A step applied to a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Applied {
    /// What is below the union: the input with the step's labels and
    /// without the edges the joins create.
    pub below: LabeledGraph,
    /// Connected components of what is left, each sorted, ordered by
    /// smallest vertex.
    pub components: Vec<Vec<Vertex>>,
    /// The operations that actually do something; joins and renames of
    /// empty classes are dropped.
    pub ops: Vec<PathOp>,
}

impl Step {
    /// Checks the step against `a`: every edge a join creates must be an
    /// edge of `a` created only once, the renames must restore the labels of
    /// `a`, and a step with joins must leave at least two components.
    pub fn apply(&self, a: &LabeledGraph) -> Option<Applied> {
        let n = a.n();
        let mut cur = a.labels().to_vec();
        for &(v, l) in &self.relabel {
            cur[v] = l;
        }
        let below = cur.clone();
        let mut removed: Vec<FixedBitSet> = vec![empty_set(n); n];
        let mut ops = Vec::new();
        for &op in &self.ops {
            match op {
                PathOp::Join(x, y) => {
                    let cx: Vec<Vertex> = (0..n).filter(|&v| cur[v] == x).collect();
                    let cy: Vec<Vertex> = (0..n).filter(|&v| cur[v] == y).collect();
                    if x == y || cx.is_empty() || cy.is_empty() {
                        continue;
                    }
                    for &u in &cx {
                        for &v in &cy {
                            if !a.graph.has_edge(u, v) || removed[u].contains(v) {
                                return None;
                            }
                            removed[u].insert(v);
                            removed[v].insert(u);
                        }
                    }
                    ops.push(op);
                }
                PathOp::Rename(from, to) => {
                    if from == to || !cur.contains(&from) {
                        continue;
                    }
                    cur.iter_mut().filter(|l| **l == from).for_each(|l| *l = to);
                    ops.push(op);
                }
            }
        }
        if cur != a.labels() {
            return None;
        }
        let rows = (0..n)
            .map(|v| {
                let mut r = a.graph.neighbors(v).clone();
                r.difference_with(&removed[v]);
                r
            })
            .collect();
        let rest = Graph::from_rows(rows);
        let components = rest.connected_components();
        let joins = ops.iter().any(|op| matches!(op, PathOp::Join(..)));
        if joins == (components.len() < 2) {
            return None;
        }
        Some(Applied {
            below: LabeledGraph::new(rest, below).expect("labels are in range"),
            components,
            ops,
        })
    }
}

/// Smallest labels not in use, at most `k` of them.
pub fn fresh_labels(a: &LabeledGraph, k: usize) -> Option<Vec<Label>> {
    let used = a.label_set();
    let free: Vec<Label> = (1..=MAX_LABEL).filter(|l| !used.contains(l)).take(k).collect();
    (free.len() == k).then_some(free)
}

fn vertices_with(a: &LabeledGraph, l: Label) -> Vec<Vertex> {
    (0..a.n()).filter(|&v| a.label(v) == l).collect()
}

/// `v` is adjacent to every vertex of `set` other than itself.
fn universal_to(g: &Graph, v: Vertex, set: &FixedBitSet) -> bool {
    let mut s = set.clone();
    s.set(v, false);
    s.is_subset(g.neighbors(v))
}

fn misses(g: &Graph, v: Vertex, set: &FixedBitSet) -> bool {
    g.neighbors(v).is_disjoint(set)
}

/// Trilabeled steps: a universal vertex's class joined to both others,
/// then every complete class pair on its own.
pub fn decompose_leaf_ti(a: &LabeledGraph) -> Vec<Step> {
    let labels = a.label_set();
    let mut out = Vec::new();
    for &l in &labels {
        if vertices_with(a, l).iter().any(|&v| a.graph.is_universal_vertex(v)) {
            let ops = labels.iter().filter(|&&m| m != l).map(|&m| PathOp::Join(l, m)).collect();
            out.push(Step {
                case: Case::TiUniversal,
                relabel: Vec::new(),
                ops,
            });
        }
    }
    for (i, &x) in labels.iter().enumerate() {
        for &y in &labels[i + 1..] {
            if a.is_biclique_between(x, y) {
                out.push(Step {
                    case: Case::TiPair,
                    relabel: Vec::new(),
                    ops: vec![PathOp::Join(x, y)],
                });
            }
        }
    }
    out
}

fn two_labels(a: &LabeledGraph) -> Option<(Label, Label)> {
    match a.label_set()[..] {
        [x, y] => Some((x, y)),
        _ => None,
    }
}

fn other(pair: (Label, Label), l: Label) -> Label {
    if pair.0 == l {
        pair.1
    } else {
        pair.0
    }
}

/// PC1: a universal vertex moves to a fresh label joined to both classes.
pub fn pc1(a: &LabeledGraph) -> Vec<Step> {
    let (Some(pair), Some(f)) = (two_labels(a), fresh_labels(a, 1)) else {
        return Vec::new();
    };
    (0..a.n())
        .filter(|&v| a.graph.is_universal_vertex(v))
        .map(|x| Step {
            case: Case::Pc1,
            relabel: vec![(x, f[0])],
            ops: vec![
                PathOp::Join(f[0], pair.0),
                PathOp::Join(f[0], pair.1),
                PathOp::Rename(f[0], a.label(x)),
            ],
        })
        .collect()
}

/// Vertices universal to one class and adjacent to nothing in the other,
/// with the class they see.
pub fn pc2_set(a: &LabeledGraph) -> Vec<(Vertex, Label)> {
    let Some(pair) = two_labels(a) else {
        return Vec::new();
    };
    let (c0, c1) = (a.class(pair.0), a.class(pair.1));
    (0..a.n())
        .filter_map(|v| {
            if universal_to(&a.graph, v, &c0) && misses(&a.graph, v, &c1) {
                Some((v, pair.0))
            } else if universal_to(&a.graph, v, &c1) && misses(&a.graph, v, &c0) {
                Some((v, pair.1))
            } else {
                None
            }
        })
        .collect()
}

/// PC2: one such vertex on a fresh label, or, when there are two with
/// different labels, both at once on two fresh labels (the one with the
/// smaller label gets the smaller fresh label).
pub fn pc2(a: &LabeledGraph) -> Vec<Step> {
    let s = pc2_set(a);
    let mut out = Vec::new();
    if let ([(x1, s1), (x2, s2)], Some(f)) = (&s[..], fresh_labels(a, 2)) {
        if a.label(*x1) != a.label(*x2) {
            let ((x1, s1), (x2, s2)) = if a.label(*x1) < a.label(*x2) {
                ((*x1, *s1), (*x2, *s2))
            } else {
                ((*x2, *s2), (*x1, *s1))
            };
            out.push(Step {
                case: Case::Pc2Double,
                relabel: vec![(x1, f[0]), (x2, f[1])],
                ops: vec![
                    PathOp::Join(f[0], s1),
                    PathOp::Rename(f[0], a.label(x1)),
                    PathOp::Join(f[1], s2),
                    PathOp::Rename(f[1], a.label(x2)),
                ],
            });
        }
    }
    if let Some(f) = fresh_labels(a, 1) {
        for &(x, seen) in &s {
            out.push(Step {
                case: Case::Pc2,
                relabel: vec![(x, f[0])],
                ops: vec![PathOp::Join(f[0], seen), PathOp::Rename(f[0], a.label(x))],
            });
        }
    }
    out
}

/// PC3: `y` sees everything but `x`; `x` sees its own class but `y` and
/// nothing of the other class. Both move to a fresh label joined to their
/// class; `y` is peeled off one level down.
pub fn pc3(a: &LabeledGraph) -> Vec<Step> {
    let (Some(pair), Some(f)) = (two_labels(a), fresh_labels(a, 1)) else {
        return Vec::new();
    };
    let n = a.n();
    let mut out = Vec::new();
    for y in (0..n).filter(|&y| a.graph.degree(y) + 2 == n) {
        let x = full_set(n)
            .ones()
            .find(|&x| x != y && !a.graph.has_edge(x, y))
            .expect("y misses one vertex");
        let l = a.label(y);
        if a.label(x) != l {
            continue;
        }
        let mut own = a.class(l);
        own.set(y, false);
        if universal_to(&a.graph, x, &own) && misses(&a.graph, x, &a.class(other(pair, l))) {
            out.push(Step {
                case: Case::Pc3,
                relabel: vec![(x, f[0]), (y, f[0])],
                ops: vec![PathOp::Join(f[0], l), PathOp::Rename(f[0], l)],
            });
        }
    }
    out
}

/// Bilabeled steps in dispatch order: PC1, PC2, PC3, then `U` and `D̄`
/// for each label.
pub fn decompose_leaf_bi(a: &LabeledGraph) -> Vec<Step> {
    let Some(pair) = two_labels(a) else {
        return Vec::new();
    };
    let mut out = pc1(a);
    out.extend(pc2(a));
    out.extend(pc3(a));
    for l in [pair.0, pair.1] {
        out.extend(decompose_leaf_u(a, l));
    }
    for l in [pair.0, pair.1] {
        out.extend(decompose_leaf_d(a, l));
    }
    out
}

fn components_without(g: &Graph, drop: impl Fn(Vertex, Vertex) -> bool) -> Vec<Vec<Vertex>> {
    let n = g.n();
    let rows = (0..n)
        .map(|u| {
            let mut r = g.neighbors(u).clone();
            for v in g.neighbors(u).ones() {
                if drop(u, v) {
                    r.set(v, false);
                }
            }
            r
        })
        .collect();
    Graph::from_rows(rows).connected_components()
}

/// `V_l^a`: vertices of label `l` adjacent to the whole other class.
pub fn v_all(a: &LabeledGraph, l: Label) -> FixedBitSet {
    match a.label_partition(l) {
        Ok(p) => p.all,
        Err(_) => empty_set(a.n()),
    }
}

/// Deleting the edges between `V_l^a` and the other class disconnects `a`.
pub fn membership_u(a: &LabeledGraph, l: Label) -> bool {
    let Some(pair) = two_labels(a) else {
        return false;
    };
    if !a.label_set().contains(&l) {
        return false;
    }
    let va = v_all(a, l);
    if va.count_ones(..) == 0 {
        return false;
    }
    let lb = other(pair, l);
    components_without(&a.graph, |u, v| {
        (va.contains(u) && a.label(v) == lb) || (va.contains(v) && a.label(u) == lb)
    })
    .len()
        > 1
}

/// `U_l` steps: some part `Q` of `V_l^a` moves to a fresh label joined to
/// the other class. `Q` is all of `V_l^a`, then its part inside each
/// component left by the membership cut, then all of it but that part.
pub fn decompose_leaf_u(a: &LabeledGraph, l: Label) -> Vec<Step> {
    if !membership_u(a, l) {
        return Vec::new();
    }
    let (Some(pair), Some(f)) = (two_labels(a), fresh_labels(a, 1)) else {
        return Vec::new();
    };
    let lb = other(pair, l);
    let va = v_all(a, l);
    let comps = components_without(&a.graph, |u, v| {
        (va.contains(u) && a.label(v) == lb) || (va.contains(v) && a.label(u) == lb)
    });
    let step = |q: Vec<Vertex>| Step {
        case: Case::U,
        relabel: q.into_iter().map(|v| (v, f[0])).collect(),
        ops: vec![PathOp::Join(f[0], lb), PathOp::Rename(f[0], l)],
    };
    let mut out = vec![step(va.ones().collect())];
    for k in &comps {
        let inside: Vec<Vertex> = k.iter().copied().filter(|&v| va.contains(v)).collect();
        if inside.is_empty() || inside.len() == va.count_ones(..) {
            continue;
        }
        let outside: Vec<Vertex> = va.ones().filter(|v| !inside.contains(v)).collect();
        out.push(step(inside));
        out.push(step(outside));
    }
    out
}

/// Co-connected components of the class of `l`.
pub fn cocomponents(a: &LabeledGraph, l: Label) -> Vec<Vec<Vertex>> {
    a.graph.coconnected_components(&a.class(l))
}

fn owner_of(parts: &[Vec<Vertex>], n: usize) -> Vec<usize> {
    let mut owner = vec![usize::MAX; n];
    for (i, p) in parts.iter().enumerate() {
        for &v in p {
            owner[v] = i;
        }
    }
    owner
}

/// The class of `l` is not co-connected and deleting the edges between its
/// co-components disconnects `a`.
pub fn membership_d(a: &LabeledGraph, l: Label) -> bool {
    if two_labels(a).is_none() || !a.label_set().contains(&l) {
        return false;
    }
    let cc = cocomponents(a, l);
    if cc.len() < 2 {
        return false;
    }
    let owner = owner_of(&cc, a.n());
    components_without(&a.graph, |u, v| {
        owner[u] != usize::MAX && owner[v] != usize::MAX && owner[u] != owner[v]
    })
    .len()
        > 1
}

/// `D̄_l` steps: a union `Q` of co-components of the class of `l` moves to
/// a fresh label joined to the rest of the class. `Q` is each single
/// co-component, then for each component left by the membership cut, the
/// co-components it meets.
pub fn decompose_leaf_d(a: &LabeledGraph, l: Label) -> Vec<Step> {
    if !membership_d(a, l) {
        return Vec::new();
    }
    let Some(f) = fresh_labels(a, 1) else {
        return Vec::new();
    };
    let cc = cocomponents(a, l);
    let owner = owner_of(&cc, a.n());
    let step = |q: Vec<Vertex>| Step {
        case: Case::D,
        relabel: q.into_iter().map(|v| (v, f[0])).collect(),
        ops: vec![PathOp::Join(f[0], l), PathOp::Rename(f[0], l)],
    };
    let mut out: Vec<Step> = cc.iter().map(|c| step(c.clone())).collect();
    let comps = components_without(&a.graph, |u, v| {
        owner[u] != usize::MAX && owner[v] != usize::MAX && owner[u] != owner[v]
    });
    let mut seen: Vec<Vec<usize>> = Vec::new();
    for k in &comps {
        let mut met: Vec<usize> = k.iter().filter_map(|&v| (owner[v] != usize::MAX).then_some(owner[v])).collect();
        met.sort_unstable();
        met.dedup();
        if met.len() < 2 || met.len() == cc.len() || seen.contains(&met) {
            continue;
        }
        let q = met.iter().flat_map(|&i| cc[i].iter().copied()).collect();
        out.push(step(q));
        seen.push(met);
    }
    out
}
