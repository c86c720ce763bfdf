//! Simple undirected graphs plus labeled and colored variants.
//!
//! Vertices are the dense integers `0..n`. Adjacency is kept twice: as one
//! bitset row per vertex (word-parallel neighborhood comparisons, which the
//! module and split routines lean on) and as a sorted edge list.

use std::collections::VecDeque;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A vertex id in `0..n`.
pub type Vertex = usize;

/// A clique-width label. Valid labels are `1..=MAX_LABEL`.
pub type Label = u8;

/// Largest label any expression in this crate may use.
pub const MAX_LABEL: Label = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("label {0} outside 1..={max}", max = MAX_LABEL)]
    LabelOutOfRange(Label),
    #[error("expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("graph is not bilabeled (labels in use: {0:?})")]
    NotBilabeled(Vec<Label>),
    #[error("label {0} is not in use")]
    LabelNotInUse(Label),
}

/// Simple undirected graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<FixedBitSet>,
    edges: Vec<(Vertex, Vertex)>,
}

pub(crate) fn empty_set(n: usize) -> FixedBitSet {
    FixedBitSet::with_capacity(n)
}

pub(crate) fn set_from(n: usize, items: impl IntoIterator<Item = Vertex>) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(n);
    for v in items {
        s.insert(v);
    }
    s
}

pub(crate) fn full_set(n: usize) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(n);
    s.insert_range(..);
    s
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![empty_set(n); n],
            edges: Vec::new(),
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.insert_edge_unchecked(u, v);
            }
        }
        g.finish();
        g
    }

    pub fn path(n: usize) -> Self {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("path edges are valid")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycles need at least three vertices");
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle edges are valid")
    }

    /// Builds a graph, rejecting self-loops, out-of-range ids and repeated edges.
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (Vertex, Vertex)>,
    ) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if g.adj[u].contains(v) {
                return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
            }
            g.insert_edge_unchecked(u, v);
        }
        g.finish();
        Ok(g)
    }

    /// Builds a graph from adjacency rows. Rows must be symmetric and loop-free.
    pub(crate) fn from_rows(adj: Vec<FixedBitSet>) -> Self {
        let n = adj.len();
        let mut edges = Vec::new();
        for (u, row) in adj.iter().enumerate() {
            debug_assert!(!row.contains(u));
            for v in row.ones() {
                debug_assert!(adj[v].contains(u));
                if u < v {
                    edges.push((u, v));
                }
            }
        }
        debug_assert!(adj.iter().all(|r| r.len() == n));
        Graph { adj, edges }
    }

    fn insert_edge_unchecked(&mut self, u: Vertex, v: Vertex) {
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        self.edges.push((u.min(v), u.max(v)));
    }

    fn finish(&mut self) {
        self.edges.sort_unstable();
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Sorted list of edges `(u, v)` with `u < v`.
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u].contains(v)
    }

    /// Open neighborhood as a bitset row.
    pub fn neighbors(&self, v: Vertex) -> &FixedBitSet {
        &self.adj[v]
    }

    pub fn closed_neighborhood(&self, v: Vertex) -> FixedBitSet {
        let mut s = self.adj[v].clone();
        s.insert(v);
        s
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].count_ones(..)
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n()).map(|v| self.degree(v)).collect()
    }

    /// True if `v` is adjacent to every vertex of `scope` other than itself.
    pub fn is_universal_to(&self, v: Vertex, scope: &FixedBitSet) -> bool {
        let mut rest = scope.clone();
        rest.set(v, false);
        rest.is_subset(&self.adj[v])
    }

    pub fn is_universal_vertex(&self, v: Vertex) -> bool {
        self.degree(v) + 1 == self.n()
    }

    pub fn complement(&self) -> Graph {
        let n = self.n();
        let adj = (0..n)
            .map(|v| {
                let mut row = self.adj[v].clone();
                row.toggle_range(..);
                row.set(v, false);
                row
            })
            .collect();
        Graph::from_rows(adj)
    }

    /// Induced subgraph; vertex `i` of the result is `vertices[i]`.
    pub fn induced_subgraph(&self, vertices: &[Vertex]) -> Graph {
        let k = vertices.len();
        let mut pos = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            pos[v] = i;
        }
        let adj = vertices
            .iter()
            .map(|&v| {
                let mut row = empty_set(k);
                for w in self.adj[v].ones() {
                    if pos[w] != usize::MAX {
                        row.insert(pos[w]);
                    }
                }
                row
            })
            .collect();
        Graph::from_rows(adj)
    }

    /// Same graph with vertex `v` renamed to `perm[v]`.
    pub fn permuted(&self, perm: &[Vertex]) -> Graph {
        assert_eq!(perm.len(), self.n());
        Graph::from_edges(self.n(), self.edges.iter().map(|&(u, v)| (perm[u], perm[v])))
            .expect("a permutation of a simple graph is simple")
    }

    /// Connected components, each sorted, ordered by minimum vertex.
    pub fn connected_components(&self) -> Vec<Vec<Vertex>> {
        components_within(self.n(), &full_set(self.n()), |v| self.adj[v].clone())
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.connected_components().len() == 1
    }

    /// Connected components of the complement of the subgraph induced by `scope`.
    pub fn coconnected_components(&self, scope: &FixedBitSet) -> Vec<Vec<Vertex>> {
        components_within(self.n(), scope, |v| {
            let mut row = self.adj[v].clone();
            row.toggle_range(..);
            row.set(v, false);
            row
        })
    }

    /// All vertices of `m` have identical neighborhoods outside `m`.
    pub fn is_module(&self, m: &FixedBitSet) -> bool {
        let mut members = m.ones();
        let Some(first) = members.next() else {
            return true;
        };
        let outside = |v: Vertex| {
            let mut row = self.adj[v].clone();
            row.difference_with(m);
            row
        };
        let reference = outside(first);
        members.all(|v| outside(v) == reference)
    }

    /// Smallest module containing `seed`, grown by adding distinguishers.
    pub fn module_closure(&self, seed: &FixedBitSet) -> FixedBitSet {
        let n = self.n();
        let mut m = seed.clone();
        loop {
            let mut grew = false;
            for w in 0..n {
                if m.contains(w) {
                    continue;
                }
                let hits = self.adj[w].intersection_count(&m);
                if hits != 0 && hits != m.count_ones(..) {
                    m.insert(w);
                    grew = true;
                }
            }
            if !grew {
                return m;
            }
        }
    }

    /// Every module is trivial: the graph is connected, co-connected, and
    /// its maximal proper modules are single vertices.
    pub fn is_prime(&self) -> bool {
        let n = self.n();
        if n <= 2 {
            return true;
        }
        self.is_connected()
            && self.coconnected_components(&full_set(n)).len() == 1
            && crate::decomposition::maximal_modules(self).len() == n
    }
}

fn components_within(
    n: usize,
    scope: &FixedBitSet,
    row: impl Fn(Vertex) -> FixedBitSet,
) -> Vec<Vec<Vertex>> {
    let mut unseen = scope.clone();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    while let Some(start) = unseen.minimum() {
        unseen.set(start, false);
        queue.push_back(start);
        let mut comp = vec![start];
        while let Some(v) = queue.pop_front() {
            let mut next = row(v);
            next.intersect_with(&unseen);
            for w in next.ones() {
                unseen.set(w, false);
                comp.push(w);
                queue.push_back(w);
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    debug_assert!(out.iter().all(|c| c.iter().all(|&v| v < n)));
    out
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n(), self.edges)
    }
}

/// A graph with exactly one label in `1..=4` per vertex.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LabeledGraph {
    #[serde(with = "graph_serde")]
    pub graph: Graph,
    labels: Vec<Label>,
}

impl LabeledGraph {
    pub fn new(graph: Graph, labels: Vec<Label>) -> Result<Self, GraphError> {
        if labels.len() != graph.n() {
            return Err(GraphError::LengthMismatch {
                expected: graph.n(),
                got: labels.len(),
            });
        }
        if let Some(&bad) = labels.iter().find(|&&l| l == 0 || l > MAX_LABEL) {
            return Err(GraphError::LabelOutOfRange(bad));
        }
        Ok(LabeledGraph { graph, labels })
    }

    /// Labels `x` with `inside` and everything else with `outside`.
    pub fn bilabeling(graph: Graph, x: &FixedBitSet, inside: Label, outside: Label) -> Self {
        let labels = (0..graph.n())
            .map(|v| if x.contains(v) { inside } else { outside })
            .collect();
        LabeledGraph::new(graph, labels).expect("labels are in range")
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn label(&self, v: Vertex) -> Label {
        self.labels[v]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    /// Sorted set of labels in use.
    pub fn label_set(&self) -> Vec<Label> {
        let mut seen = [false; MAX_LABEL as usize + 1];
        for &l in &self.labels {
            seen[l as usize] = true;
        }
        (1..=MAX_LABEL).filter(|&l| seen[l as usize]).collect()
    }

    /// Vertices carrying label `l`.
    pub fn class(&self, l: Label) -> FixedBitSet {
        set_from(
            self.n(),
            (0..self.n()).filter(|&v| self.labels[v] == l),
        )
    }

    /// Every vertex of label `a` is adjacent to every vertex of label `b`.
    pub fn is_biclique_between(&self, a: Label, b: Label) -> bool {
        let cb = self.class(b);
        (0..self.n())
            .filter(|&v| self.labels[v] == a)
            .all(|v| cb.is_subset(self.graph.neighbors(v)))
    }

    /// No module of size at least two whose vertices share a label, apart
    /// from the whole vertex set.
    pub fn is_l_prime(&self) -> bool {
        let n = self.n();
        for u in 0..n {
            for v in u + 1..n {
                if self.labels[u] != self.labels[v] {
                    continue;
                }
                let closure = self.graph.module_closure(&set_from(n, [u, v]));
                let uniform = closure.ones().all(|w| self.labels[w] == self.labels[u]);
                if uniform && closure.count_ones(..) != n {
                    return false;
                }
            }
        }
        true
    }

    /// Splits the vertices of label `l` into those adjacent to all, some, or
    /// none of the vertices carrying the other label.
    pub fn label_partition(&self, l: Label) -> Result<LabelPartition, GraphError> {
        let used = self.label_set();
        if used.len() != 2 {
            return Err(GraphError::NotBilabeled(used));
        }
        if !used.contains(&l) {
            return Err(GraphError::LabelNotInUse(l));
        }
        let n = self.n();
        let other = self.class(if used[0] == l { used[1] } else { used[0] });
        let other_size = other.count_ones(..);
        let mut part = LabelPartition {
            all: empty_set(n),
            some: empty_set(n),
            none: empty_set(n),
        };
        for v in (0..n).filter(|&v| self.labels[v] == l) {
            match self.graph.neighbors(v).intersection_count(&other) {
                0 => part.none.insert(v),
                k if k == other_size => part.all.insert(v),
                _ => part.some.insert(v),
            }
        }
        Ok(part)
    }
}

impl fmt::Debug for LabeledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "LabeledGraph(n={}, edges={:?}, labels={:?})",
            self.n(),
            self.graph.edges(),
            self.labels
        )
    }
}

/// The `V^a`, `V^s`, `V^n` split of one label class of a bilabeled graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelPartition {
    pub all: FixedBitSet,
    pub some: FixedBitSet,
    pub none: FixedBitSet,
}

/// A graph with an unbounded color per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColoredGraph {
    pub graph: Graph,
    colors: Vec<u32>,
}

impl ColoredGraph {
    pub fn new(graph: Graph, colors: Vec<u32>) -> Result<Self, GraphError> {
        if colors.len() != graph.n() {
            return Err(GraphError::LengthMismatch {
                expected: graph.n(),
                got: colors.len(),
            });
        }
        Ok(ColoredGraph { graph, colors })
    }

    pub fn uncolored(graph: Graph) -> Self {
        let n = graph.n();
        ColoredGraph {
            graph,
            colors: vec![0; n],
        }
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn color(&self, v: Vertex) -> u32 {
        self.colors[v]
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }
}

pub(crate) mod graph_serde {
    use super::Graph;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Raw {
        n: usize,
        edges: Vec<(usize, usize)>,
    }

    pub(crate) fn serialize<S: Serializer>(g: &Graph, s: S) -> Result<S::Ok, S::Error> {
        Raw {
            n: g.n(),
            edges: g.edges().to_vec(),
        }
        .serialize(s)
    }

    pub(crate) fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Graph, D::Error> {
        let raw = Raw::deserialize(d)?;
        Graph::from_edges(raw.n, raw.edges).map_err(serde::de::Error::custom)
    }
}
