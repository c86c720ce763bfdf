use std::collections::HashSet;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::split::{find_proper_split, Split, SplitError};
use crate::graph::{empty_set, set_from, Graph, Vertex};

/// A vertex of a skeleton component: a vertex of the input graph, or one
/// end of a marker edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SkNode {
    Real(Vertex),
    Marker(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ComponentKind {
    Prime,
    Clique,
    /// `center` indexes [`Component::nodes`].
    Star { center: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Component {
    pub nodes: Vec<SkNode>,
    /// Graph on `nodes` (vertex `i` is `nodes[i]`).
    #[serde(serialize_with = "crate::graph::graph_serde::serialize")]
    pub graph: Graph,
    pub kind: ComponentKind,
}

/// Split-decomposition skeleton: components joined by marker edges into a
/// tree, with adjacent cliques and compatible adjacent stars merged.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Skeleton {
    pub n: usize,
    pub components: Vec<Component>,
    /// Marker edges as pairs of marker ids.
    pub marker_edges: Vec<(usize, usize)>,
}

fn classify(g: &Graph) -> ComponentKind {
    let k = g.n();
    if k >= 2 && g.m() == k * (k - 1) / 2 {
        return ComponentKind::Clique;
    }
    if k >= 3 && g.m() == k - 1 {
        if let Some(c) = (0..k).find(|&v| g.degree(v) == k - 1) {
            return ComponentKind::Star { center: c };
        }
    }
    ComponentKind::Prime
}

impl Component {
    fn new(nodes: Vec<SkNode>, graph: Graph) -> Self {
        let kind = classify(&graph);
        Component { nodes, graph, kind }
    }

    fn index_of(&self, node: SkNode) -> Option<usize> {
        self.nodes.iter().position(|&x| x == node)
    }

    pub fn is_degenerate(&self) -> bool {
        !matches!(self.kind, ComponentKind::Prime)
    }

    pub fn center(&self) -> Option<SkNode> {
        match self.kind {
            ComponentKind::Star { center } => Some(self.nodes[center]),
            _ => None,
        }
    }
}

/// Splits `comp` along `split`, hanging a fresh marker on each side's frontier.
fn divide(comp: &Component, split: &Split, next_marker: &mut usize) -> (Component, Component, (usize, usize)) {
    let (ma, mb) = (*next_marker, *next_marker + 1);
    *next_marker += 2;
    let half = |side: &FixedBitSet, frontier: &FixedBitSet, marker: usize| {
        let members: Vec<Vertex> = side.ones().collect();
        let k = members.len();
        let mut nodes: Vec<SkNode> = members.iter().map(|&i| comp.nodes[i]).collect();
        nodes.push(SkNode::Marker(marker));
        let mut edges = Vec::new();
        for (i, &u) in members.iter().enumerate() {
            for (j, &v) in members.iter().enumerate().skip(i + 1) {
                if comp.graph.has_edge(u, v) {
                    edges.push((i, j));
                }
            }
            if frontier.contains(u) {
                edges.push((i, k));
            }
        }
        Component::new(nodes, Graph::from_edges(k + 1, edges).unwrap())
    };
    (
        half(&split.a, &split.a_frontier, ma),
        half(&split.b, &split.b_frontier, mb),
        (ma, mb),
    )
}

/// Contracts the marker edge `m1`–`m2` joining `c1` and `c2`.
fn merge(c1: &Component, m1: usize, c2: &Component, m2: usize) -> Component {
    let i1 = c1.index_of(SkNode::Marker(m1)).unwrap();
    let i2 = c2.index_of(SkNode::Marker(m2)).unwrap();
    let keep1: Vec<usize> = (0..c1.nodes.len()).filter(|&i| i != i1).collect();
    let keep2: Vec<usize> = (0..c2.nodes.len()).filter(|&i| i != i2).collect();
    let mut nodes: Vec<SkNode> = keep1.iter().map(|&i| c1.nodes[i]).collect();
    nodes.extend(keep2.iter().map(|&i| c2.nodes[i]));
    let off = keep1.len();
    let mut edges = Vec::new();
    for (a, &i) in keep1.iter().enumerate() {
        for (b, &j) in keep1.iter().enumerate().skip(a + 1) {
            if c1.graph.has_edge(i, j) {
                edges.push((a, b));
            }
        }
        for (b, &j) in keep2.iter().enumerate() {
            if c1.graph.has_edge(i, i1) && c2.graph.has_edge(j, i2) {
                edges.push((a, off + b));
            }
        }
    }
    for (a, &i) in keep2.iter().enumerate() {
        for (b, &j) in keep2.iter().enumerate().skip(a + 1) {
            if c2.graph.has_edge(i, j) {
                edges.push((off + a, off + b));
            }
        }
    }
    Component::new(nodes.clone(), Graph::from_edges(nodes.len(), edges).unwrap())
}

fn mergeable(c1: &Component, m1: usize, c2: &Component, m2: usize) -> bool {
    match (c1.kind, c2.kind) {
        (ComponentKind::Clique, ComponentKind::Clique) => true,
        (ComponentKind::Star { .. }, ComponentKind::Star { .. }) => {
            let center1 = c1.center() == Some(SkNode::Marker(m1));
            let center2 = c2.center() == Some(SkNode::Marker(m2));
            center1 != center2
        }
        _ => false,
    }
}

/// Canonical split decomposition of a connected graph.
pub fn skeleton(g: &Graph) -> Result<Skeleton, SplitError> {
    if !g.is_connected() {
        return Err(SplitError::Disconnected);
    }
    let n = g.n();
    let mut next_marker = 0;
    let mut marker_edges = Vec::new();
    let mut done = Vec::new();
    let mut work = vec![Component::new((0..n).map(SkNode::Real).collect(), g.clone())];
    while let Some(comp) = work.pop() {
        match find_proper_split(&comp.graph)? {
            Some(split) => {
                let (a, b, edge) = divide(&comp, &split, &mut next_marker);
                marker_edges.push(edge);
                work.push(b);
                work.push(a);
            }
            None => done.push(comp),
        }
    }

    // merge until no marker edge joins two cliques or a star center to
    // another star's leaf
    let mut components = done;
    loop {
        let home = |components: &[Component], m: usize| {
            components
                .iter()
                .position(|c| c.nodes.contains(&SkNode::Marker(m)))
                .unwrap()
        };
        let found = marker_edges.iter().position(|&(m1, m2)| {
            let (i, j) = (home(&components, m1), home(&components, m2));
            mergeable(&components[i], m1, &components[j], m2)
        });
        let Some(e) = found else { break };
        let (m1, m2) = marker_edges.remove(e);
        let (i, j) = (home(&components, m1), home(&components, m2));
        let merged = merge(&components[i], m1, &components[j], m2);
        let (lo, hi) = (i.min(j), i.max(j));
        components.remove(hi);
        components[lo] = merged;
    }
    for c in &mut components {
        let mut order: Vec<usize> = (0..c.nodes.len()).collect();
        order.sort_by_key(|&i| c.nodes[i]);
        let mut pos = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            pos[old] = new;
        }
        let nodes: Vec<SkNode> = order.iter().map(|&i| c.nodes[i]).collect();
        let graph = c.graph.permuted(&pos);
        *c = Component::new(nodes, graph);
    }
    components.sort_by_key(|c| c.nodes[0]);
    let mut sk = Skeleton {
        n,
        components,
        marker_edges,
    };
    sk.renumber_markers();
    Ok(sk)
}

impl Skeleton {
    /// Renumbers markers in order of first appearance so that equal
    /// decompositions compare equal.
    fn renumber_markers(&mut self) {
        let mut map = std::collections::HashMap::new();
        for c in &self.components {
            for node in &c.nodes {
                if let SkNode::Marker(m) = node {
                    let next = map.len();
                    map.entry(*m).or_insert(next);
                }
            }
        }
        for c in &mut self.components {
            for node in &mut c.nodes {
                if let SkNode::Marker(m) = node {
                    *m = map[m];
                }
            }
        }
        for e in &mut self.marker_edges {
            let (a, b) = (map[&e.0], map[&e.1]);
            *e = (a.min(b), a.max(b));
        }
        self.marker_edges.sort_unstable();
    }

    fn partner(&self, m: usize) -> usize {
        self.marker_edges
            .iter()
            .find_map(|&(a, b)| {
                if a == m {
                    Some(b)
                } else if b == m {
                    Some(a)
                } else {
                    None
                }
            })
            .expect("every marker has a partner")
    }

    fn home(&self, node: SkNode) -> (usize, usize) {
        self.components
            .iter()
            .enumerate()
            .find_map(|(ci, c)| c.index_of(node).map(|i| (ci, i)))
            .expect("node belongs to a component")
    }

    /// Real vertices reached from `node`'s neighbors in its component,
    /// crossing marker edges: the vertices `node` stands adjacent to.
    fn reach_from(&self, comp: usize, local: usize, out: &mut FixedBitSet) {
        let c = &self.components[comp];
        for y in c.graph.neighbors(local).ones() {
            match c.nodes[y] {
                SkNode::Real(v) => {
                    out.insert(v);
                }
                SkNode::Marker(m) => {
                    let (ci, i) = self.home(SkNode::Marker(self.partner(m)));
                    self.reach_from(ci, i, out);
                }
            }
        }
    }

    /// Real vertices behind marker `m`: those adjacent to the other side
    /// through the marker edge at `m`.
    pub fn accessible(&self, m: usize) -> FixedBitSet {
        let mut out = empty_set(self.n);
        let (ci, i) = self.home(SkNode::Marker(self.partner(m)));
        self.reach_from(ci, i, &mut out);
        out
    }

    /// Rebuilds the graph by contracting every marker edge.
    pub fn contract(&self) -> Graph {
        let mut edges = Vec::new();
        for (ci, c) in self.components.iter().enumerate() {
            for (i, node) in c.nodes.iter().enumerate() {
                if let SkNode::Real(u) = *node {
                    let mut nbrs = empty_set(self.n);
                    self.reach_from(ci, i, &mut nbrs);
                    edges.extend(nbrs.ones().filter(|&v| v > u).map(|v| (u, v)));
                }
            }
        }
        Graph::from_edges(self.n, edges).expect("contraction yields a simple graph")
    }

    /// Real vertices in the subtree hanging off marker `m`'s partner side,
    /// i.e. everything represented by marker `m`.
    pub fn represented(&self, m: usize) -> FixedBitSet {
        let mut out = empty_set(self.n);
        let mut seen = HashSet::new();
        let start = self.home(SkNode::Marker(self.partner(m))).0;
        let mut stack = vec![(start, self.partner(m))];
        while let Some((ci, entry)) = stack.pop() {
            if !seen.insert(ci) {
                continue;
            }
            for node in &self.components[ci].nodes {
                match *node {
                    SkNode::Real(v) => {
                        out.insert(v);
                    }
                    SkNode::Marker(x) if x != entry => {
                        let p = self.partner(x);
                        stack.push((self.home(SkNode::Marker(p)).0, p));
                    }
                    SkNode::Marker(_) => {}
                }
            }
        }
        out
    }

    /// The split defined by each marker edge, in marker-edge order.
    pub fn special_splits(&self, g: &Graph) -> Vec<Split> {
        self.marker_edges
            .iter()
            .map(|&(m1, _)| {
                let side = self.represented(m1);
                Split::from_side(g, &side).expect("marker edges define splits")
            })
            .collect()
    }

    /// Every proper split of the graph: one per marker edge plus every
    /// bipartition of a clique or star component into parts of size two or
    /// more.
    pub fn all_splits(&self, g: &Graph) -> Vec<Split> {
        let mut out: Vec<Split> = self.special_splits(g);
        for c in &self.components {
            let k = c.nodes.len();
            if !c.is_degenerate() || !(4..=24).contains(&k) {
                continue;
            }
            let sets: Vec<FixedBitSet> = c
                .nodes
                .iter()
                .map(|node| match *node {
                    SkNode::Real(v) => set_from(self.n, [v]),
                    SkNode::Marker(m) => self.represented(m),
                })
                .collect();
            for mask in 1u32..(1 << (k - 1)) {
                let inside = |i: usize| i < k - 1 && mask & (1 << i) != 0;
                let size = (0..k).filter(|&i| inside(i)).count();
                if size < 2 || k - size < 2 {
                    continue;
                }
                let mut side = empty_set(self.n);
                (0..k).filter(|&i| inside(i)).for_each(|i| side.union_with(&sets[i]));
                if let Some(s) = Split::from_side(g, &side) {
                    out.push(s);
                }
            }
        }
        let mut seen = HashSet::new();
        out.into_iter()
            .map(|s| s.normalized())
            .filter(|s| seen.insert(s.a.clone()))
            .collect()
    }

    /// Star components whose center is a vertex of the input graph,
    /// with that vertex.
    pub fn special_centers(&self) -> Vec<(usize, Vertex)> {
        self.components
            .iter()
            .enumerate()
            .filter_map(|(i, c)| match c.center() {
                Some(SkNode::Real(v)) => Some((i, v)),
                _ => None,
            })
            .collect()
    }

    /// Real vertices a component stands for: its own real vertices plus,
    /// for each marker, the vertices reachable through it.
    pub fn frontier_expansion(&self, comp: usize) -> FixedBitSet {
        let mut out = empty_set(self.n);
        for node in &self.components[comp].nodes {
            match *node {
                SkNode::Real(v) => out.insert(v),
                SkNode::Marker(m) => out.union_with(&self.accessible(m)),
            }
        }
        out
    }
}
