use serde::Serialize;

use fixedbitset::FixedBitSet;

use crate::graph::{full_set, set_from, Graph, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "vertex")]
pub enum MdKind {
    Leaf(Vertex),
    Series,
    Parallel,
    Prime,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MdNode {
    #[serde(flatten)]
    pub kind: MdKind,
    /// Indices into [`MdTree::nodes`], ordered by smallest vertex.
    pub children: Vec<usize>,
    /// The module `M(h)`, sorted.
    pub vertices: Vec<Vertex>,
    /// Representative graph on the children (vertex `i` is `children[i]`);
    /// `None` for leaves.
    #[serde(skip)]
    pub quotient: Option<Graph>,
}

/// Modular decomposition tree. Nodes are stored children-first, so the
/// root is the last node and a forward scan visits every node after all
/// of its descendants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MdTree {
    pub nodes: Vec<MdNode>,
}

impl MdTree {
    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn node(&self, i: usize) -> &MdNode {
        &self.nodes[i]
    }

    /// Depth of every node, the root at depth 0.
    pub fn depths(&self) -> Vec<usize> {
        let mut depth = vec![0; self.nodes.len()];
        for i in (0..self.nodes.len()).rev() {
            for &c in &self.nodes[i].children {
                depth[c] = depth[i] + 1;
            }
        }
        depth
    }
}

/// Modular decomposition by recursive descent: split off connected
/// components, then co-connected components; otherwise the maximal proper
/// modules partition the vertex set and are found by pairwise closure.
pub fn modular_decomposition(g: &Graph) -> MdTree {
    assert!(g.n() >= 1, "modular decomposition of the empty graph");
    let mut tree = MdTree { nodes: Vec::new() };
    let all: Vec<Vertex> = (0..g.n()).collect();
    build(g, &all, &mut tree);
    tree
}

fn build(g: &Graph, vertices: &[Vertex], tree: &mut MdTree) -> usize {
    if vertices.len() == 1 {
        tree.nodes.push(MdNode {
            kind: MdKind::Leaf(vertices[0]),
            children: Vec::new(),
            vertices: vertices.to_vec(),
            quotient: None,
        });
        return tree.nodes.len() - 1;
    }
    let sub = g.induced_subgraph(vertices);
    let to_global = |part: Vec<Vertex>| -> Vec<Vertex> { part.into_iter().map(|i| vertices[i]).collect() };

    let comps = sub.connected_components();
    let (kind, parts) = if comps.len() > 1 {
        (MdKind::Parallel, comps)
    } else {
        let cocomps = sub.coconnected_components(&full_set(sub.n()));
        if cocomps.len() > 1 {
            (MdKind::Series, cocomps)
        } else {
            (MdKind::Prime, maximal_modules(&sub))
        }
    };
    let mut parts: Vec<Vec<Vertex>> = parts.into_iter().map(to_global).collect();
    parts.sort_by_key(|p| p[0]);
    let children: Vec<usize> = parts.iter().map(|p| build(g, p, tree)).collect();
    let reps: Vec<Vertex> = parts.iter().map(|p| p[0]).collect();
    tree.nodes.push(MdNode {
        kind,
        children,
        vertices: vertices.to_vec(),
        quotient: Some(g.induced_subgraph(&reps)),
    });
    tree.nodes.len() - 1
}

/// Maximal proper modules of a graph that is connected and co-connected.
/// These partition the vertex set. The maximal modules avoiding vertex 0
/// come from partition refinement; those that join 0 in a proper module
/// merge into the part of 0.
pub(crate) fn maximal_modules(g: &Graph) -> Vec<Vec<Vertex>> {
    let n = g.n();
    let mut own = set_from(n, [0]);
    let mut parts = Vec::new();
    for x in modules_avoiding(g, 0) {
        let mut seed = x.clone();
        seed.insert(0);
        if g.module_closure(&seed).count_ones(..) < n {
            own.union_with(&x);
        } else {
            parts.push(x.ones().collect());
        }
    }
    parts.push(own.ones().collect());
    parts
}

/// The maximal modules not containing `v`: the coarsest partition of the
/// other vertices in which no part is split by an outside vertex.
fn modules_avoiding(g: &Graph, v: Vertex) -> Vec<FixedBitSet> {
    let n = g.n();
    let mut rest = full_set(n);
    rest.set(v, false);
    let mut near = g.neighbors(v).clone();
    near.intersect_with(&rest);
    rest.difference_with(&near);
    let mut parts: Vec<FixedBitSet> = [near, rest].into_iter().filter(|p| p.count_ones(..) > 0).collect();
    let mut queue: Vec<Vertex> = (0..n).filter(|&w| w != v).collect();
    let mut queued = vec![true; n];
    queued[v] = false;
    while let Some(w) = queue.pop() {
        queued[w] = false;
        let mut i = 0;
        while i < parts.len() {
            let x = &parts[i];
            if x.contains(w) {
                i += 1;
                continue;
            }
            let hits = g.neighbors(w).intersection_count(x);
            if hits == 0 || hits == x.count_ones(..) {
                i += 1;
                continue;
            }
            let mut inside = x.clone();
            inside.intersect_with(g.neighbors(w));
            let mut outside = x.clone();
            outside.difference_with(&inside);
            for u in x.ones() {
                if !std::mem::replace(&mut queued[u], true) {
                    queue.push(u);
                }
            }
            parts[i] = inside;
            parts.push(outside);
        }
    }
    parts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clique_is_series() {
        let t = modular_decomposition(&Graph::complete(3));
        let root = t.node(t.root());
        assert_eq!(root.kind, MdKind::Series);
        assert_eq!(root.children.len(), 3);
    }

    #[test]
    fn independent_pair_is_parallel() {
        let t = modular_decomposition(&Graph::empty(2));
        assert_eq!(t.node(t.root()).kind, MdKind::Parallel);
    }

    #[test]
    fn path_is_prime() {
        let t = modular_decomposition(&Graph::path(4));
        let root = t.node(t.root());
        assert_eq!(root.kind, MdKind::Prime);
        assert_eq!(root.quotient.as_ref().unwrap(), &Graph::path(4));
    }

    #[test]
    fn nested_modules() {
        // P4 with vertex 3 replaced by the twins {3, 4}
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (2, 4)]).unwrap();
        let t = modular_decomposition(&g);
        let root = t.node(t.root());
        assert_eq!(root.kind, MdKind::Prime);
        let twins = root.children.iter().map(|&c| t.node(c)).find(|c| c.vertices == vec![3, 4]).unwrap();
        assert_eq!(twins.kind, MdKind::Parallel);
        assert_eq!(t.depths()[t.root()], 0);
    }
}
