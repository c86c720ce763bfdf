//! Clique-width expressions: the parse-tree AST, its evaluator, and the
//! colored quotient graphs read off the path between a union node and one of
//! its immediate significant descendants.

mod quotient;
mod random;
mod text;

pub use quotient::{quotient_graph, QuotientGraph};
pub use random::random_expression;
pub use text::{parse_text, to_text, KExpr, ParseError};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{empty_set, Graph, Label, LabeledGraph, Vertex, MAX_LABEL};

/// A clique-width parse tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ParseTree {
    /// `v(label)`: create vertex `vertex` carrying `label`.
    Leaf { vertex: Vertex, label: Label },
    /// Disjoint union of two or more subtrees.
    Union(Vec<ParseTree>),
    /// `η_{a,b}`: join every `a`-vertex to every `b`-vertex.
    Join {
        a: Label,
        b: Label,
        child: Box<ParseTree>,
    },
    /// `ρ_{from→to}`: relabel every `from`-vertex to `to`.
    Rename {
        from: Label,
        to: Label,
        child: Box<ParseTree>,
    },
}

/// A join or rename sitting on the path between a union and a descendant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PathOp {
    Join(Label, Label),
    Rename(Label, Label),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("join η({a},{b}) would add edge {{{u}, {v}}} a second time")]
    RepeatedEdge {
        a: Label,
        b: Label,
        u: Vertex,
        v: Vertex,
    },
    #[error("join η({0},{0}) joins a label with itself")]
    SelfJoin(Label),
    #[error("label {0} outside 1..={max}", max = MAX_LABEL)]
    LabelOutOfRange(Label),
    #[error("union with {0} children; at least two are required")]
    ShortUnion(usize),
    #[error("vertex {0} appears in more than one leaf")]
    DuplicateVertex(Vertex),
    #[error("leaf vertices are not exactly 0..{n} (missing {missing})")]
    SparseVertices { n: usize, missing: Vertex },
}

/// An immediate significant descendant of a union node: the nearest leaf or
/// union below it, and the joins/renames passed on the way, listed bottom-up.
#[derive(Clone, Debug)]
pub struct Descendant<'a> {
    pub node: &'a ParseTree,
    pub path: Vec<PathOp>,
}

impl ParseTree {
    pub fn leaf(vertex: Vertex, label: Label) -> Self {
        ParseTree::Leaf { vertex, label }
    }

    pub fn join(a: Label, b: Label, child: ParseTree) -> Self {
        ParseTree::Join {
            a,
            b,
            child: Box::new(child),
        }
    }

    pub fn rename(from: Label, to: Label, child: ParseTree) -> Self {
        ParseTree::Rename {
            from,
            to,
            child: Box::new(child),
        }
    }

    /// Union of `children`, flattening nested unions and collapsing a
    /// single child.
    pub fn union(children: Vec<ParseTree>) -> Self {
        let mut flat = Vec::with_capacity(children.len());
        for c in children {
            match c {
                ParseTree::Union(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        if flat.len() == 1 {
            flat.pop().unwrap()
        } else {
            ParseTree::Union(flat)
        }
    }

    /// Wraps `self` in `ops`, applied in order (first op innermost).
    pub fn with_ops(self, ops: &[PathOp]) -> Self {
        ops.iter().fold(self, |t, op| match *op {
            PathOp::Join(a, b) => ParseTree::join(a, b, t),
            PathOp::Rename(from, to) => ParseTree::rename(from, to, t),
        })
    }

    /// Merges every union child of a union into its parent.
    pub fn normalized(&self) -> ParseTree {
        match self {
            ParseTree::Leaf { .. } => self.clone(),
            ParseTree::Union(children) => {
                ParseTree::union(children.iter().map(|c| c.normalized()).collect())
            }
            ParseTree::Join { a, b, child } => ParseTree::join(*a, *b, child.normalized()),
            ParseTree::Rename { from, to, child } => {
                ParseTree::rename(*from, *to, child.normalized())
            }
        }
    }

    /// Vertices of the leaves below this node, in left-to-right order.
    pub fn vertices(&self) -> Vec<Vertex> {
        let mut out = Vec::new();
        self.collect_vertices(&mut out);
        out
    }

    fn collect_vertices(&self, out: &mut Vec<Vertex>) {
        match self {
            ParseTree::Leaf { vertex, .. } => out.push(*vertex),
            ParseTree::Union(cs) => cs.iter().for_each(|c| c.collect_vertices(out)),
            ParseTree::Join { child, .. } | ParseTree::Rename { child, .. } => {
                child.collect_vertices(out)
            }
        }
    }

    /// Number of leaves.
    pub fn size(&self) -> usize {
        match self {
            ParseTree::Leaf { .. } => 1,
            ParseTree::Union(cs) => cs.iter().map(|c| c.size()).sum(),
            ParseTree::Join { child, .. } | ParseTree::Rename { child, .. } => child.size(),
        }
    }

    /// Sorted set of labels carried by the generated graph.
    pub fn root_labels(&self) -> Vec<Label> {
        let mask = self.label_mask();
        (1..=MAX_LABEL).filter(|&l| mask & (1 << l) != 0).collect()
    }

    fn label_mask(&self) -> u8 {
        match self {
            ParseTree::Leaf { label, .. } => 1 << label,
            ParseTree::Union(cs) => cs.iter().fold(0, |m, c| m | c.label_mask()),
            ParseTree::Join { child, .. } => child.label_mask(),
            ParseTree::Rename { from, to, child } => {
                let m = child.label_mask();
                if m & (1 << from) != 0 {
                    (m & !(1 << from)) | (1 << to)
                } else {
                    m
                }
            }
        }
    }

    /// Every label appearing anywhere in the tree, sorted.
    pub fn labels_used(&self) -> Vec<Label> {
        let mut mask = 0u32;
        self.walk(&mut |t| match t {
            ParseTree::Leaf { label, .. } => mask |= 1 << label,
            ParseTree::Join { a, b, .. } => mask |= (1 << a) | (1 << b),
            ParseTree::Rename { from, to, .. } => mask |= (1 << from) | (1 << to),
            ParseTree::Union(_) => {}
        });
        (0..=8u8).filter(|&l| mask & (1 << l) != 0).collect()
    }

    fn walk(&self, f: &mut impl FnMut(&ParseTree)) {
        f(self);
        match self {
            ParseTree::Leaf { .. } => {}
            ParseTree::Union(cs) => cs.iter().for_each(|c| c.walk(f)),
            ParseTree::Join { child, .. } | ParseTree::Rename { child, .. } => child.walk(f),
        }
    }

    /// The first leaf or union reached from this node through joins and
    /// renames, with the operations passed (bottom-up).
    pub fn significant_top(&self) -> Descendant<'_> {
        let mut path = Vec::new();
        let mut node = self;
        loop {
            match node {
                ParseTree::Join { a, b, child } => {
                    path.push(PathOp::Join(*a, *b));
                    node = child;
                }
                ParseTree::Rename { from, to, child } => {
                    path.push(PathOp::Rename(*from, *to));
                    node = child;
                }
                _ => break,
            }
        }
        path.reverse();
        Descendant { node, path }
    }

    /// Immediate significant descendants of a union node; `None` for any
    /// other node kind.
    pub fn immediate_significant_descendants(&self) -> Option<Vec<Descendant<'_>>> {
        match self {
            ParseTree::Union(children) => {
                Some(children.iter().map(|c| c.significant_top()).collect())
            }
            _ => None,
        }
    }

    /// Evaluates the expression to the labeled graph it generates.
    pub fn eval(&self) -> Result<LabeledGraph, EvalError> {
        let verts = self.vertices();
        let n = verts.len();
        let mut seen = empty_set(n);
        for &v in &verts {
            if v >= n {
                let missing = (0..n).find(|&w| !seen.contains(w) && !verts.contains(&w));
                return Err(EvalError::SparseVertices {
                    n,
                    missing: missing.unwrap_or(n),
                });
            }
            if seen.put(v) {
                return Err(EvalError::DuplicateVertex(v));
            }
        }
        let mut state = EvalState {
            labels: vec![0; n],
            adj: vec![empty_set(n); n],
        };
        state.run(self)?;
        LabeledGraph::new(Graph::from_rows(state.adj), state.labels)
            .map_err(|_| EvalError::LabelOutOfRange(0))
    }
}

struct EvalState {
    labels: Vec<Label>,
    adj: Vec<FixedBitSet>,
}

fn check_label(l: Label) -> Result<(), EvalError> {
    if l == 0 || l > MAX_LABEL {
        Err(EvalError::LabelOutOfRange(l))
    } else {
        Ok(())
    }
}

impl EvalState {
    /// Evaluates `t`, returning the vertices it created.
    fn run(&mut self, t: &ParseTree) -> Result<Vec<Vertex>, EvalError> {
        match t {
            ParseTree::Leaf { vertex, label } => {
                check_label(*label)?;
                self.labels[*vertex] = *label;
                Ok(vec![*vertex])
            }
            ParseTree::Union(cs) => {
                if cs.len() < 2 {
                    return Err(EvalError::ShortUnion(cs.len()));
                }
                let mut all = Vec::new();
                for c in cs {
                    all.extend(self.run(c)?);
                }
                Ok(all)
            }
            ParseTree::Join { a, b, child } => {
                check_label(*a)?;
                check_label(*b)?;
                if a == b {
                    return Err(EvalError::SelfJoin(*a));
                }
                let vs = self.run(child)?;
                let side_a: Vec<_> = vs.iter().copied().filter(|&v| self.labels[v] == *a).collect();
                let side_b: Vec<_> = vs.iter().copied().filter(|&v| self.labels[v] == *b).collect();
                for &u in &side_a {
                    for &v in &side_b {
                        if self.adj[u].put(v) {
                            return Err(EvalError::RepeatedEdge {
                                a: *a,
                                b: *b,
                                u: u.min(v),
                                v: u.max(v),
                            });
                        }
                        self.adj[v].insert(u);
                    }
                }
                Ok(vs)
            }
            ParseTree::Rename { from, to, child } => {
                check_label(*from)?;
                check_label(*to)?;
                let vs = self.run(child)?;
                for &v in &vs {
                    if self.labels[v] == *from {
                        self.labels[v] = *to;
                    }
                }
                Ok(vs)
            }
        }
    }
}
