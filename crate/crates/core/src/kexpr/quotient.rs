use super::PathOp;
use crate::graph::Label;

/// Colored quotient graph of a descendant: one vertex per label of the
/// descendant's graph, colored by the label that vertex class carries once
/// the path operations have been applied.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuotientGraph {
    /// Original labels, sorted; vertex `i` stands for `vertices[i]`.
    pub vertices: Vec<Label>,
    /// Current color of each vertex.
    pub colors: Vec<Label>,
    /// `adj[i]` has bit `j` set when vertices `i` and `j` are adjacent.
    pub adj: Vec<u8>,
}

impl QuotientGraph {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i] & (1 << j) != 0
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// Index of the vertex standing for `label`, if any.
    pub fn index_of(&self, label: Label) -> Option<usize> {
        self.vertices.iter().position(|&l| l == label)
    }
}

/// Builds the colored quotient graph for a descendant whose graph carries
/// `labels`, replaying `path` bottom-up: joins connect every pair of
/// vertices whose current colors are the joined labels, renames recolor.
pub fn quotient_graph(labels: &[Label], path: &[PathOp]) -> QuotientGraph {
    let mut vertices = labels.to_vec();
    vertices.sort_unstable();
    vertices.dedup();
    let mut colors = vertices.clone();
    let mut adj = vec![0u8; vertices.len()];
    for op in path {
        match *op {
            PathOp::Join(a, b) => {
                for i in 0..vertices.len() {
                    for j in 0..vertices.len() {
                        if colors[i] == a && colors[j] == b {
                            adj[i] |= 1 << j;
                            adj[j] |= 1 << i;
                        }
                    }
                }
            }
            PathOp::Rename(from, to) => {
                for c in colors.iter_mut() {
                    if *c == from {
                        *c = to;
                    }
                }
            }
        }
    }
    QuotientGraph {
        vertices,
        colors,
        adj,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_vertex() {
        let q = quotient_graph(&[1], &[]);
        assert_eq!(q.len(), 1);
        assert_eq!(q.colors, vec![1]);
        assert_eq!(q.edge_count(), 0);
    }

    #[test]
    fn join_then_rename() {
        let q = quotient_graph(&[1, 2], &[PathOp::Join(1, 2), PathOp::Rename(1, 3)]);
        assert_eq!(q.len(), 2);
        assert_eq!(q.edge_count(), 1);
        assert_eq!(q.colors, vec![3, 2]);
    }

    #[test]
    fn join_leaves_third_label_isolated() {
        let q = quotient_graph(&[1, 2, 3], &[PathOp::Join(1, 2)]);
        assert!(q.has_edge(0, 1));
        assert_eq!(q.edge_count(), 1);
        assert_eq!(q.colors, vec![1, 2, 3]);
    }

    #[test]
    fn rename_merges_classes_for_later_joins() {
        // labels 1,2 both become 2, then joined to 3
        let q = quotient_graph(
            &[1, 2, 3],
            &[PathOp::Rename(1, 2), PathOp::Join(2, 3)],
        );
        assert!(q.has_edge(0, 2) && q.has_edge(1, 2) && !q.has_edge(0, 1));
        assert_eq!(q.colors, vec![2, 2, 3]);
    }
}
