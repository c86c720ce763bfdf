use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::graph::{empty_set, full_set, set_from, Graph, Vertex};

/// A bipartition `(A, B)` whose cross edges form a complete biclique
/// between the frontiers `Ã = A ∩ N(B)` and `B̃ = B ∩ N(A)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Split {
    pub a: FixedBitSet,
    pub b: FixedBitSet,
    pub a_frontier: FixedBitSet,
    pub b_frontier: FixedBitSet,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SplitError {
    #[error("graph is disconnected")]
    Disconnected,
}

impl Split {
    pub fn from_parts(
        n: usize,
        a: &[Vertex],
        b: &[Vertex],
        a_frontier: &[Vertex],
        b_frontier: &[Vertex],
    ) -> Self {
        Split {
            a: set_from(n, a.iter().copied()),
            b: set_from(n, b.iter().copied()),
            a_frontier: set_from(n, a_frontier.iter().copied()),
            b_frontier: set_from(n, b_frontier.iter().copied()),
        }
    }

    /// The split with side `a` if `(a, V \ a)` is one.
    pub fn from_side(g: &Graph, a: &FixedBitSet) -> Option<Split> {
        let n = g.n();
        let mut b = full_set(n);
        b.difference_with(a);
        let frontier = |side: &FixedBitSet, other: &FixedBitSet| {
            let mut f = empty_set(n);
            for v in side.ones() {
                if !g.neighbors(v).is_disjoint(other) {
                    f.insert(v);
                }
            }
            f
        };
        let a_frontier = frontier(a, &b);
        let b_frontier = frontier(&b, a);
        let ok = a_frontier.ones().all(|u| {
            let mut hit = g.neighbors(u).clone();
            hit.intersect_with(&b);
            hit == b_frontier
        });
        ok.then(|| Split {
            a: a.clone(),
            b,
            a_frontier,
            b_frontier,
        })
    }

    pub fn a_side(&self) -> Vec<Vertex> {
        self.a.ones().collect()
    }

    pub fn b_side(&self) -> Vec<Vertex> {
        self.b.ones().collect()
    }

    pub fn is_proper(&self) -> bool {
        self.a.count_ones(..) >= 2 && self.b.count_ones(..) >= 2
    }

    /// Checks the defining properties against `g`.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        let n = g.n();
        if self.a.len() != n || !self.a.is_disjoint(&self.b) {
            return false;
        }
        if self.a.count_ones(..) + self.b.count_ones(..) != n
            || self.a.count_ones(..) == 0
            || self.b.count_ones(..) == 0
        {
            return false;
        }
        Split::from_side(g, &self.a).is_some_and(|s| s == *self)
    }

    /// The same split with the side containing vertex 0 first.
    pub fn normalized(&self) -> Split {
        if self.a.contains(0) {
            self.clone()
        } else {
            Split {
                a: self.b.clone(),
                b: self.a.clone(),
                a_frontier: self.b_frontier.clone(),
                b_frontier: self.a_frontier.clone(),
            }
        }
    }
}

fn place(
    x: Vertex,
    side_a: bool,
    in_a: &mut FixedBitSet,
    in_b: &mut FixedBitSet,
    queue: &mut Vec<(Vertex, bool)>,
) -> bool {
    let (mine, theirs) = if side_a { (in_a, in_b) } else { (in_b, in_a) };
    if theirs.contains(x) {
        return false;
    }
    if !mine.put(x) {
        queue.push((x, side_a));
    }
    true
}

/// Smallest side `A` containing `seeds` and `u`, for a split whose cross
/// edge `uv` has `v` on the other side. Every vertex left unforced goes to
/// `B`. `None` when the seeds force a contradiction.
fn forced_side(g: &Graph, u: Vertex, v: Vertex, seeds: &[Vertex]) -> Option<FixedBitSet> {
    let n = g.n();
    let mut in_a = empty_set(n);
    let mut in_b = empty_set(n);
    let mut queue: Vec<(Vertex, bool)> = Vec::new();
    if !place(u, true, &mut in_a, &mut in_b, &mut queue) || !place(v, false, &mut in_a, &mut in_b, &mut queue) {
        return None;
    }
    for &s in seeds {
        if !place(s, true, &mut in_a, &mut in_b, &mut queue) {
            return None;
        }
    }
    while let Some((w, side_a)) = queue.pop() {
        // a frontier vertex sees exactly what the anchor sees across the cut;
        // any other vertex sees nothing across it
        let (anchor, far_anchor) = if side_a { (u, v) } else { (v, u) };
        let forced: FixedBitSet = if w == anchor {
            continue;
        } else if g.has_edge(w, far_anchor) {
            let mut d = g.neighbors(anchor).clone();
            d.symmetric_difference_with(g.neighbors(w));
            d.set(anchor, false);
            d.set(w, false);
            d
        } else {
            g.neighbors(w).clone()
        };
        for x in forced.ones() {
            if !place(x, side_a, &mut in_a, &mut in_b, &mut queue) {
                return None;
            }
        }
    }
    Some(in_a)
}

/// Some proper split of a connected graph, or `None` when the graph has
/// none. Candidates are tried edge by edge in lexicographic order, so the
/// answer is deterministic.
pub fn find_proper_split(g: &Graph) -> Result<Option<Split>, SplitError> {
    if !g.is_connected() {
        return Err(SplitError::Disconnected);
    }
    let n = g.n();
    if n < 4 {
        return Ok(None);
    }
    for &(x, y) in g.edges() {
        for (u, v) in [(x, y), (y, x)] {
            for w in 0..n {
                if w == u || w == v {
                    continue;
                }
                if let Some(a) = forced_side(g, u, v, &[w]) {
                    if n - a.count_ones(..) >= 2 {
                        let split = Split::from_side(g, &a)
                            .expect("forced sides satisfy the split condition");
                        return Ok(Some(split));
                    }
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_has_the_middle_split() {
        let p4 = Graph::path(4);
        let s = find_proper_split(&p4).unwrap().unwrap();
        assert!(s.is_valid_for(&p4) && s.is_proper());
        let s = s.normalized();
        assert_eq!(s.a_side(), vec![0, 1]);
        assert_eq!(s.a_frontier.ones().collect::<Vec<_>>(), vec![1]);
        assert_eq!(s.b_frontier.ones().collect::<Vec<_>>(), vec![2]);
    }

    #[test]
    fn five_cycle_has_none() {
        assert_eq!(find_proper_split(&Graph::cycle(5)).unwrap(), None);
    }

    #[test]
    fn complete_graph_splits() {
        let k4 = Graph::complete(4);
        let s = find_proper_split(&k4).unwrap().unwrap();
        assert!(s.is_valid_for(&k4) && s.is_proper());
    }

    #[test]
    fn disconnected_is_an_error() {
        assert_eq!(find_proper_split(&Graph::empty(4)), Err(SplitError::Disconnected));
    }

    #[test]
    fn from_side_rejects_non_splits() {
        let c5 = Graph::cycle(5);
        assert!(Split::from_side(&c5, &set_from(5, [0, 1])).is_none());
        let p4 = Graph::path(4);
        assert!(Split::from_side(&p4, &set_from(4, [0, 1])).is_some());
    }
}
