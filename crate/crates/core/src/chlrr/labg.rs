use fixedbitset::FixedBitSet;
use serde::Serialize;
use thiserror::Error;

use crate::decomposition::{skeleton, ComponentKind};
use crate::graph::{set_from, Graph, LabeledGraph, Vertex};

/// Where a candidate labeling came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case", tag = "rule")]
pub enum Provenance {
    /// `{v}` against the rest.
    B1 { vertex: Vertex },
    /// `{x ∈ N(v) | N[x] ⊆ N[v]}` against the rest.
    B2 { vertex: Vertex },
    /// The vertices a clique component of the skeleton stands for.
    B3 { component: usize },
    /// The real center of a star component.
    B4 { component: usize, vertex: Vertex },
    /// Frontiers of the split at a marker edge; `flipped` swaps which
    /// frontier gets label 1.
    T1 { marker_edge: usize, flipped: bool },
    /// `{u, v}` against the rest; a fallback family tried after the others.
    Pair { u: Vertex, v: Vertex },
}

/// A bilabeling (labels 1 inside, 2 outside) or trilabeling (labels 1 and
/// 2 on the two frontiers, 3 on the rest) of a prime graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CandidateLabeling {
    pub graph: LabeledGraph,
    pub provenance: Provenance,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LabgError {
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph is not prime")]
    NotPrime,
    #[error("graph has fewer than four vertices")]
    TooSmall,
}

/// The candidate set for a connected prime graph, in a fixed order: B1 and
/// B2 per vertex, then T1 (both orientations) per marker edge, B3 per
/// clique component and B4 per star center.
pub fn build_labg(g: &Graph) -> Result<Vec<CandidateLabeling>, LabgError> {
    let n = g.n();
    if n < 4 {
        return Err(LabgError::TooSmall);
    }
    if !g.is_connected() {
        return Err(LabgError::Disconnected);
    }
    if !g.is_prime() {
        return Err(LabgError::NotPrime);
    }
    let mut out = Vec::new();
    let bi = |x: &FixedBitSet, provenance| CandidateLabeling {
        graph: LabeledGraph::bilabeling(g.clone(), x, 1, 2),
        provenance,
    };
    for v in 0..n {
        out.push(bi(&set_from(n, [v]), Provenance::B1 { vertex: v }));
        let nv = g.closed_neighborhood(v);
        let dominated = set_from(
            n,
            g.neighbors(v).ones().filter(|&x| g.closed_neighborhood(x).is_subset(&nv)),
        );
        if dominated.count_ones(..) > 0 {
            out.push(bi(&dominated, Provenance::B2 { vertex: v }));
        }
    }
    let sk = skeleton(g).expect("connected");
    for (i, s) in sk.special_splits(g).into_iter().enumerate() {
        for flipped in [false, true] {
            let (one, two) = if flipped {
                (&s.b_frontier, &s.a_frontier)
            } else {
                (&s.a_frontier, &s.b_frontier)
            };
            let labels = (0..n)
                .map(|v| if one.contains(v) { 1 } else if two.contains(v) { 2 } else { 3 })
                .collect();
            out.push(CandidateLabeling {
                graph: LabeledGraph::new(g.clone(), labels).expect("labels are in range"),
                provenance: Provenance::T1 { marker_edge: i, flipped },
            });
        }
    }
    for (ci, c) in sk.components.iter().enumerate() {
        if matches!(c.kind, ComponentKind::Clique) {
            out.push(bi(&sk.frontier_expansion(ci), Provenance::B3 { component: ci }));
        }
    }
    for (ci, v) in sk.special_centers() {
        out.push(bi(&set_from(n, [v]), Provenance::B4 { component: ci, vertex: v }));
    }
    out.retain(|c| c.graph.label_set().len() >= 2);
    Ok(out)
}

/// Bilabelings `{u, v}` for every pair of vertices. Some prime graphs of
/// clique-width three (the smallest have eight vertices) have no candidate
/// in [`build_labg`] that decomposes but do have one here.
pub fn pair_labelings(g: &Graph) -> Vec<CandidateLabeling> {
    let n = g.n();
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            out.push(CandidateLabeling {
                graph: LabeledGraph::bilabeling(g.clone(), &set_from(n, [u, v]), 1, 2),
                provenance: Provenance::Pair { u, v },
            });
        }
    }
    out
}
