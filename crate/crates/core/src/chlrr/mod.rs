//! Candidate labelings of prime graphs and their decomposition into parse
//! trees using at most four labels.

mod cases;
mod decomposer;
mod labg;

use serde::Serialize;
use thiserror::Error;

pub use cases::{
    cocomponents, decompose_leaf_bi, decompose_leaf_d, decompose_leaf_ti, decompose_leaf_u,
    fresh_labels, membership_d, membership_u, pc1, pc2, pc2_set, pc3, v_all, Applied, Case, Step,
};
pub use decomposer::{Decomposer, Stats};
pub use labg::{build_labg, pair_labelings, CandidateLabeling, LabgError, Provenance};

use crate::graph::LabeledGraph;
use crate::kexpr::ParseTree;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "verdict", content = "tree")]
pub enum DecomposeOutcome {
    Tree(ParseTree),
    /// No parse tree with at most three labels at the top was found.
    CliqueWidthExceeded,
}

impl DecomposeOutcome {
    pub fn tree(self) -> Option<ParseTree> {
        match self {
            DecomposeOutcome::Tree(t) => Some(t),
            DecomposeOutcome::CliqueWidthExceeded => None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecomposeError {
    #[error("cannot decompose the empty graph")]
    Empty,
}

/// A parse tree `t` with `eval(t) == a`, using labels `1..=4`.
pub fn decompose(a: &LabeledGraph) -> Result<DecomposeOutcome, DecomposeError> {
    if a.n() == 0 {
        return Err(DecomposeError::Empty);
    }
    let tree = Decomposer::new().run(a, &vec![0; a.n()]);
    Ok(tree.map_or(DecomposeOutcome::CliqueWidthExceeded, DecomposeOutcome::Tree))
}

/// The trees of every candidate that decomposes.
pub fn build_parse_trees(cands: &[CandidateLabeling]) -> Vec<ParseTree> {
    let mut d = Decomposer::new();
    cands
        .iter()
        .filter_map(|c| d.run(&c.graph, &vec![0; c.graph.n()]))
        .collect()
}
