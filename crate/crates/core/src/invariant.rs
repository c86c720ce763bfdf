//! Isomorphism-invariant hashing by color refinement. Used to put choices
//! in an order that does not depend on vertex numbering.

use crate::graph::Graph;

const SEED: u64 = 0x9e37_79b9_7f4a_7c15;

/// Order-dependent combination of two words (splitmix64 finalizer).
pub fn mix(a: u64, b: u64) -> u64 {
    let mut z = a ^ b.wrapping_add(SEED).wrapping_add(a << 6).wrapping_add(a >> 2);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn mix_all(start: u64, words: impl IntoIterator<Item = u64>) -> u64 {
    words.into_iter().fold(start, mix)
}

/// Hash of a multiset of words.
pub fn multiset(words: impl IntoIterator<Item = u64>) -> u64 {
    let mut w: Vec<u64> = words.into_iter().collect();
    w.sort_unstable();
    mix_all(w.len() as u64, w)
}

/// Stable vertex colors: refine `initial` by neighbor color multisets
/// until the number of classes stops growing.
pub fn refine(g: &Graph, initial: &[u64]) -> Vec<u64> {
    let n = g.n();
    let mut colors = initial.to_vec();
    let mut classes = count_classes(&colors);
    for _ in 0..n {
        let next: Vec<u64> = (0..n)
            .map(|v| mix(colors[v], multiset(g.neighbors(v).ones().map(|u| colors[u]))))
            .collect();
        let k = count_classes(&next);
        colors = next;
        if k == classes {
            break;
        }
        classes = k;
    }
    colors
}

fn count_classes(colors: &[u64]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// Hash of a vertex-weighted graph; equal for isomorphic inputs.
pub fn graph_hash(g: &Graph, initial: &[u64]) -> u64 {
    multiset(refine(g, initial))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relabeling_does_not_change_the_hash() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (1, 4)]).unwrap();
        let h = g.permuted(&[3, 0, 4, 1, 2]);
        assert_eq!(graph_hash(&g, &[0; 5]), graph_hash(&h, &[0; 5]));
    }

    #[test]
    fn separates_path_from_star() {
        let p = Graph::path(4);
        let s = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_ne!(graph_hash(&p, &[0; 4]), graph_hash(&s, &[0; 4]));
    }
}
