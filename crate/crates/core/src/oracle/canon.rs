//! Canonical forms by individualization and refinement. Small and slow, but
//! exact; it only backs the test oracles and graph enumeration.

use crate::graph::Graph;

/// Canonical certificate of a vertex-colored graph: two colored graphs get
/// equal certificates iff they are isomorphic by a color-preserving map.
pub fn certificate(g: &Graph, colors: &[u32]) -> Vec<u64> {
    let n = g.n();
    let adj: Vec<Vec<bool>> = (0..n)
        .map(|u| (0..n).map(|v| g.has_edge(u, v)).collect())
        .collect();
    let mut palette: Vec<u32> = colors.to_vec();
    palette.sort_unstable();
    palette.dedup();
    let initial: Vec<usize> = colors
        .iter()
        .map(|c| palette.binary_search(c).unwrap())
        .collect();
    let mut best: Option<Vec<u64>> = None;
    search(&adj, refine(&adj, initial), &mut best);
    let mut cert = vec![n as u64];
    let mut sorted_colors = colors.to_vec();
    sorted_colors.sort_unstable();
    cert.extend(sorted_colors.iter().map(|&c| c as u64));
    cert.extend(best.unwrap_or_default());
    cert
}

/// Refines an ordered partition (cell index per vertex) until every vertex
/// of a cell sees each cell equally often. Cell indices stay ordered by the
/// signature, so the result is isomorphism-invariant.
fn refine(adj: &[Vec<bool>], mut cell: Vec<usize>) -> Vec<usize> {
    let n = cell.len();
    loop {
        let k = cell.iter().copied().max().map_or(0, |m| m + 1);
        let mut sigs: Vec<(usize, Vec<usize>, usize)> = (0..n)
            .map(|v| {
                let mut counts = vec![0usize; k];
                for u in 0..n {
                    if adj[v][u] {
                        counts[cell[u]] += 1;
                    }
                }
                (cell[v], counts, v)
            })
            .collect();
        sigs.sort();
        let mut next = vec![0; n];
        let mut idx = 0;
        for i in 0..n {
            if i > 0 && (sigs[i].0 != sigs[i - 1].0 || sigs[i].1 != sigs[i - 1].1) {
                idx += 1;
            }
            next[sigs[i].2] = idx;
        }
        if idx + 1 == k {
            return next;
        }
        cell = next;
    }
}

fn search(adj: &[Vec<bool>], cell: Vec<usize>, best: &mut Option<Vec<u64>>) {
    let n = cell.len();
    let k = cell.iter().copied().max().map_or(0, |m| m + 1);
    if k == n {
        let mut order = vec![0; n];
        for v in 0..n {
            order[cell[v]] = v;
        }
        let mut code = vec![0u64; (n * n).div_ceil(64)];
        for i in 0..n {
            for j in 0..n {
                if adj[order[i]][order[j]] {
                    let bit = i * n + j;
                    code[bit / 64] |= 1 << (bit % 64);
                }
            }
        }
        if best.as_ref().is_none_or(|b| code < *b) {
            *best = Some(code);
        }
        return;
    }
    // first non-singleton cell, smallest index
    let mut size = vec![0; k];
    for &c in &cell {
        size[c] += 1;
    }
    let target = (0..k).find(|&c| size[c] > 1).unwrap();
    for v in 0..n {
        if cell[v] != target {
            continue;
        }
        // individualize v: it stays in `target`, the rest of the cell moves up
        let next: Vec<usize> = (0..n)
            .map(|u| {
                if cell[u] > target || (cell[u] == target && u != v) {
                    cell[u] + 1
                } else {
                    cell[u]
                }
            })
            .collect();
        search(adj, refine(adj, next), best);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isomorphic_graphs_share_certificates() {
        let p = Graph::path(5);
        let q = p.permuted(&[3, 0, 4, 1, 2]);
        assert_eq!(certificate(&p, &[0; 5]), certificate(&q, &[0; 5]));
        let c = Graph::cycle(5);
        assert_ne!(certificate(&p, &[0; 5]), certificate(&c, &[0; 5]));
    }

    #[test]
    fn colors_matter() {
        let p = Graph::path(3);
        assert_eq!(certificate(&p, &[1, 0, 0]), certificate(&p, &[0, 0, 1]));
        assert_ne!(certificate(&p, &[1, 0, 0]), certificate(&p, &[0, 1, 0]));
    }

    #[test]
    fn regular_graphs_are_told_apart() {
        let c6 = Graph::cycle(6);
        let two_k3 = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert_ne!(certificate(&c6, &[0; 6]), certificate(&two_k3, &[0; 6]));
    }
}
