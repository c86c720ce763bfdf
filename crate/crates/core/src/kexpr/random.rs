use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ParseTree;
use crate::graph::{Label, MAX_LABEL};

const L: usize = MAX_LABEL as usize + 1;

struct Part {
    tree: ParseTree,
    count: [usize; L],
    /// `edge[a][b]`: some `a`-vertex is adjacent to some `b`-vertex.
    edge: [[bool; L]; L],
}

/// A random expression over `k` labels generating a graph on vertices
/// `0..n`. The same `(n, k, seed)` always yields the same tree, and the
/// tree never repeats a join on an already adjacent pair.
pub fn random_expression(n: usize, k: Label, seed: u64) -> ParseTree {
    assert!(n >= 1, "random_expression needs at least one vertex");
    assert!((1..=MAX_LABEL).contains(&k), "label budget {k} outside 1..={MAX_LABEL}");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool: Vec<Part> = (0..n)
        .map(|v| {
            let label = rng.random_range(1..=k);
            let mut count = [0; L];
            count[label as usize] = 1;
            Part {
                tree: ParseTree::leaf(v, label),
                count,
                edge: [[false; L]; L],
            }
        })
        .collect();
    pool.shuffle(&mut rng);

    while pool.len() > 1 {
        let arity = if pool.len() >= 3 && rng.random_bool(0.15) { 3 } else { 2 };
        let mut parts = Vec::with_capacity(arity);
        for _ in 0..arity {
            let i = rng.random_range(0..pool.len());
            parts.push(pool.swap_remove(i));
        }
        let mut merged = Part {
            tree: ParseTree::Union(Vec::new()),
            count: [0; L],
            edge: [[false; L]; L],
        };
        let mut children = Vec::with_capacity(arity);
        for p in parts {
            for a in 1..L {
                merged.count[a] += p.count[a];
                for b in 1..L {
                    merged.edge[a][b] |= p.edge[a][b];
                }
            }
            children.push(p.tree);
        }
        merged.tree = ParseTree::Union(children);
        let ops = rng.random_range(1..=3);
        for _ in 0..ops {
            if rng.random_bool(0.65) {
                try_join(&mut merged, k, &mut rng);
            } else {
                try_rename(&mut merged, k, &mut rng);
            }
        }
        pool.push(merged);
    }
    pool.pop().unwrap().tree
}

fn try_join(p: &mut Part, k: Label, rng: &mut ChaCha8Rng) {
    let k = k as usize;
    let pairs: Vec<(usize, usize)> = (1..=k)
        .flat_map(|a| (a + 1..=k).map(move |b| (a, b)))
        .filter(|&(a, b)| p.count[a] > 0 && p.count[b] > 0 && !p.edge[a][b])
        .collect();
    if let Some(&(a, b)) = pairs.choose(rng) {
        p.edge[a][b] = true;
        p.edge[b][a] = true;
        let child = std::mem::replace(&mut p.tree, ParseTree::Union(Vec::new()));
        p.tree = ParseTree::join(a as Label, b as Label, child);
    }
}

fn try_rename(p: &mut Part, k: Label, rng: &mut ChaCha8Rng) {
    let k = k as usize;
    let pairs: Vec<(usize, usize)> = (1..=k)
        .flat_map(|a| (1..=k).map(move |b| (a, b)))
        .filter(|&(a, b)| a != b && p.count[a] > 0)
        .collect();
    if let Some(&(from, to)) = pairs.choose(rng) {
        p.count[to] += p.count[from];
        p.count[from] = 0;
        for x in 1..L {
            let e = p.edge[from][x];
            p.edge[to][x] |= e;
            p.edge[x][to] |= e;
            p.edge[from][x] = false;
            p.edge[x][from] = false;
        }
        let child = std::mem::replace(&mut p.tree, ParseTree::Union(Vec::new()));
        p.tree = ParseTree::rename(from as Label, to as Label, child);
    }
}
