//! The isomorphism test: modular decomposition reduces the problem to
//! colored prime graphs, which are compared through parse trees.

use std::collections::HashMap;
use std::rc::Rc;

use log::debug;
use serde::Serialize;

use crate::chlrr::{build_labg, pair_labelings, CandidateLabeling, Decomposer, Provenance};
use crate::decomposition::{modular_decomposition, MdKind, MdTree};
use crate::graph::{ColoredGraph, Graph, LabeledGraph, Vertex};
use crate::invariant::{graph_hash, mix};
use crate::kexpr::ParseTree;
use crate::oracle::Witness;
use crate::struct_iso::structurally_isomorphic_colored;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "verdict", content = "witness")]
pub enum IsoResult {
    /// `witness.map[v]` is the image of `v`.
    Isomorphic(Witness),
    NonIsomorphic,
    /// Some prime graph in the decomposition has no parse tree with at
    /// most three labels, so no verdict is given.
    CliqueWidthExceeded,
}

impl IsoResult {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoResult::Isomorphic(_))
    }
}

/// Marker for a prime graph outside the decomposable class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CliqueWidthExceeded;

pub fn iso_cw3(g: &Graph, h: &Graph) -> IsoResult {
    iso_cw3_colored(&ColoredGraph::uncolored(g.clone()), &ColoredGraph::uncolored(h.clone()))
}

/// Color-preserving isomorphism.
pub fn iso_cw3_colored(g: &ColoredGraph, h: &ColoredGraph) -> IsoResult {
    iso_cw3_with(g, h, 1)
}

/// As [`iso_cw3_colored`], decomposing candidate labelings on up to
/// `threads` threads. The verdict and witness do not depend on `threads`.
pub fn iso_cw3_with(g: &ColoredGraph, h: &ColoredGraph, threads: usize) -> IsoResult {
    if quick_reject(g, h) {
        return IsoResult::NonIsomorphic;
    }
    if g.n() == 0 {
        return IsoResult::Isomorphic(Witness { map: Vec::new() });
    }
    let mut reg = Registry {
        threads,
        ..Registry::default()
    };
    let sides = Side::new(g, &mut reg).and_then(|sg| Ok((sg, Side::new(h, &mut reg)?)));
    let (sg, sh) = match sides {
        Ok(s) => s,
        Err(CliqueWidthExceeded) => return IsoResult::CliqueWidthExceeded,
    };
    let (rg, rh) = (sg.md.root(), sh.md.root());
    if sg.ty[rg] != sh.ty[rh] {
        return IsoResult::NonIsomorphic;
    }
    let mut map = vec![usize::MAX; g.n()];
    map_nodes(&sg, rg, &sh, rh, &mut map);
    let w = Witness { map };
    assert!(w.validates_colored(g, h), "engine produced an invalid witness");
    IsoResult::Isomorphic(w)
}

fn quick_reject(g: &ColoredGraph, h: &ColoredGraph) -> bool {
    let profile = |x: &ColoredGraph| {
        let mut p: Vec<(u32, usize)> = (0..x.n()).map(|v| (x.color(v), x.graph.degree(v))).collect();
        p.sort_unstable();
        p
    };
    g.n() != h.n() || g.graph.m() != h.graph.m() || profile(g) != profile(h)
}

/// A colored prime graph with one chosen parse tree and lazily built
/// candidate trees for comparisons against it.
struct Prime {
    graph: ColoredGraph,
    weights: Vec<u64>,
    labg: Vec<CandidateLabeling>,
    decomposer: Decomposer,
    tree: ParseTree,
    key: u64,
    from_pairs: bool,
}

impl Prime {
    fn new(graph: ColoredGraph) -> Result<Prime, CliqueWidthExceeded> {
        let weights: Vec<u64> = graph.colors().iter().map(|&c| c as u64).collect();
        let labg = build_labg(&graph.graph).expect("prime quotients have at least four vertices");
        let mut decomposer = Decomposer::new();
        let mut chosen = None;
        for c in labg.iter().chain(pair_labelings(&graph.graph).iter()) {
            if let Some(t) = decomposer.run(&c.graph, &weights) {
                chosen = Some((c.clone(), t));
                break;
            }
        }
        let (c, tree) = chosen.ok_or(CliqueWidthExceeded)?;
        debug!("prime n={} chose {:?}", graph.n(), c.provenance);
        Ok(Prime {
            key: candidate_key(&c.graph, &weights),
            from_pairs: matches!(c.provenance, Provenance::Pair { .. }),
            graph,
            weights,
            labg,
            decomposer,
            tree,
        })
    }

    /// An isomorphism from `other` to `self`, found by matching the tree
    /// of `other` against every candidate tree of `self` with the same key.
    /// With several threads the candidates are split round-robin; the
    /// first success in candidate order wins either way.
    fn iso_from(&mut self, other: &Prime, threads: usize) -> Option<Vec<Vertex>> {
        let pairs = if other.from_pairs {
            pair_labelings(&self.graph.graph)
        } else {
            Vec::new()
        };
        let cands: Vec<&CandidateLabeling> = self
            .labg
            .iter()
            .chain(pairs.iter())
            .filter(|c| candidate_key(&c.graph, &self.weights) == other.key)
            .collect();
        if threads <= 1 || cands.len() <= 1 {
            let mut d = std::mem::take(&mut self.decomposer);
            let found = cands.iter().find_map(|c| self.try_candidate(&mut d, c, other));
            self.decomposer = d;
            return found;
        }
        let this = &*self;
        let found = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..threads.min(cands.len()))
                .map(|t| {
                    let cands = &cands;
                    scope.spawn(move || {
                        let mut d = Decomposer::new();
                        (t..cands.len())
                            .step_by(threads)
                            .find_map(|i| this.try_candidate(&mut d, cands[i], other).map(|w| (i, w)))
                    })
                })
                .collect();
            handles
                .into_iter()
                .filter_map(|h| h.join().expect("worker panicked"))
                .min_by_key(|(i, _)| *i)
        });
        found.map(|(_, w)| w)
    }

    fn try_candidate(&self, d: &mut Decomposer, c: &CandidateLabeling, other: &Prime) -> Option<Vec<Vertex>> {
        let t = d.run(&c.graph, &self.weights)?;
        let r = structurally_isomorphic_colored(&other.tree, other.graph.colors(), &t, self.graph.colors())?;
        let w = Witness { map: r.witness };
        w.validates_colored(&other.graph, &self.graph).then_some(w.map)
    }
}

fn candidate_key(a: &LabeledGraph, weights: &[u64]) -> u64 {
    let initial: Vec<u64> = (0..a.n()).map(|v| mix(weights[v], a.label(v) as u64)).collect();
    graph_hash(&a.graph, &initial)
}

/// Isomorphism types of modules, shared by both inputs. A type is an
/// index; prime types keep a representative to compare new nodes against.
#[derive(Default)]
struct Registry {
    threads: usize,
    count: usize,
    leaves: HashMap<u32, usize>,
    composite: HashMap<(bool, Vec<usize>), usize>,
    primes: HashMap<u64, Vec<(usize, Rc<Prime>)>>,
}

impl Registry {
    fn fresh(&mut self) -> usize {
        self.count += 1;
        self.count - 1
    }

    fn leaf(&mut self, color: u32) -> usize {
        if let Some(&t) = self.leaves.get(&color) {
            return t;
        }
        let t = self.fresh();
        self.leaves.insert(color, t);
        t
    }

    fn composite(&mut self, series: bool, mut children: Vec<usize>) -> usize {
        children.sort_unstable();
        if let Some(&t) = self.composite.get(&(series, children.clone())) {
            return t;
        }
        let t = self.fresh();
        self.composite.insert((series, children), t);
        t
    }

    /// The type of a prime node, and a map from its quotient vertices to
    /// those of the type's representative.
    fn prime(&mut self, q: ColoredGraph) -> Result<(usize, Rc<Prime>, Vec<Vertex>), CliqueWidthExceeded> {
        let weights: Vec<u64> = q.colors().iter().map(|&c| c as u64).collect();
        let h = mix(mix(q.n() as u64, q.graph.m() as u64), graph_hash(&q.graph, &weights));
        let mut p = Prime::new(q)?;
        let bucket = self.primes.entry(h).or_default();
        for (t, rep) in bucket.iter() {
            if let Some(inv) = p.iso_from(rep, self.threads) {
                // `inv` maps representative vertices to ours; invert it.
                let mut to_rep = vec![0; inv.len()];
                for (r, &x) in inv.iter().enumerate() {
                    to_rep[x] = r;
                }
                return Ok((*t, rep.clone(), to_rep));
            }
        }
        let n = p.graph.n();
        let p = Rc::new(p);
        self.count += 1;
        let t = self.count - 1;
        self.primes.get_mut(&h).expect("bucket exists").push((t, p.clone()));
        Ok((t, p, (0..n).collect()))
    }
}

/// One input with the type of every node of its modular decomposition.
struct Side {
    md: MdTree,
    ty: Vec<usize>,
    /// For prime nodes, the map from quotient vertices to the vertices of
    /// the type representative.
    to_rep: Vec<Vec<Vertex>>,
}

impl Side {
    fn new(g: &ColoredGraph, reg: &mut Registry) -> Result<Side, CliqueWidthExceeded> {
        let md = modular_decomposition(&g.graph);
        let mut ty = vec![0; md.nodes.len()];
        let mut to_rep = vec![Vec::new(); md.nodes.len()];
        for (i, node) in md.nodes.iter().enumerate() {
            let child_types: Vec<usize> = node.children.iter().map(|&c| ty[c]).collect();
            ty[i] = match node.kind {
                MdKind::Leaf(v) => reg.leaf(g.color(v)),
                MdKind::Series => reg.composite(true, child_types),
                MdKind::Parallel => reg.composite(false, child_types),
                MdKind::Prime => {
                    let quotient = node.quotient.clone().expect("prime nodes have a quotient");
                    let colors = child_types.iter().map(|&t| t as u32).collect();
                    let q = ColoredGraph::new(quotient, colors).expect("one color per child");
                    let (t, _, map) = reg.prime(q)?;
                    to_rep[i] = map;
                    t
                }
            };
        }
        Ok(Side { md, ty, to_rep })
    }
}

/// Extends `map` with an isomorphism between the modules of `a` in `g`
/// and `b` in `h`, which have the same type.
fn map_nodes(g: &Side, a: usize, h: &Side, b: usize, map: &mut [Vertex]) {
    let (na, nb) = (g.md.node(a), h.md.node(b));
    match (na.kind, nb.kind) {
        (MdKind::Leaf(u), MdKind::Leaf(v)) => map[u] = v,
        (MdKind::Prime, MdKind::Prime) => {
            let mut from_rep = vec![0; nb.children.len()];
            for (j, &r) in h.to_rep[b].iter().enumerate() {
                from_rep[r] = j;
            }
            for (i, &ca) in na.children.iter().enumerate() {
                let cb = nb.children[from_rep[g.to_rep[a][i]]];
                map_nodes(g, ca, h, cb, map);
            }
        }
        _ => {
            let mut used = vec![false; nb.children.len()];
            for &ca in &na.children {
                let j = (0..nb.children.len())
                    .find(|&j| !used[j] && h.ty[nb.children[j]] == g.ty[ca])
                    .expect("children of equal types pair up");
                used[j] = true;
                map_nodes(g, ca, h, nb.children[j], map);
            }
        }
    }
}

/// Prime colored graphs on at least four vertices: a color-preserving
/// isomorphism from `g` to `h`, if any.
pub fn prime_iso_colored(g: &ColoredGraph, h: &ColoredGraph) -> Result<Option<Witness>, CliqueWidthExceeded> {
    let pg = Prime::new(g.clone())?;
    if quick_reject(g, h) {
        return Ok(None);
    }
    let mut ph = Prime::new(h.clone())?;
    Ok(ph.iso_from(&pg, 1).map(|map| Witness { map }))
}

/// Attaches a private pendant vertex `n + v` to every vertex `v`.
pub fn pendant_closure(g: &Graph) -> Graph {
    let n = g.n();
    let edges = g.edges().iter().copied().chain((0..n).map(|v| (v, n + v)));
    Graph::from_edges(2 * n, edges).expect("valid edges")
}
