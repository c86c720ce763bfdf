//! One PASS/FAIL line per acceptance criterion; exits non-zero if any fail.

mod common;

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::{compose, rename, sigma_from, sound};
use cw3iso::chlrr::{build_labg, decompose, DecomposeOutcome};
use cw3iso::decomposition::{modular_decomposition, MdKind};
use cw3iso::engine::{iso_cw3, pendant_closure, IsoResult};
use cw3iso::graph::{Graph, Label};
use cw3iso::kexpr::{parse_text, random_expression};
use cw3iso::oracle::{brute_cwd_le3, brute_iso, connected_graphs_up_to_iso, graphs_up_to_iso};
use cw3iso::struct_iso::{structurally_isomorphic, StructIso};
use rand::seq::SliceRandom;
use rand::Rng;

const C5: &str = "join(1,3; u(ren(3,2; join(2,3; u(join(1,2; u(a:1,b:2)), join(1,3; u(c:3,d:1))))), e:3))";

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn has_wide_prime(g: &Graph) -> bool {
    modular_decomposition(g)
        .nodes
        .iter()
        .filter(|n| n.kind == MdKind::Prime)
        .any(|n| !brute_cwd_le3(n.quotient.as_ref().unwrap()))
}

fn exhaustive_oracle_equivalence() -> Outcome {
    let mut r = common::rng(101);
    let (mut pairs, mut cwe) = (0usize, 0usize);
    for n in 1..=7 {
        let gs = connected_graphs_up_to_iso(n);
        let wide: Vec<bool> = gs.iter().map(has_wide_prime).collect();
        for (i, g) in gs.iter().enumerate() {
            let moved = g.permuted(&common::random_perm(n, &mut r));
            for (j, h) in std::iter::once((i, &moved)).chain(gs.iter().enumerate().skip(i + 1)) {
                pairs += 1;
                let got = iso_cw3(g, h);
                let expected = brute_iso(g, h).is_some();
                match got {
                    IsoResult::Isomorphic(w) => {
                        ensure(expected && w.validates(g, h), || format!("false or bad iso {g:?} {h:?}"))?
                    }
                    IsoResult::NonIsomorphic => ensure(!expected, || format!("missed iso {g:?} {h:?}"))?,
                    IsoResult::CliqueWidthExceeded => {
                        cwe += 1;
                        ensure(wide[i] || wide[j], || format!("unexplained verdict {g:?} {h:?}"))?
                    }
                }
            }
        }
    }
    Ok(format!("{pairs} pairs, {cwe} clique-width verdicts, all on wide prime quotients"))
}

fn positive_randomized() -> Outcome {
    let mut r = common::rng(102);
    for seed in 0..500u64 {
        let n = r.random_range(1..=60);
        let g = common::expression_graph(n, 1000 + seed);
        let h = g.permuted(&common::random_perm(n, &mut r));
        match iso_cw3(&g, &h) {
            IsoResult::Isomorphic(w) if w.validates(&g, &h) => {}
            other => return Err(format!("seed {seed} n {n}: {other:?}")),
        }
    }
    Ok("500/500 isomorphic with validating witnesses".into())
}

fn negative_randomized() -> Outcome {
    let mut r = common::rng(103);
    let mut done = 0;
    let mut seed = 0u64;
    while done < 200 {
        seed += 1;
        let n = r.random_range(2..=10);
        let g = common::expression_graph(n, 2000 + seed);
        let (u, v) = (r.random_range(0..n), r.random_range(0..n));
        if u == v {
            continue;
        }
        let h = common::with_edge_toggled(&g, u, v).permuted(&common::random_perm(n, &mut r));
        ensure(brute_iso(&g, &h).is_none(), || "oracle found an iso".into())?;
        ensure(iso_cw3(&g, &h) == IsoResult::NonIsomorphic, || format!("{g:?} vs {h:?}"))?;
        done += 1;
    }
    Ok("200/200 non-isomorphic".into())
}

fn decomposition_roundtrip() -> Outcome {
    let mut r = common::rng(104);
    let (mut tried, mut decomposed, mut max_label) = (0, 0, 0);
    let mut seed = 0u64;
    while tried < 1000 {
        seed += 1;
        let g = common::expression_graph(r.random_range(4..=60), 3000 + seed);
        for node in modular_decomposition(&g).nodes {
            if node.kind != MdKind::Prime || tried >= 1000 {
                continue;
            }
            let q = node.quotient.unwrap();
            let mut cands = build_labg(&q).map_err(|e| e.to_string())?;
            cands.shuffle(&mut r);
            for c in cands.iter().take(3) {
                if tried >= 1000 {
                    break;
                }
                tried += 1;
                if let DecomposeOutcome::Tree(t) = decompose(&c.graph).unwrap() {
                    decomposed += 1;
                    let labels = t.labels_used();
                    max_label = max_label.max(*labels.iter().max().unwrap());
                    ensure(labels.iter().all(|l| (1..=4).contains(l)), || format!("labels {labels:?}"))?;
                    ensure(t.eval().unwrap() == c.graph, || format!("roundtrip failed for {:?}", c.graph))?;
                }
            }
        }
    }
    Ok(format!("{tried} candidates, {decomposed} decomposed, all roundtrip, max label {max_label}"))
}

fn c5_fixture() -> Outcome {
    let k = parse_text(C5).map_err(|e| e.to_string())?;
    let a = k.tree.eval().map_err(|e| e.to_string())?;
    let cycle = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap();
    ensure(a.graph == cycle, || format!("not the 5-cycle: {:?}", a.graph))?;
    let labels: Vec<(String, Label)> = (0..5).map(|v| (k.names[v].clone(), a.label(v))).collect();
    let expected: Vec<(String, Label)> =
        [("a", 1), ("b", 2), ("c", 2), ("d", 1), ("e", 3)].iter().map(|&(s, l)| (s.into(), l)).collect();
    ensure(labels == expected, || format!("labels {labels:?}"))?;
    let rotated = cycle.permuted(&[1, 2, 3, 4, 0]);
    ensure(iso_cw3(&cycle, &rotated).is_isomorphic(), || "rotation not isomorphic".into())?;
    Ok("5-cycle, labels a:1 b:2 c:2 d:1 e:3, rotation isomorphic".into())
}

fn decomposition_structure() -> Outcome {
    let mut count = 0;
    for n in 1..=6 {
        for g in graphs_up_to_iso(n) {
            catch_unwind(|| common::md_matches_strong_modules(&g)).map_err(|_| format!("modules differ for {g:?}"))?;
            count += 1;
        }
    }
    let mut splits = 0;
    for n in 3..=8 {
        for g in connected_graphs_up_to_iso(n) {
            catch_unwind(|| common::skeleton_matches_splits(&g)).map_err(|_| format!("splits differ for {g:?}"))?;
            splits += 1;
        }
    }
    Ok(format!("{count} graphs for modules, {splits} connected graphs for splits, 0 discrepancies"))
}

fn equivalence_relation() -> Outcome {
    let mut r = common::rng(107);
    let mut labels = vec![1u8, 2, 3, 4];
    let mut copy = |t: &cw3iso::kexpr::ParseTree, r: &mut rand_chacha::ChaCha8Rng| {
        labels.shuffle(r);
        rename(t, &common::random_perm(t.size(), r), &sigma_from(&labels))
    };
    let mut unrelated_symmetric = 0;
    for i in 0..1000u64 {
        let t1 = random_expression(r.random_range(1..=40), 3, 4000 + i);
        let t2 = copy(&t1, &mut r);
        let t3 = copy(&t2, &mut r);
        let refl = structurally_isomorphic(&t1, &t1).ok_or("reflexivity")?;
        ensure(sound(&t1, &t1, &refl), || format!("triple {i}: reflexive witness"))?;
        let i12 = structurally_isomorphic(&t1, &t2).ok_or(format!("triple {i}: t1 vs t2"))?;
        let i21 = structurally_isomorphic(&t2, &t1).ok_or(format!("triple {i}: symmetry"))?;
        let i23 = structurally_isomorphic(&t2, &t3).ok_or(format!("triple {i}: t2 vs t3"))?;
        let i13 = structurally_isomorphic(&t1, &t3).ok_or(format!("triple {i}: transitivity"))?;
        let composed = StructIso {
            label_map: i12.label_map.then(&i23.label_map),
            witness: compose(&i12.witness, &i23.witness),
        };
        for (a, b, iso) in [(&t1, &t2, &i12), (&t2, &t1, &i21), (&t2, &t3, &i23), (&t1, &t3, &i13), (&t1, &t3, &composed)] {
            ensure(sound(a, b, iso), || format!("triple {i}: unsound map"))?;
        }
        let other = random_expression(t1.size(), 3, 9000 + i);
        let (ab, ba) = (structurally_isomorphic(&t1, &other), structurally_isomorphic(&other, &t1));
        ensure(ab.is_some() == ba.is_some(), || format!("triple {i}: asymmetric on unrelated trees"))?;
        unrelated_symmetric += 1;
    }
    Ok(format!("1000 triples, plus {unrelated_symmetric} unrelated pairs symmetric"))
}

fn pendant_lemma() -> Outcome {
    let mut r = common::rng(108);
    let mut pairs = 0;
    for n in 1..=6 {
        let gs = connected_graphs_up_to_iso(n);
        let closures: Vec<Graph> = gs.iter().map(pendant_closure).collect();
        for (i, g) in gs.iter().enumerate() {
            ensure(closures[i].is_prime(), || format!("closure of {g:?} not prime"))?;
            let moved = g.permuted(&common::random_perm(n, &mut r));
            let pm = pendant_closure(&moved);
            ensure(pm.is_prime() && brute_iso(&closures[i], &pm).is_some(), || format!("{g:?}"))?;
            pairs += 1;
            for (j, h) in gs.iter().enumerate().skip(i + 1) {
                let same = brute_iso(g, h).is_some();
                ensure(same == brute_iso(&closures[i], &closures[j]).is_some(), || format!("{g:?} {h:?}"))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} pairs, equivalence preserved, all closures prime"))
}

/// Least-squares slope of `ys` against `xs`.
fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let cov: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}

fn runtime_profile() -> Outcome {
    let mut r = common::rng(109);
    let sizes = [25usize, 50, 100, 200];
    let seeds = 5u64;
    let mut time_at: HashMap<usize, Duration> = HashMap::new();
    let mut bound_at: HashMap<usize, f64> = HashMap::new();
    let mut worst_100 = Duration::ZERO;
    for &n in &sizes {
        let mut times = Vec::new();
        let mut bounds = Vec::new();
        for s in 0..seeds {
            let g = common::expression_graph(n, 5000 + 100 * n as u64 + s);
            let h = g.permuted(&common::random_perm(n, &mut r));
            let start = Instant::now();
            let reps = if n <= 50 { 20 } else { 3 };
            for _ in 0..reps {
                ensure(iso_cw3(&g, &h).is_isomorphic(), || format!("n {n} seed {s} not isomorphic"))?;
            }
            let t = start.elapsed() / reps;
            if n == 100 {
                worst_100 = worst_100.max(t);
            }
            times.push(t);
            bounds.push((n as f64).powi(3) * g.m().max(1) as f64);
        }
        times.sort();
        time_at.insert(n, times[times.len() / 2]);
        bound_at.insert(n, bounds.iter().sum::<f64>() / bounds.len() as f64);
    }
    let xs: Vec<f64> = sizes.iter().map(|&n| (n as f64).ln()).collect();
    let measured = slope(&xs, &sizes.iter().map(|n| time_at[n].as_secs_f64().ln()).collect::<Vec<_>>());
    let claimed = slope(&xs, &sizes.iter().map(|n| bound_at[n].ln()).collect::<Vec<_>>());
    let summary = format!(
        "n=100 worst {:.3}s; log-log slope measured {measured:.2}, n^3*m {claimed:.2}",
        worst_100.as_secs_f64()
    );
    ensure(worst_100 <= Duration::from_secs(10), || summary.clone())?;
    ensure(measured <= claimed + 0.7, || format!("{summary}: grows faster than the bound"))?;
    Ok(summary)
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("exhaustive oracle equivalence, connected n<=7", exhaustive_oracle_equivalence),
        ("positive randomized suite, 500 permuted expression graphs", positive_randomized),
        ("negative randomized suite, 200 G vs G+-edge pairs", negative_randomized),
        ("decomposition roundtrip, 1000 candidates", decomposition_roundtrip),
        ("C5 fixture", c5_fixture),
        ("decomposition structure oracles", decomposition_structure),
        ("equivalence relation suite, 1000 tree triples", equivalence_relation),
        ("pendant reduction, connected n<=6", pendant_lemma),
        ("runtime profile", runtime_profile),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let results: Vec<(usize, Outcome, Duration)> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != 8)
            .map(|(i, (_, f))| {
                s.spawn(move || {
                    let start = Instant::now();
                    let out = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
                    (i, out, start.elapsed())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    // Timing runs alone so the other criteria do not skew it.
    let start = Instant::now();
    let last = catch_unwind(AssertUnwindSafe(runtime_profile)).unwrap_or_else(|_| Err("panicked".into()));
    let mut results = results;
    results.push((8, last, start.elapsed()));
    let mut failed = 0;
    for (i, out, took) in &results {
        let (tag, detail) = match out {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} [{}] {}: {detail} ({:.1}s)", i + 1, criteria[*i].0, took.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} of 9 criteria failed");
        std::process::exit(1);
    }
}
