use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use cw3iso::chlrr::{build_labg, decompose, DecomposeOutcome};
use cw3iso::decomposition::{modular_decomposition, skeleton, MdKind, MdTree};
use cw3iso::engine::{iso_cw3_with, IsoResult};
use cw3iso::graph::{LabeledGraph, MAX_LABEL};
use cw3iso::io::{read_graph, write_edge_list, Format, InputGraph};
use cw3iso::kexpr::{parse_text, random_expression, KExpr};

const EXIT_NON_ISO: u8 = 1;
const EXIT_CWE: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_PARSE: u8 = 65;
const EXIT_NO_INPUT: u8 = 66;

#[derive(Parser)]
#[command(name = "cw3iso", version, about = "Isomorphism testing for graphs of clique-width at most three")]
struct Cli {
    /// Input graph format.
    #[arg(long, global = true, default_value = "edgelist")]
    format: Format,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for the isomorphism engine.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide whether two graphs are isomorphic.
    Iso {
        g: PathBuf,
        h: PathBuf,
        /// Print the vertex bijection when isomorphic.
        #[arg(long)]
        witness: bool,
    },
    /// Evaluate a k-expression file to a labeled graph.
    Eval { expr: PathBuf },
    /// Find a k-expression with at most four labels for a graph.
    Decompose { graph: PathBuf },
    /// Modular decomposition tree.
    Mdtree {
        graph: PathBuf,
        /// Graphviz output instead of JSON.
        #[arg(long)]
        dot: bool,
    },
    /// Split decomposition skeleton of a connected graph.
    Skeleton { graph: PathBuf },
    /// Candidate bilabelings and trilabelings of a prime graph.
    Labg { graph: PathBuf },
    /// Print a random k-expression on n vertices.
    GenExpr {
        n: usize,
        k: u8,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("CW3ISO_LOG")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("cw3iso: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| fail(EXIT_NO_INPUT, format!("{}: {e}", path.display())))
}

fn load(path: &Path, format: Format) -> Result<InputGraph, Failure> {
    read_graph(&read_text(path)?, format).map_err(|e| fail(EXIT_PARSE, format!("{}:{e}", path.display())))
}

fn to_json(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn run(cli: &Cli) -> Result<(String, u8), Failure> {
    match &cli.cmd {
        Cmd::Iso { g, h, witness } => {
            let (g, h) = (load(g, cli.format)?, load(h, cli.format)?);
            let result = iso_cw3_with(&g.colored(), &h.colored(), cli.threads.max(1));
            let code = match result {
                IsoResult::Isomorphic(_) => 0,
                IsoResult::NonIsomorphic => EXIT_NON_ISO,
                IsoResult::CliqueWidthExceeded => EXIT_CWE,
            };
            if cli.json {
                return Ok((to_json(&result), code));
            }
            let mut out = String::new();
            match &result {
                IsoResult::Isomorphic(w) => {
                    out.push_str("ISOMORPHIC\n");
                    if *witness {
                        for (u, v) in w.map.iter().enumerate() {
                            writeln!(out, "{u} {v}").unwrap();
                        }
                    }
                }
                IsoResult::NonIsomorphic => out.push_str("NON-ISOMORPHIC\n"),
                IsoResult::CliqueWidthExceeded => out.push_str("CLIQUEWIDTH-EXCEEDED\n"),
            }
            Ok((out, code))
        }
        Cmd::Eval { expr } => {
            let text = read_text(expr)?;
            let k = parse_text(&text).map_err(|e| fail(EXIT_PARSE, format!("{}:{e}", expr.display())))?;
            let a = k
                .tree
                .eval()
                .map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", expr.display())))?;
            Ok((labeled_output(&a, &k.names, cli.json), 0))
        }
        Cmd::Decompose { graph } => {
            let g = load(graph, cli.format)?.graph;
            if g.n() == 0 {
                return Err(fail(EXIT_PARSE, "cannot decompose the empty graph"));
            }
            let a = LabeledGraph::new(g.clone(), vec![1; g.n()]).expect("label 1 is valid");
            let outcome = decompose(&a).expect("non-empty");
            let code = match outcome {
                DecomposeOutcome::Tree(_) => 0,
                DecomposeOutcome::CliqueWidthExceeded => EXIT_CWE,
            };
            if cli.json {
                let v = match &outcome {
                    DecomposeOutcome::Tree(t) => json!({
                        "verdict": "tree",
                        "expression": KExpr::with_default_names(t.clone()).to_text(),
                    }),
                    DecomposeOutcome::CliqueWidthExceeded => json!({ "verdict": "clique_width_exceeded" }),
                };
                return Ok((to_json(&v), code));
            }
            let out = match outcome {
                DecomposeOutcome::Tree(t) => KExpr::with_default_names(t).to_text() + "\n",
                DecomposeOutcome::CliqueWidthExceeded => "CLIQUEWIDTH-EXCEEDED\n".to_string(),
            };
            Ok((out, code))
        }
        Cmd::Mdtree { graph, dot } => {
            let g = load(graph, cli.format)?.graph;
            if g.n() == 0 {
                return Err(fail(EXIT_PARSE, "empty graph has no modular decomposition"));
            }
            let md = modular_decomposition(&g);
            Ok((if *dot { md_dot(&md) } else { to_json(&md) }, 0))
        }
        Cmd::Skeleton { graph } => {
            let g = load(graph, cli.format)?.graph;
            let sk = skeleton(&g).map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", graph.display())))?;
            Ok((to_json(&sk), 0))
        }
        Cmd::Labg { graph } => {
            let g = load(graph, cli.format)?.graph;
            let cands = build_labg(&g).map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", graph.display())))?;
            let v: Vec<_> = cands
                .iter()
                .map(|c| json!({ "provenance": c.provenance, "labels": c.graph.labels() }))
                .collect();
            Ok((to_json(&v), 0))
        }
        Cmd::GenExpr { n, k, seed } => {
            if *n == 0 || !(1..=MAX_LABEL).contains(k) {
                return Err(fail(EXIT_USAGE, format!("need n >= 1 and 1 <= k <= {MAX_LABEL}")));
            }
            let t = random_expression(*n, *k, *seed);
            Ok((KExpr::with_default_names(t).to_text() + "\n", 0))
        }
    }
}

/// Edge list with one `# id name:label` comment per vertex, so the output
/// is itself a valid edge-list input.
fn labeled_output(a: &LabeledGraph, names: &[String], json: bool) -> String {
    if json {
        let vertices: Vec<_> = (0..a.n())
            .map(|v| json!({ "id": v, "name": names[v], "label": a.label(v) }))
            .collect();
        return to_json(&json!({ "n": a.n(), "edges": a.graph.edges(), "vertices": vertices }));
    }
    let mut out = write_edge_list(&a.graph, None);
    for (v, name) in names.iter().enumerate().take(a.n()) {
        writeln!(out, "# {v} {name}:{}", a.label(v)).unwrap();
    }
    out
}

fn md_dot(md: &MdTree) -> String {
    let mut out = String::from("graph mdtree {\n");
    for (i, node) in md.nodes.iter().enumerate() {
        let label = match node.kind {
            MdKind::Leaf(v) => v.to_string(),
            MdKind::Series => "series".into(),
            MdKind::Parallel => "parallel".into(),
            MdKind::Prime => "prime".into(),
        };
        writeln!(out, "  n{i} [label=\"{label}\"];").unwrap();
        for &c in &node.children {
            writeln!(out, "  n{i} -- n{c};").unwrap();
        }
    }
    out.push_str("}\n");
    out
}
