//! Graph file formats: a plain edge list (with optional vertex colors) and
//! graph6.

use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{ColoredGraph, Graph, GraphError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    /// `n m`, then `m` lines `u v`, plus optional `c v COLOR` lines.
    #[default]
    EdgeList,
    Graph6,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "edgelist" => Ok(Format::EdgeList),
            "graph6" => Ok(Format::Graph6),
            _ => Err(format!("unknown format '{s}' (expected edgelist or graph6)")),
        }
    }
}

/// 1-based position of the offending token.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        message: message.into(),
    }
}

/// A parsed input. `colors` is `Some` only when the file has color lines;
/// uncolored vertices then get color 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputGraph {
    pub graph: Graph,
    pub colors: Option<Vec<u32>>,
}

impl InputGraph {
    pub fn colored(&self) -> ColoredGraph {
        let colors = self.colors.clone().unwrap_or_else(|| vec![0; self.graph.n()]);
        ColoredGraph::new(self.graph.clone(), colors).expect("one color per vertex")
    }
}

pub fn read_graph(text: &str, format: Format) -> Result<InputGraph, ParseError> {
    match format {
        Format::EdgeList => parse_edge_list(text),
        Format::Graph6 => Ok(InputGraph {
            graph: parse_graph6(text)?,
            colors: None,
        }),
    }
}

/// Whitespace-separated tokens of a line with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    out
}

fn number<T: FromStr>(line: usize, (col, tok): (usize, &str), what: &str) -> Result<T, ParseError> {
    tok.parse()
        .map_err(|_| err(line, col, format!("expected {what}, found '{tok}'")))
}

/// Blank lines and lines starting with `#` are skipped.
pub fn parse_edge_list(text: &str) -> Result<InputGraph, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, tokens(l)))
        .filter(|(_, t)| !t.is_empty() && !t[0].1.starts_with('#'));
    let Some((hl, header)) = lines.next() else {
        return Err(err(1, 1, "empty input, expected 'n m'"));
    };
    if header.len() != 2 {
        return Err(err(hl, header[0].0, "expected 'n m'"));
    }
    let n: usize = number(hl, header[0], "vertex count")?;
    let m: usize = number(hl, header[1], "edge count")?;
    let mut edges = Vec::with_capacity(m);
    let mut colors: Option<Vec<u32>> = None;
    let mut last = (hl, header[1].0);
    let vertex = |line: usize, t: (usize, &str)| -> Result<usize, ParseError> {
        let v: usize = number(line, t, "vertex id")?;
        if v >= n {
            return Err(err(line, t.0, format!("vertex {v} out of range 0..{n}")));
        }
        Ok(v)
    };
    let mut seen = std::collections::HashSet::new();
    for (ln, toks) in lines {
        last = (ln, toks[0].0);
        if toks[0].1 == "c" {
            if toks.len() != 3 {
                return Err(err(ln, toks[0].0, "expected 'c VERTEX COLOR'"));
            }
            let v = vertex(ln, toks[1])?;
            let c: u32 = number(ln, toks[2], "color")?;
            colors.get_or_insert_with(|| vec![0; n])[v] = c;
            continue;
        }
        if toks.len() != 2 {
            return Err(err(ln, toks[0].0, "expected 'u v'"));
        }
        let (u, v) = (vertex(ln, toks[0])?, vertex(ln, toks[1])?);
        if u == v {
            return Err(err(ln, toks[0].0, format!("self-loop at vertex {u}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(err(ln, toks[0].0, format!("duplicate edge {u} {v}")));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(err(last.0, last.1, format!("header declares {m} edges, found {}", edges.len())));
    }
    let graph = Graph::from_edges(n, edges).map_err(|e: GraphError| err(hl, 1, e.to_string()))?;
    Ok(InputGraph { graph, colors })
}

pub fn write_edge_list(g: &Graph, colors: Option<&[u32]>) -> String {
    let mut s = format!("{} {}\n", g.n(), g.m());
    for &(u, v) in g.edges() {
        writeln!(s, "{u} {v}").unwrap();
    }
    if let Some(c) = colors {
        for (v, c) in c.iter().enumerate() {
            writeln!(s, "c {v} {c}").unwrap();
        }
    }
    s
}

const HEADER: &str = ">>graph6<<";

/// Reads the first non-blank line; an optional `>>graph6<<` prefix is
/// accepted.
pub fn parse_graph6(text: &str) -> Result<Graph, ParseError> {
    let Some((ln, raw)) = text.lines().enumerate().find(|(_, l)| !l.trim().is_empty()) else {
        return Err(err(1, 1, "empty input"));
    };
    let line = ln + 1;
    let lead = raw.len() - raw.trim_start().len();
    let mut body = raw.trim();
    let mut offset = lead;
    if let Some(rest) = body.strip_prefix(HEADER) {
        body = rest;
        offset += HEADER.len();
    }
    let bytes = body.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(err(line, offset + i + 1, format!("invalid graph6 byte 0x{b:02x}")));
        }
    }
    let word = |at: usize, len: usize| -> Result<usize, ParseError> {
        if bytes.len() < at + len {
            return Err(err(line, offset + bytes.len() + 1, "truncated vertex count"));
        }
        Ok(bytes[at..at + len].iter().fold(0, |acc, &b| acc << 6 | (b - 63) as usize))
    };
    let (n, start) = match bytes {
        [] => return Err(err(line, offset + 1, "missing vertex count")),
        [126, 126, ..] => (word(2, 6)?, 8),
        [126, ..] => (word(1, 3)?, 4),
        [b, ..] => ((b - 63) as usize, 1),
    };
    let bits = n * n.saturating_sub(1) / 2;
    let need = bits.div_ceil(6);
    let data = &bytes[start..];
    if data.len() != need {
        return Err(err(
            line,
            offset + start + data.len().min(need) + 1,
            format!("expected {need} data bytes for {n} vertices, found {}", data.len()),
        ));
    }
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if (data[k / 6] - 63) >> (5 - k % 6) & 1 == 1 {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    if k % 6 != 0 && (data[k / 6] - 63) & ((1 << (6 - k % 6)) - 1) != 0 {
        return Err(err(line, offset + start + k / 6 + 1, "nonzero padding bits"));
    }
    Ok(Graph::from_edges(n, edges).expect("upper triangle has no loops or repeats"))
}

pub fn to_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out: Vec<u8> = Vec::new();
    let push_word = |out: &mut Vec<u8>, x: usize, len: usize| {
        for i in (0..len).rev() {
            out.push((x >> (6 * i) & 63) as u8 + 63);
        }
    };
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        push_word(&mut out, n, 3);
    } else {
        out.extend([126, 126]);
        push_word(&mut out, n, 6);
    }
    let (mut acc, mut len) = (0u8, 0);
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i, j) as u8;
            len += 1;
            if len == 6 {
                out.push(acc + 63);
                (acc, len) = (0, 0);
            }
        }
    }
    if len > 0 {
        out.push((acc << (6 - len)) + 63);
    }
    String::from_utf8(out).expect("graph6 is ASCII")
}
