//! C interface. Graphs are opaque handles built edge by edge (or parsed
//! from text) and released with `cw3_graph_free`. Every call returns a
//! `Cw3Status`; on failure `cw3_last_error` describes the problem.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cw3iso::chlrr::{decompose, DecomposeOutcome};
use cw3iso::engine::{iso_cw3_colored, IsoResult};
use cw3iso::graph::{ColoredGraph, Graph, LabeledGraph};
use cw3iso::io::{read_graph, Format};
use cw3iso::kexpr::KExpr;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cw3Status {
    Ok = 0,
    NullPointer = 1,
    VertexOutOfRange = 2,
    SelfLoop = 3,
    DuplicateEdge = 4,
    ParseError = 5,
    InvalidUtf8 = 6,
    EmptyGraph = 7,
    Internal = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cw3Verdict {
    Isomorphic = 0,
    NonIsomorphic = 1,
    CliqueWidthExceeded = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cw3Format {
    EdgeList = 0,
    Graph6 = 1,
}

/// Opaque graph handle.
pub struct Cw3Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    colors: Vec<u32>,
}

impl Cw3Graph {
    fn colored(&self) -> ColoredGraph {
        let g = Graph::from_edges(self.n, self.edges.iter().copied()).expect("edges checked on insert");
        ColoredGraph::new(g, self.colors.clone()).expect("one color per vertex")
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn guard(f: impl FnOnce() -> Result<(), (Cw3Status, String)>) -> Cw3Status {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => Cw3Status::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal error");
            Cw3Status::Internal
        }
    }
}

fn null() -> (Cw3Status, String) {
    (Cw3Status::NullPointer, "null pointer argument".into())
}

/// Message for the most recent failure on this thread. Valid until the
/// next call on the same thread; never null.
#[no_mangle]
pub extern "C" fn cw3_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// A graph on `n` isolated vertices, all of color 0.
#[no_mangle]
pub extern "C" fn cw3_graph_new(n: usize) -> *mut Cw3Graph {
    Box::into_raw(Box::new(Cw3Graph {
        n,
        edges: Vec::new(),
        colors: vec![0; n],
    }))
}

/// # Safety
/// `g` is null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn cw3_graph_free(g: *mut Cw3Graph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cw3_graph_add_edge(g: *mut Cw3Graph, u: usize, v: usize) -> Cw3Status {
    guard(|| {
        let g = g.as_mut().ok_or_else(null)?;
        if u >= g.n || v >= g.n {
            return Err((Cw3Status::VertexOutOfRange, format!("edge {u} {v} outside 0..{}", g.n)));
        }
        if u == v {
            return Err((Cw3Status::SelfLoop, format!("self-loop at {u}")));
        }
        let e = (u.min(v), u.max(v));
        if g.edges.contains(&e) {
            return Err((Cw3Status::DuplicateEdge, format!("duplicate edge {u} {v}")));
        }
        g.edges.push(e);
        Ok(())
    })
}

/// # Safety
/// `g` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cw3_graph_set_color(g: *mut Cw3Graph, v: usize, color: u32) -> Cw3Status {
    guard(|| {
        let g = g.as_mut().ok_or_else(null)?;
        let slot = g
            .colors
            .get_mut(v)
            .ok_or_else(|| (Cw3Status::VertexOutOfRange, format!("vertex {v} outside 0..{}", g.n)))?;
        *slot = color;
        Ok(())
    })
}

/// # Safety
/// `g` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cw3_graph_vertex_count(g: *const Cw3Graph) -> usize {
    g.as_ref().map_or(0, |g| g.n)
}

/// Parses `text` (NUL-terminated) and stores a new handle in `*out`.
///
/// # Safety
/// `text` is null or a valid C string; `out` is null or writable.
#[no_mangle]
pub unsafe extern "C" fn cw3_graph_parse(text: *const c_char, format: Cw3Format, out: *mut *mut Cw3Graph) -> Cw3Status {
    guard(|| {
        if text.is_null() || out.is_null() {
            return Err(null());
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| (Cw3Status::InvalidUtf8, e.to_string()))?;
        let fmt = match format {
            Cw3Format::EdgeList => Format::EdgeList,
            Cw3Format::Graph6 => Format::Graph6,
        };
        let parsed = read_graph(s, fmt).map_err(|e| (Cw3Status::ParseError, e.to_string()))?;
        let n = parsed.graph.n();
        *out = Box::into_raw(Box::new(Cw3Graph {
            n,
            edges: parsed.graph.edges().to_vec(),
            colors: parsed.colors.unwrap_or_else(|| vec![0; n]),
        }));
        Ok(())
    })
}

/// Color-preserving isomorphism test. When the verdict is `Isomorphic`
/// and `witness` is not null, `witness[v]` receives the image of `v`; the
/// buffer must hold `cw3_graph_vertex_count(g)` entries.
///
/// # Safety
/// `g`, `h` are live handles, `verdict` is writable, and `witness` is null
/// or large enough.
#[no_mangle]
pub unsafe extern "C" fn cw3_iso(
    g: *const Cw3Graph,
    h: *const Cw3Graph,
    verdict: *mut Cw3Verdict,
    witness: *mut usize,
) -> Cw3Status {
    guard(|| {
        let (g, h) = (g.as_ref().ok_or_else(null)?, h.as_ref().ok_or_else(null)?);
        if verdict.is_null() {
            return Err(null());
        }
        *verdict = match iso_cw3_colored(&g.colored(), &h.colored()) {
            IsoResult::Isomorphic(w) => {
                if !witness.is_null() {
                    ptr::copy_nonoverlapping(w.map.as_ptr(), witness, w.map.len());
                }
                Cw3Verdict::Isomorphic
            }
            IsoResult::NonIsomorphic => Cw3Verdict::NonIsomorphic,
            IsoResult::CliqueWidthExceeded => Cw3Verdict::CliqueWidthExceeded,
        };
        Ok(())
    })
}

/// A k-expression for `g` (vertices named `v0, v1, ...`), stored in
/// `*out` and released with `cw3_string_free`. `*out` is set to null when
/// the graph has clique-width above three.
///
/// # Safety
/// `g` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cw3_decompose(g: *const Cw3Graph, out: *mut *mut c_char) -> Cw3Status {
    guard(|| {
        let g = g.as_ref().ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        if g.n == 0 {
            return Err((Cw3Status::EmptyGraph, "cannot decompose the empty graph".into()));
        }
        let a = LabeledGraph::new(g.colored().graph, vec![1; g.n]).expect("label 1 is valid");
        match decompose(&a).expect("non-empty") {
            DecomposeOutcome::Tree(t) => {
                let text = KExpr::with_default_names(t).to_text();
                *out = CString::new(text).expect("no interior nul").into_raw();
            }
            DecomposeOutcome::CliqueWidthExceeded => *out = ptr::null_mut(),
        }
        Ok(())
    })
}

/// # Safety
/// `s` is null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cw3_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
