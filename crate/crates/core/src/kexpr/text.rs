//! Concrete syntax for clique-width expressions.
//!
//! ```text
//! expr   := leaf | union | join | rename
//! leaf   := NAME ":" LABEL
//! union  := "u(" expr ("," expr)+ ")"
//! join   := "join(" LABEL "," LABEL ";" expr ")"
//! rename := "ren(" LABEL "," LABEL ";" expr ")"
//! ```
//!
//! Leaf names are mapped to dense vertex ids in order of first appearance.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use super::ParseTree;
use crate::graph::{Label, Vertex, MAX_LABEL};

/// A parse tree together with the external names of its vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KExpr {
    pub tree: ParseTree,
    /// `names[v]` is the name of vertex `v`.
    pub names: Vec<String>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl KExpr {
    /// Names vertices `v0, v1, ...`.
    pub fn with_default_names(tree: ParseTree) -> Self {
        let n = tree.vertices().into_iter().max().map_or(0, |m| m + 1);
        let names = (0..n).map(|v| format!("v{v}")).collect();
        KExpr { tree, names }
    }

    pub fn to_text(&self) -> String {
        to_text(&self.tree, &self.names)
    }

    /// Renumbers vertices by order of first appearance, permuting names
    /// along. This is the form `parse_text` produces.
    pub fn canonical_ids(&self) -> KExpr {
        let order = self.tree.vertices();
        let mut new_id = vec![usize::MAX; order.iter().copied().max().map_or(0, |m| m + 1)];
        for (i, &v) in order.iter().enumerate() {
            new_id[v] = i;
        }
        let names = order
            .iter()
            .map(|&v| self.names.get(v).cloned().unwrap_or_else(|| format!("v{v}")))
            .collect();
        KExpr {
            tree: relabel_vertices(&self.tree, &new_id),
            names,
        }
    }
}

fn relabel_vertices(t: &ParseTree, map: &[Vertex]) -> ParseTree {
    match t {
        ParseTree::Leaf { vertex, label } => ParseTree::leaf(map[*vertex], *label),
        ParseTree::Union(cs) => ParseTree::Union(cs.iter().map(|c| relabel_vertices(c, map)).collect()),
        ParseTree::Join { a, b, child } => ParseTree::join(*a, *b, relabel_vertices(child, map)),
        ParseTree::Rename { from, to, child } => {
            ParseTree::rename(*from, *to, relabel_vertices(child, map))
        }
    }
}

/// Prints `tree` in the concrete syntax. Vertices without an entry in
/// `names` print as `v<id>`.
pub fn to_text(tree: &ParseTree, names: &[String]) -> String {
    let mut out = String::new();
    write_tree(tree, names, &mut out);
    out
}

fn write_tree(t: &ParseTree, names: &[String], out: &mut String) {
    match t {
        ParseTree::Leaf { vertex, label } => match names.get(*vertex) {
            Some(name) => {
                let _ = write!(out, "{name}:{label}");
            }
            None => {
                let _ = write!(out, "v{vertex}:{label}");
            }
        },
        ParseTree::Union(cs) => {
            out.push_str("u(");
            for (i, c) in cs.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_tree(c, names, out);
            }
            out.push(')');
        }
        ParseTree::Join { a, b, child } => {
            let _ = write!(out, "join({a},{b}; ");
            write_tree(child, names, out);
            out.push(')');
        }
        ParseTree::Rename { from, to, child } => {
            let _ = write!(out, "ren({from},{to}; ");
            write_tree(child, names, out);
            out.push(')');
        }
    }
}

/// Parses an expression; see the module docs for the grammar.
pub fn parse_text(s: &str) -> Result<KExpr, ParseError> {
    let mut p = Parser {
        src: s,
        pos: 0,
        names: Vec::new(),
        ids: HashMap::new(),
    };
    let tree = p.expr()?;
    p.skip_ws();
    if p.pos < s.len() {
        return Err(p.error("trailing input after expression"));
    }
    Ok(KExpr {
        tree,
        names: p.names,
    })
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    names: Vec<String>,
    ids: HashMap<String, Vertex>,
}

impl Parser<'_> {
    fn error_at(&self, pos: usize, message: impl Into<String>) -> ParseError {
        let before = &self.src[..pos];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        self.error_at(self.pos, message)
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{tok}`")))
        }
    }

    fn name(&mut self) -> Result<&str, ParseError> {
        self.skip_ws();
        let len = self
            .rest()
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(self.rest().len());
        if len == 0 {
            return Err(self.error("expected a vertex name or operator"));
        }
        let start = self.pos;
        self.pos += len;
        Ok(&self.src[start..start + len])
    }

    fn label(&mut self) -> Result<Label, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let len = self
            .rest()
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(self.rest().len());
        if len == 0 {
            return Err(self.error("expected a label"));
        }
        self.pos += len;
        match self.src[start..self.pos].parse::<u32>() {
            Ok(l) if (1..=MAX_LABEL as u32).contains(&l) => Ok(l as Label),
            _ => Err(self.error_at(
                start,
                format!("label {} outside 1..={MAX_LABEL}", &self.src[start..self.pos]),
            )),
        }
    }

    /// Looks ahead for `word(` so that names like `u` or `join` still parse
    /// as leaves when followed by `:`.
    fn keyword(&mut self, word: &str) -> bool {
        self.skip_ws();
        let rest = self.rest();
        if let Some(after) = rest.strip_prefix(word) {
            if after.trim_start().starts_with('(') {
                self.pos += word.len();
                self.expect("(").is_ok()
            } else {
                false
            }
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<ParseTree, ParseError> {
        if self.keyword("u") {
            let mut children = vec![self.expr()?];
            while self.eat(",") {
                children.push(self.expr()?);
            }
            if children.len() < 2 {
                return Err(self.error("a union needs at least two operands"));
            }
            self.expect(")")?;
            Ok(ParseTree::Union(children))
        } else if self.keyword("join") {
            let at = self.pos;
            let (a, b, child) = self.binary_op()?;
            if a == b {
                return Err(self.error_at(at, format!("join({a},{b}) joins a label with itself")));
            }
            Ok(ParseTree::join(a, b, child))
        } else if self.keyword("ren") {
            let (from, to, child) = self.binary_op()?;
            Ok(ParseTree::rename(from, to, child))
        } else {
            self.skip_ws();
            let start = self.pos;
            let name = self.name()?.to_string();
            self.expect(":")?;
            let label = self.label()?;
            if self.ids.contains_key(&name) {
                return Err(self.error_at(start, format!("duplicate vertex name `{name}`")));
            }
            let v = self.names.len();
            self.ids.insert(name.clone(), v);
            self.names.push(name);
            Ok(ParseTree::leaf(v, label))
        }
    }

    fn binary_op(&mut self) -> Result<(Label, Label, ParseTree), ParseError> {
        let a = self.label()?;
        self.expect(",")?;
        let b = self.label()?;
        self.expect(";")?;
        let child = self.expr()?;
        self.expect(")")?;
        Ok((a, b, child))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_leaf_and_join() {
        let e = parse_text("a:1").unwrap();
        assert_eq!(e.tree, ParseTree::leaf(0, 1));
        assert_eq!(e.names, vec!["a"]);

        let e = parse_text("join(1,2; u(a:1, b:2))").unwrap();
        assert_eq!(
            e.tree,
            ParseTree::join(1, 2, ParseTree::Union(vec![ParseTree::leaf(0, 1), ParseTree::leaf(1, 2)]))
        );
    }

    #[test]
    fn whitespace_is_insignificant() {
        let a = parse_text("join(1,2;u(a:1,b:2))").unwrap();
        let b = parse_text("  join ( 1 , 2 ;\n u ( a : 1 ,\tb:2 ) ) ").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn keyword_like_names_are_leaves() {
        let e = parse_text("u(u:1, join:2, ren:3)").unwrap();
        assert_eq!(e.names, vec!["u", "join", "ren"]);
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_text("u(a:1,\n b:5)").unwrap_err();
        assert_eq!((err.line, err.column), (2, 4));
        assert!(err.message.contains("outside"));

        let err = parse_text("u(a:1, a:2)").unwrap_err();
        assert!(err.message.contains("duplicate"));
        assert_eq!(err.column, 8);

        assert!(parse_text("u(a:1)").is_err());
        assert!(parse_text("join(2,2; a:2)").is_err());
        assert!(parse_text("a:1 b:2").is_err());
        assert!(parse_text("join(1,2 u(a:1,b:2))").is_err());
        assert!(parse_text("").is_err());
    }

    #[test]
    fn roundtrip_through_text() {
        let src = "join(1,3; u(ren(3,2; join(2,3; u(join(1,2; u(a:1,b:2)), join(1,3; u(c:3,d:1))))), e:3))";
        let e = parse_text(src).unwrap();
        let again = parse_text(&e.to_text()).unwrap();
        assert_eq!(again, e);
    }

    #[test]
    fn canonical_ids_follow_appearance() {
        let tree = ParseTree::Union(vec![ParseTree::leaf(1, 1), ParseTree::leaf(0, 2)]);
        let e = KExpr {
            tree,
            names: vec!["x".into(), "y".into()],
        };
        let c = e.canonical_ids();
        assert_eq!(c.names, vec!["y", "x"]);
        assert_eq!(parse_text(&e.to_text()).unwrap(), c);
    }
}
