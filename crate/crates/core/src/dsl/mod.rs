//! The `.law` text format: theories, theory maps, commutativity tables,
//! finite categories, models, probe lists and check directives.
//!
//! ```text
//! -- commutative monoids
//! theory CMon {
//!   op m : 2 -> 1;
//!   op u : 0 -> 1;
//!   eq assoc : m(m(x1, x2), x3) = m(x1, m(x2, x3));
//!   eq unit : m(u, x1) = x1;
//!   eq comm : m = m . swap(1, 2);
//! }
//! model Z2 of CMon in finset {
//!   carrier 2;
//!   m = table [0, 1, 1, 0];
//!   u = table [0];
//! }
//! ```
//!
//! Parsing produces a [`Document`] that mirrors the text block for block;
//! [`resolve`] turns it into checked core values.

mod lexer;
mod parser;
mod print;
mod resolve;

use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::Serialize;

pub use parser::parse;
pub use print::serialize;
pub use resolve::{resolve, Library, SigmaEntry, TheoryMapEntry};

/// 1-based line and column of the start of a construct.
///
/// Positions are not part of a document's structure: two spans always
/// compare equal, so documents compare by content alone.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

impl PartialEq for Span {
    fn eq(&self, _: &Span) -> bool {
        true
    }
}

impl Eq for Span {}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub path: Option<String>,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl Diagnostic {
    pub fn new(span: Span, message: impl Into<String>) -> Diagnostic {
        Diagnostic {
            path: None,
            line: span.line,
            column: span.column,
            message: message.into(),
        }
    }

    fn in_file(mut self, path: &Path) -> Diagnostic {
        if self.path.is_none() {
            self.path = Some(path.display().to_string());
        }
        self
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = &self.path {
            write!(f, "{p}:")?;
        }
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for Diagnostic {}

/// Surface expressions, shared by maps and pastings. Meaning is assigned
/// during resolution, from the names the expression refers to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Expr {
    /// `x1`, `x2`, ... stored 0-based.
    Var(usize),
    /// `p1`, `p2`, ... stored 0-based.
    Proj(usize),
    Num(usize),
    Name(String),
    Call(String, Vec<Expr>),
    /// `<e1, ..., en>`
    Tuple(Vec<Expr>),
    /// `g . f`, `g` after `f`.
    Compose(Box<Expr>, Box<Expr>),
    /// `e[a1, ..., an]`, `e` precomposed with the tuple of arguments.
    Subst(Box<Expr>, Vec<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum TheoryItem {
    Op { span: Span, name: String, arity: usize },
    Basis { span: Span, ops: Vec<String> },
    Eq { span: Span, name: String, lhs: Expr, rhs: Expr },
    Cell { span: Span, name: String, source: Expr, target: Expr, invertible: bool },
    CellEq { span: Span, name: String, lhs: Expr, rhs: Expr },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoryDecl {
    pub span: Span,
    pub name: String,
    pub items: Vec<TheoryItem>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Assignment {
    pub span: Span,
    pub name: String,
    pub value: Expr,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MapDecl {
    pub span: Span,
    pub name: String,
    pub source: String,
    pub target: String,
    pub images: Vec<Assignment>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SigmaItem {
    pub span: Span,
    pub pair: (String, String),
    pub value: Expr,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SigmaDecl {
    pub span: Span,
    pub name: String,
    pub theory: String,
    pub via: Option<String>,
    pub weakness: String,
    pub symmetric: bool,
    pub entries: Vec<SigmaItem>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CategoryItem {
    Objects { span: Span, names: Vec<String> },
    Arrow { span: Span, name: String, src: String, tgt: String },
    /// `g . f = h`
    Compose { span: Span, g: String, f: String, h: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CategoryDecl {
    pub span: Span,
    pub name: String,
    pub items: Vec<CategoryItem>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Carrier {
    FinSet,
    Category(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ModelItem {
    Size { span: Span, size: usize },
    Table { span: Span, op: String, values: Vec<usize> },
    Functor { span: Span, op: String, objects: Vec<String>, arrows: Vec<String> },
    Nat { span: Span, cell: String, arrows: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModelDecl {
    pub span: Span,
    pub name: String,
    pub theory: String,
    pub carrier: Carrier,
    pub items: Vec<ModelItem>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbesDecl {
    pub span: Span,
    pub name: String,
    pub models: Vec<String>,
}

/// A command line to run against the file and the exit code it should give.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckDecl {
    pub span: Span,
    pub args: String,
    pub expect: i32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Item {
    Import { span: Span, path: String },
    Theory(TheoryDecl),
    Map(MapDecl),
    Sigma(SigmaDecl),
    Category(CategoryDecl),
    Model(ModelDecl),
    Probes(ProbesDecl),
    Check(CheckDecl),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Document {
    pub items: Vec<Item>,
}

impl Document {
    pub fn checks(&self) -> impl Iterator<Item = &CheckDecl> {
        self.items.iter().filter_map(|i| match i {
            Item::Check(c) => Some(c),
            _ => None,
        })
    }
}

/// Reads a file and splices in its imports, each file at most once, imported
/// blocks first. Import paths are relative to the importing file.
pub fn load(path: &Path) -> Result<Document, Diagnostic> {
    let mut seen = HashSet::new();
    let mut out = Document::default();
    load_into(path, &mut seen, &mut out)?;
    Ok(out)
}

fn load_into(path: &Path, seen: &mut HashSet<PathBuf>, out: &mut Document) -> Result<(), Diagnostic> {
    let key = path.canonicalize().unwrap_or_else(|_| path.to_path_buf());
    if !seen.insert(key) {
        return Ok(());
    }
    let text = std::fs::read_to_string(path).map_err(|e| Diagnostic {
        path: Some(path.display().to_string()),
        line: 0,
        column: 0,
        message: format!("cannot read file: {e}"),
    })?;
    let doc = parse(&text).map_err(|d| d.in_file(path))?;
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    for item in doc.items {
        match item {
            Item::Import { span, path: rel } => {
                let target = dir.join(&rel);
                if !target.exists() {
                    return Err(Diagnostic::new(span, format!("imported file {rel} does not exist")).in_file(path));
                }
                load_into(&target, seen, out)?;
            }
            other => out.items.push(other),
        }
    }
    Ok(())
}

/// Parses and resolves a file with its imports.
pub fn load_library(path: &Path) -> Result<Library, Diagnostic> {
    let doc = load(path)?;
    resolve(&doc).map_err(|d| d.in_file(path))
}
