use std::fmt::Write;

use super::*;

/// Canonical text of a document: two-space indentation, one statement per
/// line, a blank line between blocks.
pub fn serialize(doc: &Document) -> String {
    let mut out = String::new();
    for (i, item) in doc.items.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        write_item(&mut out, item);
    }
    out
}

fn join<T>(xs: &[T], f: impl Fn(&T) -> String) -> String {
    xs.iter().map(f).collect::<Vec<_>>().join(", ")
}

pub(super) fn expr(e: &Expr) -> String {
    match e {
        Expr::Var(i) => format!("x{}", i + 1),
        Expr::Proj(i) => format!("p{}", i + 1),
        Expr::Num(n) => n.to_string(),
        Expr::Name(s) => s.clone(),
        Expr::Call(f, args) => format!("{f}({})", join(args, expr)),
        Expr::Tuple(args) => format!("<{}>", join(args, expr)),
        Expr::Compose(g, f) => {
            let rhs = match **f {
                Expr::Compose(..) => format!("({})", expr(f)),
                _ => expr(f),
            };
            format!("{} . {rhs}", expr(g))
        }
        Expr::Subst(head, args) => {
            let h = match **head {
                Expr::Compose(..) => format!("({})", expr(head)),
                _ => expr(head),
            };
            format!("{h}[{}]", join(args, expr))
        }
    }
}

fn write_item(out: &mut String, item: &Item) {
    match item {
        Item::Import { path, .. } => {
            let _ = writeln!(out, "import \"{path}\";");
        }
        Item::Theory(t) => {
            let _ = writeln!(out, "theory {} {{", t.name);
            for i in &t.items {
                let _ = match i {
                    TheoryItem::Op { name, arity, .. } => writeln!(out, "  op {name} : {arity} -> 1;"),
                    TheoryItem::Basis { ops, .. } => writeln!(out, "  basis {};", ops.join(", ")),
                    TheoryItem::Eq { name, lhs, rhs, .. } => writeln!(out, "  eq {name} : {} = {};", expr(lhs), expr(rhs)),
                    TheoryItem::Cell {
                        name,
                        source,
                        target,
                        invertible,
                        ..
                    } => writeln!(
                        out,
                        "  cell {name} : {} => {}{};",
                        expr(source),
                        expr(target),
                        if *invertible { " invertible" } else { "" }
                    ),
                    TheoryItem::CellEq { name, lhs, rhs, .. } => {
                        writeln!(out, "  celleq {name} : {} = {};", expr(lhs), expr(rhs))
                    }
                };
            }
            out.push_str("}\n");
        }
        Item::Map(m) => {
            let _ = writeln!(out, "map {} : {} -> {} {{", m.name, m.source, m.target);
            for a in &m.images {
                let _ = writeln!(out, "  {} = {};", a.name, expr(&a.value));
            }
            out.push_str("}\n");
        }
        Item::Sigma(s) => {
            let _ = write!(out, "sigma {} for {}", s.name, s.theory);
            if let Some(v) = &s.via {
                let _ = write!(out, " via {v}");
            }
            let _ = write!(out, " weakness {}", s.weakness);
            if s.symmetric {
                out.push_str(" symmetric");
            }
            out.push_str(" {\n");
            for e in &s.entries {
                let _ = writeln!(out, "  ({}, {}) = {};", e.pair.0, e.pair.1, expr(&e.value));
            }
            out.push_str("}\n");
        }
        Item::Category(c) => {
            let _ = writeln!(out, "category {} {{", c.name);
            for i in &c.items {
                let _ = match i {
                    CategoryItem::Objects { names, .. } => writeln!(out, "  objects {};", names.join(", ")),
                    CategoryItem::Arrow { name, src, tgt, .. } => writeln!(out, "  arrow {name} : {src} -> {tgt};"),
                    CategoryItem::Compose { g, f, h, .. } => writeln!(out, "  compose {g} . {f} = {h};"),
                };
            }
            out.push_str("}\n");
        }
        Item::Model(m) => {
            let carrier = match &m.carrier {
                Carrier::FinSet => "finset".to_string(),
                Carrier::Category(c) => format!("category {c}"),
            };
            let _ = writeln!(out, "model {} of {} in {carrier} {{", m.name, m.theory);
            for i in &m.items {
                let _ = match i {
                    ModelItem::Size { size, .. } => writeln!(out, "  carrier {size};"),
                    ModelItem::Table { op, values, .. } => writeln!(out, "  {op} = table [{}];", join(values, |v| v.to_string())),
                    ModelItem::Functor { op, objects, arrows, .. } => writeln!(
                        out,
                        "  {op} = functor objects [{}] arrows [{}];",
                        objects.join(", "),
                        arrows.join(", ")
                    ),
                    ModelItem::Nat { cell, arrows, .. } => writeln!(out, "  {cell} = nat [{}];", arrows.join(", ")),
                };
            }
            out.push_str("}\n");
        }
        Item::Probes(p) => {
            let _ = writeln!(out, "probes {} = {};", p.name, p.models.join(", "));
        }
        Item::Check(c) => {
            let _ = writeln!(out, "check \"{}\" expect {};", c.args, c.expect);
        }
    }
}
