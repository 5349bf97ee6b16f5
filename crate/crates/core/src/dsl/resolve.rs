use std::collections::BTreeMap;
use std::sync::Arc;

use indexmap::IndexMap;

use super::*;
use crate::cat_model::{validate_cat_model, CatModel, NatTable, OpTable};
use crate::fincat::{validate_category, Arrow, FinCategory};
use crate::finset::{validate_model, FinSetModel};
use crate::sigma::{SigmaTable, TheoryMap};
use crate::term::{Morphism, Term};
use crate::theory::TheoryPresentation;
use crate::two_cells::{Pasting, TwoTheory, Weakness};

#[derive(Clone, Debug)]
pub struct TheoryMapEntry {
    pub source: String,
    pub target: String,
    pub map: TheoryMap,
}

#[derive(Clone, Debug)]
pub struct SigmaEntry {
    /// The theory whose operation pairs index the table.
    pub theory: String,
    /// The theory the entries live in.
    pub target: String,
    pub via: Option<String>,
    pub table: SigmaTable,
}

/// Every block of a document, checked and keyed by name in file order.
#[derive(Clone, Debug, Default)]
pub struct Library {
    pub theories: IndexMap<String, Arc<TwoTheory>>,
    pub maps: IndexMap<String, TheoryMapEntry>,
    pub sigmas: IndexMap<String, SigmaEntry>,
    pub categories: IndexMap<String, FinCategory>,
    /// Set models with the name of their theory.
    pub finset_models: IndexMap<String, (String, FinSetModel)>,
    pub cat_models: IndexMap<String, CatModel>,
    pub probes: IndexMap<String, Vec<String>>,
    pub checks: Vec<CheckDecl>,
}

impl Library {
    pub fn cat_models_of(&self, theory: &str) -> Vec<&CatModel> {
        self.cat_models.values().filter(|m| m.theory.name() == theory).collect()
    }

    pub fn finset_models_of(&self, theory: &str) -> Vec<&FinSetModel> {
        self.finset_models
            .values()
            .filter(|(t, _)| t == theory)
            .map(|(_, m)| m)
            .collect()
    }
}

type R<T> = std::result::Result<T, String>;

const PASTING_COMBINATORS: [&str; 6] = ["vert", "inv", "whiskL", "whiskR", "powL", "powR"];

fn num(e: &Expr, what: &str) -> R<usize> {
    match e {
        Expr::Num(n) => Ok(*n),
        other => Err(format!("{what} expects a number, found {}", print::expr(other))),
    }
}

fn widen(f: Morphism, source: usize) -> R<Morphism> {
    if source < f.source {
        return Err(format!("a map out of {} used in context {source}", f.source));
    }
    Ok(Morphism {
        source,
        components: f.components,
    })
}

/// Interprets surface expressions against one theory. Every map expression
/// has a least context it makes sense in and can be read in any larger one.
struct Elab<'a> {
    theory: &'a TwoTheory,
}

impl Elab<'_> {
    fn op(&self, name: &str) -> Option<usize> {
        self.theory.base.signature.lookup(name)
    }

    fn cell(&self, name: &str) -> Option<usize> {
        self.theory.cells.iter().position(|c| c.name == name)
    }

    fn args(&self, f: &str, args: &[Expr], n: usize) -> R<()> {
        if args.len() != n {
            return Err(format!("{f} takes {n} arguments, given {}", args.len()));
        }
        Ok(())
    }

    fn min_source(&self, e: &Expr) -> R<usize> {
        match e {
            Expr::Var(i) | Expr::Proj(i) => Ok(i + 1),
            Expr::Num(n) => Err(format!("the number {n} is not a map")),
            Expr::Name(n) => self.name_arity(n),
            Expr::Call(f, args) => match f.as_str() {
                "id" => {
                    self.args(f, args, 1)?;
                    num(&args[0], "id")
                }
                "swap" => {
                    self.args(f, args, 2)?;
                    let (i, j) = (num(&args[0], "swap")?, num(&args[1], "swap")?);
                    if i == 0 || j == 0 || i == j {
                        return Err(format!("swap({i}, {j}) needs two distinct positions counted from 1"));
                    }
                    Ok(i.max(j))
                }
                "perm" => Ok(args.len()),
                "transpose" => {
                    self.args(f, args, 2)?;
                    Ok(num(&args[0], "transpose")? * num(&args[1], "transpose")?)
                }
                "powL" => {
                    self.args(f, args, 2)?;
                    Ok(num(&args[0], "powL")? * self.min_source(&args[1])?)
                }
                "powR" => {
                    self.args(f, args, 2)?;
                    Ok(self.min_source(&args[0])? * num(&args[1], "powR")?)
                }
                _ => {
                    let op = self.op(f).ok_or_else(|| self.unknown(f))?;
                    self.args(f, args, self.theory.base.arity(op))?;
                    args.iter().try_fold(0, |m, a| Ok(m.max(self.min_source(a)?)))
                }
            },
            Expr::Tuple(es) => es.iter().try_fold(0, |m, a| Ok(m.max(self.min_source(a)?))),
            Expr::Compose(g, f) => {
                let (mf, mg) = (self.min_source(f)?, self.min_source(g)?);
                (mf..=mf + mg)
                    .find(|&s| self.target(f, s).is_ok_and(|t| t >= mg))
                    .ok_or_else(|| format!("cannot compose {} after {}", print::expr(g), print::expr(f)))
            }
            Expr::Subst(h, args) => self.min_source(&Expr::Compose(h.clone(), Box::new(Expr::Tuple(args.clone())))),
        }
    }

    fn name_arity(&self, n: &str) -> R<usize> {
        if let Some(op) = self.op(n) {
            return Ok(self.theory.base.arity(op));
        }
        if self.cell(n).is_some() {
            return Err(format!("cell {n} used where a map is expected"));
        }
        Err(self.unknown(n))
    }

    fn unknown(&self, n: &str) -> String {
        format!("unknown name `{n}` in theory {}", self.theory.name())
    }

    fn target(&self, e: &Expr, s: usize) -> R<usize> {
        match e {
            Expr::Call(f, args) => match f.as_str() {
                "id" => num(&args[0], "id"),
                "swap" | "perm" => Ok(s),
                "transpose" => self.min_source(e),
                "powL" => Ok(num(&args[0], "powL")? * self.target(&args[1], self.min_source(&args[1])?)?),
                "powR" => Ok(self.target(&args[0], self.min_source(&args[0])?)? * num(&args[1], "powR")?),
                _ => Ok(1),
            },
            Expr::Tuple(es) => es.iter().try_fold(0, |m, a| Ok(m + self.target(a, s)?)),
            Expr::Compose(g, f) => self.target(g, self.target(f, s)?),
            Expr::Subst(h, args) => {
                let inner = args.iter().try_fold(0, |m, a| R::Ok(m + self.target(a, s)?))?;
                self.target(h, inner)
            }
            _ => Ok(1),
        }
    }

    fn morphism(&self, e: &Expr, s: usize) -> R<Morphism> {
        let min = self.min_source(e)?;
        if s < min {
            return Err(format!("{} needs at least {min} inputs, used with {s}", print::expr(e)));
        }
        match e {
            Expr::Var(i) | Expr::Proj(i) => Ok(Morphism {
                source: s,
                components: vec![Term::Proj(*i)],
            }),
            Expr::Name(n) => {
                let op = self.op(n).ok_or_else(|| self.unknown(n))?;
                widen(self.theory.base.generator(op), s)
            }
            Expr::Call(f, args) => match f.as_str() {
                "id" => Ok(Morphism {
                    source: s,
                    components: (0..num(&args[0], "id")?).map(Term::Proj).collect(),
                }),
                "swap" => {
                    let (i, j) = (num(&args[0], "swap")? - 1, num(&args[1], "swap")? - 1);
                    let mut components: Vec<Term> = (0..s).map(Term::Proj).collect();
                    components.swap(i, j);
                    Ok(Morphism { source: s, components })
                }
                "perm" => {
                    let p = args.iter().map(|a| num(a, "perm")).collect::<R<Vec<_>>>()?;
                    let mut sorted = p.clone();
                    sorted.sort_unstable();
                    if sorted != (1..=p.len()).collect::<Vec<_>>() {
                        return Err("perm expects a permutation of 1..n".into());
                    }
                    let components = (0..s).map(|k| Term::Proj(p.get(k).map_or(k, |&v| v - 1))).collect();
                    Ok(Morphism { source: s, components })
                }
                "transpose" => widen(Morphism::transpose(num(&args[0], "transpose")?, num(&args[1], "transpose")?), s),
                "powL" => {
                    let inner = self.morphism(&args[1], self.min_source(&args[1])?)?;
                    widen(Morphism::power_left(num(&args[0], "powL")?, &inner), s)
                }
                "powR" => {
                    let inner = self.morphism(&args[0], self.min_source(&args[0])?)?;
                    widen(Morphism::power_right(&inner, num(&args[1], "powR")?), s)
                }
                _ => {
                    let op = self.op(f).ok_or_else(|| self.unknown(f))?;
                    let terms = args
                        .iter()
                        .map(|a| {
                            let m = self.morphism(a, s)?;
                            if m.target() != 1 {
                                return Err(format!("argument {} of {f} is not a single term", print::expr(a)));
                            }
                            Ok(m.components.into_iter().next().expect("one component"))
                        })
                        .collect::<R<Vec<_>>>()?;
                    Ok(Morphism {
                        source: s,
                        components: vec![Term::Apply(op, terms)],
                    })
                }
            },
            Expr::Tuple(es) => {
                let mut components = Vec::new();
                for a in es {
                    components.extend(self.morphism(a, s)?.components);
                }
                Ok(Morphism { source: s, components })
            }
            Expr::Compose(g, f) => {
                let first = self.morphism(f, s)?;
                let then = self.morphism(g, first.target())?;
                first.compose(&then).map_err(|e| e.to_string())
            }
            Expr::Subst(h, args) => self.morphism(&Expr::Compose(h.clone(), Box::new(Expr::Tuple(args.clone()))), s),
            Expr::Num(n) => Err(format!("the number {n} is not a map")),
        }
    }

    fn is_pasting(&self, e: &Expr) -> bool {
        match e {
            Expr::Name(n) => self.cell(n).is_some(),
            Expr::Call(f, args) if f == "id" => !matches!(args.as_slice(), [Expr::Num(_)]),
            Expr::Call(f, args) => PASTING_COMBINATORS.contains(&f.as_str()) || args.iter().any(|a| self.is_pasting(a)),
            Expr::Tuple(es) => es.iter().any(|a| self.is_pasting(a)),
            Expr::Compose(g, f) => self.is_pasting(g) || self.is_pasting(f),
            Expr::Subst(h, _) => self.is_pasting(h),
            _ => false,
        }
    }

    /// Highest variable mentioned outside nested cell arguments, as a context.
    fn context(&self, e: &Expr) -> usize {
        match e {
            Expr::Var(i) | Expr::Proj(i) => i + 1,
            Expr::Call(f, args) if f == "powL" || f == "powR" => 0,
            Expr::Call(_, args) | Expr::Tuple(args) => args.iter().map(|a| self.context(a)).max().unwrap_or(0),
            Expr::Compose(_, f) => self.context(f),
            Expr::Subst(_, args) => args.iter().map(|a| self.context(a)).max().unwrap_or(0),
            _ => 0,
        }
    }

    fn target_arity(&self, p: &Pasting) -> R<usize> {
        Ok(self.theory.boundary(p).map_err(|e| e.to_string())?.0.target())
    }

    fn pasting(&self, e: &Expr, ctx: usize) -> R<Pasting> {
        if !self.is_pasting(e) {
            let s = ctx.max(self.min_source(e)?);
            return Ok(Pasting::Id(self.morphism(e, s)?));
        }
        match e {
            Expr::Name(n) => Ok(Pasting::Gen(self.cell(n).expect("checked cell"))),
            Expr::Call(f, args) => match f.as_str() {
                "id" => {
                    self.args(f, args, 1)?;
                    let s = ctx.max(self.min_source(&args[0])?);
                    Ok(Pasting::Id(self.morphism(&args[0], s)?))
                }
                "inv" => {
                    self.args(f, args, 1)?;
                    Ok(Pasting::inverse(self.pasting(&args[0], ctx)?))
                }
                "vert" => {
                    if args.len() < 2 {
                        return Err("vert composes at least two cells".into());
                    }
                    let mut parts = args.iter().map(|a| self.pasting(a, ctx));
                    let first = parts.next().expect("two parts")?;
                    parts.try_fold(first, |acc, p| Ok(Pasting::vert(acc, p?)))
                }
                "whiskL" => {
                    self.args(f, args, 2)?;
                    let h = self.morphism(&args[0], ctx.max(self.min_source(&args[0])?))?;
                    let p = self.pasting(&args[1], h.target())?;
                    Ok(Pasting::whisker_l(h, p))
                }
                "whiskR" => {
                    self.args(f, args, 2)?;
                    let p = self.pasting(&args[0], ctx)?;
                    let h = self.morphism(&args[1], self.target_arity(&p)?)?;
                    Ok(Pasting::whisker_r(p, h))
                }
                "powL" => {
                    self.args(f, args, 2)?;
                    Ok(Pasting::power_l(num(&args[0], "powL")?, self.pasting(&args[1], 0)?))
                }
                "powR" => {
                    self.args(f, args, 2)?;
                    Ok(Pasting::power_r(self.pasting(&args[0], 0)?, num(&args[1], "powR")?))
                }
                _ => {
                    let op = self.op(f).ok_or_else(|| self.unknown(f))?;
                    self.args(f, args, self.theory.base.arity(op))?;
                    let mut parts = args.iter().map(|a| self.pasting(a, ctx)).collect::<R<Vec<_>>>()?;
                    let inner = if parts.len() == 1 {
                        parts.pop().expect("one part")
                    } else {
                        Pasting::Tuple(parts)
                    };
                    Ok(Pasting::whisker_r(inner, self.theory.base.generator(op)))
                }
            },
            Expr::Tuple(es) => Ok(Pasting::Tuple(es.iter().map(|a| self.pasting(a, ctx)).collect::<R<Vec<_>>>()?)),
            Expr::Compose(g, f) => match (self.is_pasting(g), self.is_pasting(f)) {
                (true, false) => {
                    let h = self.morphism(f, ctx.max(self.min_source(f)?))?;
                    let p = self.pasting(g, h.target())?;
                    Ok(Pasting::whisker_l(h, p))
                }
                (false, true) => {
                    let p = self.pasting(f, ctx)?;
                    let h = self.morphism(g, self.target_arity(&p)?)?;
                    Ok(Pasting::whisker_r(p, h))
                }
                _ => Err("use vert to compose two cells".into()),
            },
            Expr::Subst(h, args) => {
                let tuple = Expr::Tuple(args.clone());
                let a = self.morphism(&tuple, ctx.max(self.min_source(&tuple)?))?;
                let p = self.pasting(h, a.target())?;
                Ok(Pasting::whisker_l(a, p))
            }
            _ => unreachable!("not a pasting"),
        }
    }

    /// Both sides of an equation or cell, read in a common context.
    fn parallel_maps(&self, lhs: &Expr, rhs: &Expr) -> R<(Morphism, Morphism)> {
        let s = self.min_source(lhs)?.max(self.min_source(rhs)?);
        Ok((self.morphism(lhs, s)?, self.morphism(rhs, s)?))
    }
}

struct Resolver {
    lib: Library,
}

fn diag<E: ToString>(span: Span) -> impl Fn(E) -> Diagnostic {
    move |e| Diagnostic::new(span, e.to_string())
}

/// Checks every block and builds the corresponding core values. Reports the
/// first problem, at the statement it comes from.
pub fn resolve(doc: &Document) -> Result<Library, Diagnostic> {
    let mut r = Resolver { lib: Library::default() };
    for item in &doc.items {
        match item {
            Item::Import { span, path } => {
                return Err(Diagnostic::new(*span, format!("import of {path} was not expanded; load the file from disk")))
            }
            Item::Theory(t) => r.theory(t)?,
            Item::Map(m) => r.map(m)?,
            Item::Sigma(s) => r.sigma(s)?,
            Item::Category(c) => r.category(c)?,
            Item::Model(m) => r.model(m)?,
            Item::Probes(p) => r.probes(p)?,
            Item::Check(c) => r.lib.checks.push(c.clone()),
        }
    }
    Ok(r.lib)
}

impl Resolver {
    fn fresh<T>(map: &IndexMap<String, T>, name: &str, span: Span, what: &str) -> Result<(), Diagnostic> {
        if map.contains_key(name) {
            return Err(Diagnostic::new(span, format!("{what} {name} is defined twice")));
        }
        Ok(())
    }

    fn theory_named(&self, name: &str, span: Span) -> Result<Arc<TwoTheory>, Diagnostic> {
        self.lib
            .theories
            .get(name)
            .cloned()
            .ok_or_else(|| Diagnostic::new(span, format!("unknown theory {name}")))
    }

    fn theory(&mut self, decl: &TheoryDecl) -> Result<(), Diagnostic> {
        Self::fresh(&self.lib.theories, &decl.name, decl.span, "theory")?;
        let mut base = TheoryPresentation::new(&decl.name);
        for item in &decl.items {
            if let TheoryItem::Op { span, name, arity } = item {
                base.add_op(name, *arity).map_err(diag(*span))?;
            }
        }
        for item in &decl.items {
            if let TheoryItem::Basis { span, ops } = item {
                let ids = ops
                    .iter()
                    .map(|o| base.op(o).map_err(diag(*span)))
                    .collect::<Result<Vec<_>, _>>()?;
                base.basis = Some(ids);
            }
        }
        let mut theory = TwoTheory::new(base);
        for item in &decl.items {
            match item {
                TheoryItem::Eq { span, name, lhs, rhs } => {
                    let (l, r) = Elab { theory: &theory }.parallel_maps(lhs, rhs).map_err(diag(*span))?;
                    theory.base.add_equation(name, l, r).map_err(diag(*span))?;
                }
                TheoryItem::Cell {
                    span,
                    name,
                    source,
                    target,
                    invertible,
                } => {
                    let (s, t) = Elab { theory: &theory }.parallel_maps(source, target).map_err(diag(*span))?;
                    theory.add_cell(name, s, t, *invertible).map_err(diag(*span))?;
                }
                TheoryItem::CellEq { span, name, lhs, rhs } => {
                    let elab = Elab { theory: &theory };
                    let ctx = elab.context(lhs).max(elab.context(rhs));
                    let l = elab.pasting(lhs, ctx).map_err(diag(*span))?;
                    let r = elab.pasting(rhs, ctx).map_err(diag(*span))?;
                    theory.add_cell_equation(name, l, r).map_err(diag(*span))?;
                }
                _ => {}
            }
        }
        theory.validate().map_err(diag(decl.span))?;
        self.lib.theories.insert(decl.name.clone(), Arc::new(theory));
        Ok(())
    }

    fn map(&mut self, decl: &MapDecl) -> Result<(), Diagnostic> {
        Self::fresh(&self.lib.maps, &decl.name, decl.span, "map")?;
        let source = self.theory_named(&decl.source, decl.span)?;
        let target = self.theory_named(&decl.target, decl.span)?;
        let elab = Elab { theory: &target };
        let sig = &source.base.signature;
        let mut ops: Vec<Option<Morphism>> = vec![None; sig.ops.len()];
        let mut cells: Vec<Option<Pasting>> = vec![None; source.cells.len()];
        for a in &decl.images {
            if let Some(op) = sig.lookup(&a.name) {
                let n = sig.arity(op);
                let f = elab.morphism(&a.value, n).map_err(diag(a.span))?;
                if f.target() != 1 {
                    return Err(Diagnostic::new(a.span, format!("image of {} must be a single term", a.name)));
                }
                ops[op] = Some(f);
            } else if let Ok(c) = source.cell(&a.name) {
                let ctx = source.cells[c].source.source;
                cells[c] = Some(elab.pasting(&a.value, ctx).map_err(diag(a.span))?);
            } else {
                return Err(Diagnostic::new(a.span, format!("{} is not a generator of {}", a.name, decl.source)));
            }
        }
        let missing = |what: &str, name: &str| Diagnostic::new(decl.span, format!("map {} gives no image for {what} {name}", decl.name));
        let ops = ops
            .into_iter()
            .enumerate()
            .map(|(i, f)| f.ok_or_else(|| missing("operation", sig.name(i))))
            .collect::<Result<Vec<_>, _>>()?;
        let cells = cells
            .into_iter()
            .enumerate()
            .map(|(i, p)| p.ok_or_else(|| missing("cell", &source.cells[i].name)))
            .collect::<Result<Vec<_>, _>>()?;
        self.lib.maps.insert(
            decl.name.clone(),
            TheoryMapEntry {
                source: decl.source.clone(),
                target: decl.target.clone(),
                map: TheoryMap {
                    name: decl.name.clone(),
                    ops,
                    cells,
                },
            },
        );
        Ok(())
    }

    fn sigma(&mut self, decl: &SigmaDecl) -> Result<(), Diagnostic> {
        Self::fresh(&self.lib.sigmas, &decl.name, decl.span, "table")?;
        let source = self.theory_named(&decl.theory, decl.span)?;
        let target_name = match &decl.via {
            Some(v) => {
                let m = self
                    .lib
                    .maps
                    .get(v)
                    .ok_or_else(|| Diagnostic::new(decl.span, format!("unknown map {v}")))?;
                if m.source != decl.theory {
                    return Err(Diagnostic::new(decl.span, format!("map {v} does not start at {}", decl.theory)));
                }
                m.target.clone()
            }
            None => decl.theory.clone(),
        };
        let target = self.theory_named(&target_name, decl.span)?;
        let weakness = Weakness::parse(&decl.weakness)
            .ok_or_else(|| Diagnostic::new(decl.span, format!("unknown weakness {}; use strict, pseudo, lax or colax", decl.weakness)))?;
        let elab = Elab { theory: &target };
        let mut entries = BTreeMap::new();
        for e in &decl.entries {
            let a = source.base.op(&e.pair.0).map_err(diag(e.span))?;
            let b = source.base.op(&e.pair.1).map_err(diag(e.span))?;
            let ctx = source.base.arity(a) * source.base.arity(b);
            let p = elab.pasting(&e.value, ctx.max(elab.context(&e.value))).map_err(diag(e.span))?;
            if entries.insert((a, b), p).is_some() {
                return Err(Diagnostic::new(e.span, format!("entry ({}, {}) given twice", e.pair.0, e.pair.1)));
            }
        }
        self.lib.sigmas.insert(
            decl.name.clone(),
            SigmaEntry {
                theory: decl.theory.clone(),
                target: target_name,
                via: decl.via.clone(),
                table: SigmaTable {
                    name: decl.name.clone(),
                    weakness,
                    symmetric: decl.symmetric,
                    entries,
                },
            },
        );
        Ok(())
    }

    fn category(&mut self, decl: &CategoryDecl) -> Result<(), Diagnostic> {
        Self::fresh(&self.lib.categories, &decl.name, decl.span, "category")?;
        let mut objects: Vec<String> = Vec::new();
        for item in &decl.items {
            if let CategoryItem::Objects { span, names } = item {
                for n in names {
                    if objects.contains(n) {
                        return Err(Diagnostic::new(*span, format!("object {n} is declared twice")));
                    }
                    objects.push(n.clone());
                }
            }
        }
        let mut arrows: Vec<Arrow> = objects
            .iter()
            .enumerate()
            .map(|(i, o)| Arrow {
                name: format!("id_{o}"),
                src: i,
                tgt: i,
            })
            .collect();
        let identities: Vec<usize> = (0..objects.len()).collect();
        let obj = |n: &str, span: Span| {
            objects
                .iter()
                .position(|o| o == n)
                .ok_or_else(|| Diagnostic::new(span, format!("unknown object {n}")))
        };
        for item in &decl.items {
            if let CategoryItem::Arrow { span, name, src, tgt } = item {
                if arrows.iter().any(|a| &a.name == name) {
                    return Err(Diagnostic::new(*span, format!("arrow {name} is declared twice")));
                }
                arrows.push(Arrow {
                    name: name.clone(),
                    src: obj(src, *span)?,
                    tgt: obj(tgt, *span)?,
                });
            }
        }
        let arr = |n: &str, span: Span| {
            arrows
                .iter()
                .position(|a| a.name == n)
                .ok_or_else(|| Diagnostic::new(span, format!("unknown arrow {n}")))
        };
        let mut composition = Vec::new();
        for (f, a) in arrows.iter().enumerate() {
            composition.push((identities[a.tgt], f, f));
            if !identities.contains(&f) {
                composition.push((f, identities[a.src], f));
            }
        }
        for item in &decl.items {
            if let CategoryItem::Compose { span, g, f, h } = item {
                composition.push((arr(g, *span)?, arr(f, *span)?, arr(h, *span)?));
            }
        }
        let c = validate_category(objects, arrows, identities, &composition).map_err(diag(decl.span))?;
        self.lib.categories.insert(decl.name.clone(), c);
        Ok(())
    }

    fn model(&mut self, decl: &ModelDecl) -> Result<(), Diagnostic> {
        if self.lib.cat_models.contains_key(&decl.name) || self.lib.finset_models.contains_key(&decl.name) {
            return Err(Diagnostic::new(decl.span, format!("model {} is defined twice", decl.name)));
        }
        let theory = self.theory_named(&decl.theory, decl.span)?;
        match &decl.carrier {
            Carrier::FinSet => self.finset_model(decl, &theory),
            Carrier::Category(c) => self.cat_model(decl, theory.clone(), c),
        }
    }

    fn finset_model(&mut self, decl: &ModelDecl, theory: &TwoTheory) -> Result<(), Diagnostic> {
        let sig = &theory.base.signature;
        let mut size = None;
        let mut tables: Vec<Option<Vec<usize>>> = vec![None; sig.ops.len()];
        for item in &decl.items {
            match item {
                ModelItem::Size { size: s, .. } => size = Some(*s),
                ModelItem::Table { span, op, values } => {
                    let o = sig
                        .lookup(op)
                        .ok_or_else(|| Diagnostic::new(*span, format!("{op} is not an operation of {}", decl.theory)))?;
                    tables[o] = Some(values.clone());
                }
                ModelItem::Functor { span, .. } | ModelItem::Nat { span, .. } => {
                    return Err(Diagnostic::new(*span, "set models take `table` entries"));
                }
            }
        }
        let size = size.ok_or_else(|| Diagnostic::new(decl.span, format!("model {} has no carrier size", decl.name)))?;
        let tables = tables
            .into_iter()
            .enumerate()
            .map(|(i, t)| t.ok_or_else(|| Diagnostic::new(decl.span, format!("no table for {}", sig.name(i)))))
            .collect::<Result<Vec<_>, _>>()?;
        let model = validate_model(&theory.truncation(), size, tables).map_err(diag(decl.span))?;
        self.lib
            .finset_models
            .insert(decl.name.clone(), (decl.theory.clone(), model));
        Ok(())
    }

    fn cat_model(&mut self, decl: &ModelDecl, theory: Arc<TwoTheory>, category: &str) -> Result<(), Diagnostic> {
        let carrier = self
            .lib
            .categories
            .get(category)
            .cloned()
            .ok_or_else(|| Diagnostic::new(decl.span, format!("unknown category {category}")))?;
        let sig = &theory.base.signature;
        let mut ops: Vec<Option<OpTable>> = vec![None; sig.ops.len()];
        let mut cells: Vec<Option<NatTable>> = vec![None; theory.cells.len()];
        for item in &decl.items {
            match item {
                ModelItem::Functor {
                    span,
                    op,
                    objects,
                    arrows,
                } => {
                    let o = sig
                        .lookup(op)
                        .ok_or_else(|| Diagnostic::new(*span, format!("{op} is not an operation of {}", decl.theory)))?;
                    let obj = objects
                        .iter()
                        .map(|n| carrier.object(n).ok_or_else(|| Diagnostic::new(*span, format!("unknown object {n}"))))
                        .collect::<Result<Vec<_>, _>>()?;
                    let arr = arrows
                        .iter()
                        .map(|n| carrier.arrow(n).ok_or_else(|| Diagnostic::new(*span, format!("unknown arrow {n}"))))
                        .collect::<Result<Vec<_>, _>>()?;
                    let n = sig.arity(o);
                    let (want_o, want_a) = (
                        crate::term::tuple_count(carrier.num_objects(), n),
                        crate::term::tuple_count(carrier.num_arrows(), n),
                    );
                    if obj.len() != want_o || arr.len() != want_a {
                        return Err(Diagnostic::new(
                            *span,
                            format!(
                                "{op} needs {want_o} object and {want_a} arrow entries, found {} and {}",
                                obj.len(),
                                arr.len()
                            ),
                        ));
                    }
                    ops[o] = Some(OpTable { arity: n, obj, arr });
                }
                ModelItem::Nat { span, cell, arrows } => {
                    let c = theory.cell(cell).map_err(|_| Diagnostic::new(*span, format!("{cell} is not a cell of {}", decl.theory)))?;
                    let comps = arrows
                        .iter()
                        .map(|n| carrier.arrow(n).ok_or_else(|| Diagnostic::new(*span, format!("unknown arrow {n}"))))
                        .collect::<Result<Vec<_>, _>>()?;
                    let sym = &theory.cells[c];
                    let (source, width) = (sym.source.source, sym.source.target());
                    let want = crate::term::tuple_count(carrier.num_objects(), source) * width;
                    if comps.len() != want {
                        return Err(Diagnostic::new(*span, format!("{cell} needs {want} components, found {}", comps.len())));
                    }
                    cells[c] = Some(NatTable { source, width, comps });
                }
                ModelItem::Size { span, .. } | ModelItem::Table { span, .. } => {
                    return Err(Diagnostic::new(*span, "category models take `functor` and `nat` entries"));
                }
            }
        }
        let ops = ops
            .into_iter()
            .enumerate()
            .map(|(i, t)| t.ok_or_else(|| Diagnostic::new(decl.span, format!("no functor for {}", sig.name(i)))))
            .collect::<Result<Vec<_>, _>>()?;
        let cells = cells
            .into_iter()
            .enumerate()
            .map(|(i, t)| t.ok_or_else(|| Diagnostic::new(decl.span, format!("no components for {}", theory.cells[i].name))))
            .collect::<Result<Vec<_>, _>>()?;
        let model = CatModel {
            name: decl.name.clone(),
            theory,
            carrier,
            ops,
            cells,
        };
        validate_cat_model(&model).map_err(diag(decl.span))?;
        self.lib.cat_models.insert(decl.name.clone(), model);
        Ok(())
    }

    fn probes(&mut self, decl: &ProbesDecl) -> Result<(), Diagnostic> {
        Self::fresh(&self.lib.probes, &decl.name, decl.span, "probe list")?;
        for m in &decl.models {
            if !self.lib.cat_models.contains_key(m) {
                return Err(Diagnostic::new(decl.span, format!("unknown category model {m}")));
            }
        }
        self.lib.probes.insert(decl.name.clone(), decl.models.clone());
        Ok(())
    }
}
