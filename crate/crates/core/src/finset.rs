//! Models of 1-theories in finite sets.

use crate::error::{Error, Result, Violation};
use crate::search::{self, Expr, Problem, TableSpec};
use crate::term::{all_tuples, tuple_count, tuple_index, Morphism, OpId, Term};
use crate::theory::TheoryPresentation;
use rayon::prelude::*;
use serde::Serialize;

pub const DEFAULT_MAX_SIZE: usize = 4;
pub const DEFAULT_MAX_CELLS: usize = 256;

/// Carrier `0..size` with one table per generator, indexed by argument tuples
/// with the first argument most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FinSetModel {
    pub size: usize,
    pub tables: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug)]
pub struct Bounds {
    pub max_size: usize,
    pub max_cells: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_size: DEFAULT_MAX_SIZE,
            max_cells: DEFAULT_MAX_CELLS,
        }
    }
}

impl FinSetModel {
    pub fn eval_term(&self, t: &Term, args: &[usize]) -> usize {
        match t {
            Term::Proj(j) => args[*j],
            Term::Apply(op, xs) => {
                let vals: Vec<usize> = xs.iter().map(|x| self.eval_term(x, args)).collect();
                self.tables[*op][tuple_index(&vals, self.size)]
            }
        }
    }

    pub fn eval(&self, f: &Morphism, args: &[usize]) -> Vec<usize> {
        f.components.iter().map(|t| self.eval_term(t, args)).collect()
    }

    pub fn op(&self, op: OpId, args: &[usize]) -> usize {
        self.tables[op][tuple_index(args, self.size)]
    }

    /// Relabel the carrier along the bijection `perm`.
    pub fn relabel(&self, perm: &[usize], theory: &TheoryPresentation) -> FinSetModel {
        let mut inv = vec![0; self.size];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let tables = (0..self.tables.len())
            .map(|op| {
                let ar = theory.arity(op);
                all_tuples(self.size, ar)
                    .map(|args| {
                        let pre: Vec<usize> = args.iter().map(|&a| inv[a]).collect();
                        perm[self.op(op, &pre)]
                    })
                    .collect()
            })
            .collect();
        FinSetModel {
            size: self.size,
            tables,
        }
    }
}

/// First failing equation instance, if any.
pub fn find_violation(theory: &TheoryPresentation, model: &FinSetModel) -> Option<Violation> {
    for eq in &theory.equations {
        for args in all_tuples(model.size, eq.lhs.source) {
            if model.eval(&eq.lhs, &args) != model.eval(&eq.rhs, &args) {
                return Some(Violation::new(eq.name.clone(), format!("{args:?}")));
            }
        }
    }
    None
}

pub fn validate_model(theory: &TheoryPresentation, size: usize, tables: Vec<Vec<usize>>) -> Result<FinSetModel> {
    if tables.len() != theory.signature.ops.len() {
        return Err(Error::Arity(format!(
            "{} tables for {} generators",
            tables.len(),
            theory.signature.ops.len()
        )));
    }
    for (op, tab) in tables.iter().enumerate() {
        let want = tuple_count(size, theory.arity(op));
        if tab.len() != want {
            return Err(Error::Arity(format!(
                "table for {} has {} entries, expected {want}",
                theory.signature.name(op),
                tab.len()
            )));
        }
        if let Some(bad) = tab.iter().find(|&&v| v >= size) {
            return Err(Error::Malformed(format!(
                "table for {} mentions element {bad} outside a carrier of {size}",
                theory.signature.name(op)
            )));
        }
    }
    let model = FinSetModel { size, tables };
    match find_violation(theory, &model) {
        Some(v) => Err(v.into()),
        None => Ok(model),
    }
}

/// Row-major `rows x cols` matrix over a carrier.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<usize>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<usize>) -> Result<Matrix> {
        if entries.len() != rows * cols {
            return Err(Error::Arity(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        Ok(Matrix { rows, cols, entries })
    }

    pub fn get(&self, i: usize, j: usize) -> usize {
        self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> Vec<usize> {
        (0..self.cols).map(|j| self.get(i, j)).collect()
    }

    pub fn column(&self, j: usize) -> Vec<usize> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            entries.extend(self.column(j));
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }
}

fn single_output(f: &Morphism) -> Result<&Term> {
    match f.components.as_slice() {
        [t] => Ok(t),
        _ => Err(Error::Arity("matrix actions need a map with target 1".into())),
    }
}

/// `alpha` applied down each column: a row of length `cols`.
pub fn act_left(model: &FinSetModel, alpha: &Morphism, m: &Matrix) -> Result<Vec<usize>> {
    let t = single_output(alpha)?;
    if alpha.source != m.rows {
        return Err(Error::Arity(format!("{}-ary map on {} rows", alpha.source, m.rows)));
    }
    Ok((0..m.cols).map(|j| model.eval_term(t, &m.column(j))).collect())
}

/// `beta` applied along each row: a column of length `rows`.
pub fn act_right(model: &FinSetModel, m: &Matrix, beta: &Morphism) -> Result<Vec<usize>> {
    let t = single_output(beta)?;
    if beta.source != m.cols {
        return Err(Error::Arity(format!("{}-ary map on {} columns", beta.source, m.cols)));
    }
    Ok((0..m.rows).map(|i| model.eval_term(t, &m.row(i))).collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct PairCheck {
    pub alpha: String,
    pub beta: String,
    pub holds: bool,
    pub witness: Option<Matrix>,
}

/// Whether `(alpha . M) . beta = alpha . (M . beta)` for every matrix, with the
/// first failing matrix in enumeration order.
pub fn commutes_in(model: &FinSetModel, alpha: &Morphism, beta: &Morphism) -> Result<Option<Matrix>> {
    let (m, k) = (alpha.source, beta.source);
    for entries in all_tuples(model.size, m * k) {
        let mat = Matrix { rows: m, cols: k, entries };
        let left = act_right(model, &Matrix::new(1, k, act_left(model, alpha, &mat)?)?, beta)?;
        let right = act_left(model, alpha, &Matrix::new(m, 1, act_right(model, &mat, beta)?)?)?;
        if left != right {
            return Ok(Some(mat));
        }
    }
    Ok(None)
}

pub fn semantic_commutativity_check(theory: &TheoryPresentation, model: &FinSetModel) -> Result<Vec<PairCheck>> {
    let basis = theory.basis();
    let mut out = Vec::new();
    for &a in &basis {
        for &b in &basis {
            let witness = commutes_in(model, &theory.generator(a), &theory.generator(b))?;
            out.push(PairCheck {
                alpha: theory.signature.name(a).to_string(),
                beta: theory.signature.name(b).to_string(),
                holds: witness.is_none(),
                witness,
            });
        }
    }
    Ok(out)
}

fn term_expr(t: &Term, args: &[usize]) -> Expr {
    match t {
        Term::Proj(j) => Expr::Lit(args[*j]),
        Term::Apply(op, xs) => Expr::Table(*op, xs.iter().map(|x| term_expr(x, args)).collect()),
    }
}

fn check_bounds(theory: &TheoryPresentation, size: usize, bounds: Bounds) -> Result<()> {
    if size > bounds.max_size {
        return Err(Error::Bound(format!("carrier size {size} exceeds {}", bounds.max_size)));
    }
    let cells: usize = theory
        .signature
        .ops
        .iter()
        .map(|o| tuple_count(size, o.arity))
        .sum();
    if cells > bounds.max_cells {
        return Err(Error::Bound(format!(
            "{cells} table cells at size {size} exceed {}",
            bounds.max_cells
        )));
    }
    Ok(())
}

/// The search problem whose solutions are the models of a given size. Cells
/// are assigned generator by generator in order of increasing arity, so
/// constants are fixed before the laws that mention them are checked.
pub fn model_problem(theory: &TheoryPresentation, size: usize) -> Problem {
    let tables = theory
        .signature
        .ops
        .iter()
        .map(|o| TableSpec {
            arity: o.arity,
            fixed: None,
        })
        .collect();
    let mut constraints = Vec::new();
    for eq in &theory.equations {
        for args in all_tuples(size, eq.lhs.source) {
            for (l, r) in eq.lhs.components.iter().zip(&eq.rhs.components) {
                constraints.push((term_expr(l, &args), term_expr(r, &args)));
            }
        }
    }
    let mut ops: Vec<OpId> = (0..theory.signature.ops.len()).collect();
    ops.sort_by_key(|&o| (theory.arity(o), o));
    let order = ops
        .iter()
        .flat_map(|&o| (0..tuple_count(size, theory.arity(o))).map(move |j| (o, j)))
        .collect();
    Problem {
        domain: size,
        tables,
        constraints,
        order: Some(order),
    }
}

/// All models on `0..size`, in search order. Work is split on the first cell.
pub fn enumerate_models(theory: &TheoryPresentation, size: usize, bounds: Bounds) -> Result<Vec<FinSetModel>> {
    check_bounds(theory, size, bounds)?;
    let p = model_problem(theory, size);
    let has_cells = p.order.as_ref().is_some_and(|o| !o.is_empty());
    let collect = |prefix: Vec<usize>| {
        let mut found = Vec::new();
        search::solve(&p, &prefix, |tables| {
            found.push(FinSetModel {
                size,
                tables: tables.to_vec(),
            });
            true
        });
        found
    };
    if !has_cells || size < 2 {
        return Ok(collect(Vec::new()));
    }
    let parts: Vec<Vec<FinSetModel>> = (0..size).into_par_iter().map(|v| collect(vec![v])).collect();
    Ok(parts.into_iter().flatten().collect())
}

/// First model of the given size, in search order, accepted by `pred`.
pub fn find_model(
    theory: &TheoryPresentation,
    size: usize,
    bounds: Bounds,
    mut pred: impl FnMut(&FinSetModel) -> bool,
) -> Result<Option<FinSetModel>> {
    check_bounds(theory, size, bounds)?;
    let p = model_problem(theory, size);
    let mut hit = None;
    search::solve(&p, &[], |tables| {
        let m = FinSetModel {
            size,
            tables: tables.to_vec(),
        };
        if pred(&m) {
            hit = Some(m);
            false
        } else {
            true
        }
    });
    Ok(hit)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Least relabelling of the tables in lexicographic order.
pub fn canonical_form(theory: &TheoryPresentation, model: &FinSetModel) -> FinSetModel {
    permutations(model.size)
        .iter()
        .map(|p| model.relabel(p, theory))
        .min()
        .expect("at least the identity permutation")
}

/// One representative per isomorphism class, in first-seen order.
pub fn up_to_iso(theory: &TheoryPresentation, models: &[FinSetModel]) -> Vec<FinSetModel> {
    let mut seen = std::collections::HashSet::new();
    models
        .iter()
        .filter(|m| seen.insert(canonical_form(theory, m)))
        .cloned()
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModelHom {
    pub map: Vec<usize>,
}

pub fn is_hom(theory: &TheoryPresentation, source: &FinSetModel, target: &FinSetModel, map: &[usize]) -> bool {
    (0..theory.signature.ops.len()).all(|op| {
        all_tuples(source.size, theory.arity(op)).all(|args| {
            let image: Vec<usize> = args.iter().map(|&a| map[a]).collect();
            map[source.op(op, &args)] == target.op(op, &image)
        })
    })
}

pub fn enumerate_homs(theory: &TheoryPresentation, source: &FinSetModel, target: &FinSetModel) -> Result<Vec<ModelHom>> {
    for (name, m) in [("source", source), ("target", target)] {
        if m.tables.len() != theory.signature.ops.len() {
            return Err(Error::Arity(format!("{name} model is not over {}", theory.name)));
        }
    }
    if tuple_count(target.size, source.size) > 1 << 16 {
        return Err(Error::Bound("too many carrier maps to enumerate".into()));
    }
    Ok(all_tuples(target.size, source.size)
        .filter(|map| is_hom(theory, source, target, map))
        .map(|map| ModelHom { map })
        .collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct LiftCount {
    /// Each lift as operation tables `X^k -> X`, one per generator.
    pub lifts: Vec<Vec<Vec<usize>>>,
    pub includes_identity_lift: bool,
    pub unique: bool,
}

/// Count the model structures on the powers of `model` inside the category of
/// models: operations `X^k -> X` that are homomorphisms for the given
/// structure and together satisfy the equations again.
pub fn eh_uniqueness_probe(theory: &TheoryPresentation, model: &FinSetModel, size_bound: usize) -> Result<LiftCount> {
    if model.size > size_bound {
        return Err(Error::Bound(format!("carrier {} exceeds {size_bound}", model.size)));
    }
    let n_ops = theory.signature.ops.len();
    // tables 0..n are the new operations, n..2n the given ones
    let mut tables: Vec<TableSpec> = theory
        .signature
        .ops
        .iter()
        .map(|o| TableSpec {
            arity: o.arity,
            fixed: None,
        })
        .collect();
    for (op, tab) in model.tables.iter().enumerate() {
        tables.push(TableSpec {
            arity: theory.arity(op),
            fixed: Some(tab.clone()),
        });
    }
    let x = model.size;
    let mut constraints = Vec::new();
    // new op `b` (k-ary) commutes with old op `a` (m-ary) on every m x k matrix
    for b in 0..n_ops {
        let k = theory.arity(b);
        for a in 0..n_ops {
            let m = theory.arity(a);
            for entries in all_tuples(x, m * k) {
                let mat = Matrix { rows: m, cols: k, entries };
                let lhs = Expr::Table(b, (0..k).map(|j| Expr::Table(n_ops + a, mat.column(j).into_iter().map(Expr::Lit).collect())).collect());
                let rhs = Expr::Table(n_ops + a, (0..m).map(|i| Expr::Table(b, mat.row(i).into_iter().map(Expr::Lit).collect())).collect());
                constraints.push((lhs, rhs));
            }
        }
    }
    for eq in &theory.equations {
        for args in all_tuples(x, eq.lhs.source) {
            for (l, r) in eq.lhs.components.iter().zip(&eq.rhs.components) {
                constraints.push((term_expr(l, &args), term_expr(r, &args)));
            }
        }
    }
    let p = Problem {
        domain: x,
        tables,
        constraints,
        order: None,
    };
    let mut lifts = Vec::new();
    let complete = search::solve(&p, &[], |tabs| {
        lifts.push(tabs[..n_ops].to_vec());
        lifts.len() <= 4096
    });
    if !complete {
        return Err(Error::Bound("more than 4096 lifts".into()));
    }
    Ok(LiftCount {
        includes_identity_lift: lifts.iter().any(|l| *l == model.tables),
        unique: lifts.len() == 1,
        lifts,
    })
}
