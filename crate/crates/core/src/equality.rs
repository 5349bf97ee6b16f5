//! Deciding equality of maps in a presented theory, and the 1-dimensional
//! commutativity and unitality checks built on it.

use crate::error::{Error, Result};
use crate::finset::{self, Bounds, FinSetModel};
use crate::rewrite::{Budget, BudgetReport, Joined, RewriteSystem, Step, DEFAULT_BUDGET};
use crate::term::{all_tuples, tensor_ops, tensor_ops_rev, Morphism, OpId};
use crate::theory::TheoryPresentation;
use serde::Serialize;

#[derive(Clone, Copy, Debug)]
pub struct DecideOptions {
    pub budget: usize,
    /// Largest carrier tried when looking for a separating model; 0 disables it.
    pub max_model_size: usize,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions {
            budget: DEFAULT_BUDGET,
            max_model_size: finset::DEFAULT_MAX_SIZE,
        }
    }
}

#[derive(Clone, Debug)]
pub enum EqualityVerdict {
    Equal { trace: Vec<Step> },
    NotEqual {
        model: FinSetModel,
        witness: Vec<usize>,
        lhs: Vec<usize>,
        rhs: Vec<usize>,
    },
    Unknown { report: BudgetReport, sizes_searched: usize },
}

impl EqualityVerdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, EqualityVerdict::Equal { .. })
    }

    pub fn is_not_equal(&self) -> bool {
        matches!(self, EqualityVerdict::NotEqual { .. })
    }
}

/// First argument tuple on which the two maps differ.
pub fn separating_tuple(model: &FinSetModel, f: &Morphism, g: &Morphism) -> Option<Vec<usize>> {
    all_tuples(model.size, f.source).find(|args| model.eval(f, args) != model.eval(g, args))
}

/// Join by rewriting only.
pub fn rewrite_equal(theory: &TheoryPresentation, f: &Morphism, g: &Morphism, budget: usize) -> Result<Option<Vec<Step>>> {
    check_parallel(f, g)?;
    let rs = RewriteSystem::from_theory(theory);
    let mut b = Budget::new(budget);
    let mut trace = Vec::new();
    for (i, (s, t)) in f.components.iter().zip(&g.components).enumerate() {
        match rs.join(s, t, i, &mut b) {
            Joined::Yes(steps) => trace.extend(steps),
            _ => return Ok(None),
        }
    }
    Ok(Some(trace))
}

fn check_parallel(f: &Morphism, g: &Morphism) -> Result<()> {
    if f.source != g.source || f.target() != g.target() {
        return Err(Error::Arity(format!(
            "maps {} -> {} and {} -> {} are not parallel",
            f.source,
            f.target(),
            g.source,
            g.target()
        )));
    }
    Ok(())
}

pub fn decide_equal(theory: &TheoryPresentation, f: &Morphism, g: &Morphism, opts: DecideOptions) -> Result<EqualityVerdict> {
    check_parallel(f, g)?;
    let rs = RewriteSystem::from_theory(theory);
    let mut budget = Budget::new(opts.budget);
    let mut trace = Vec::new();
    let mut joined = true;
    for (i, (s, t)) in f.components.iter().zip(&g.components).enumerate() {
        match rs.join(s, t, i, &mut budget) {
            Joined::Yes(steps) => trace.extend(steps),
            Joined::No | Joined::OutOfBudget => {
                joined = false;
                break;
            }
        }
    }
    if joined {
        return Ok(EqualityVerdict::Equal { trace });
    }
    let bounds = Bounds::default();
    let mut searched = 0;
    for size in 1..=opts.max_model_size {
        let found = match finset::find_model(theory, size, Bounds { max_size: opts.max_model_size.max(bounds.max_size), ..bounds }, |m| {
            separating_tuple(m, f, g).is_some()
        }) {
            Ok(found) => found,
            Err(Error::Bound(_)) => break,
            Err(e) => return Err(e),
        };
        searched = size;
        if let Some(model) = found {
            let witness = separating_tuple(&model, f, g).expect("model was chosen for separating");
            return Ok(EqualityVerdict::NotEqual {
                lhs: model.eval(f, &witness),
                rhs: model.eval(g, &witness),
                model,
                witness,
            });
        }
    }
    Ok(EqualityVerdict::Unknown {
        report: budget.report(),
        sizes_searched: searched,
    })
}

/// The two sides of the commutativity square of `alpha` and `beta`: `beta` on
/// the rows first, and `alpha` on the columns first.
pub fn square(theory: &TheoryPresentation, alpha: OpId, beta: OpId) -> (Morphism, Morphism) {
    let a = theory.generator(alpha);
    let b = theory.generator(beta);
    (tensor_ops_rev(&a, &b), tensor_ops(&a, &b))
}

#[derive(Clone, Debug)]
pub struct SquareVerdict {
    pub alpha: OpId,
    pub beta: OpId,
    pub verdict: EqualityVerdict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Commutativity {
    Commutative,
    NotCommutative,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct CommutativityReport {
    pub verdict: Commutativity,
    pub squares: Vec<SquareVerdict>,
}

pub fn check_commutative(theory: &TheoryPresentation, opts: DecideOptions) -> Result<CommutativityReport> {
    theory.validate()?;
    let basis = theory.basis();
    let mut squares = Vec::new();
    for &a in &basis {
        for &b in &basis {
            let (lhs, rhs) = square(theory, a, b);
            squares.push(SquareVerdict {
                alpha: a,
                beta: b,
                verdict: decide_equal(theory, &lhs, &rhs, opts)?,
            });
        }
    }
    let verdict = if squares.iter().all(|s| s.verdict.is_equal()) {
        Commutativity::Commutative
    } else if squares.iter().any(|s| s.verdict.is_not_equal()) {
        Commutativity::NotCommutative
    } else {
        Commutativity::Inconclusive
    };
    Ok(CommutativityReport { verdict, squares })
}

/// Per insertion position, whether `alpha` with `unit` plugged in there is the
/// identity.
pub fn check_unital(theory: &TheoryPresentation, alpha: OpId, unit: OpId, opts: DecideOptions) -> Result<Vec<EqualityVerdict>> {
    let n = theory.arity(alpha);
    if n <= 1 {
        return Err(Error::Precondition(format!(
            "unitality needs an operation of arity at least 2, {} has arity {n}",
            theory.signature.name(alpha)
        )));
    }
    if theory.arity(unit) != 0 {
        return Err(Error::Precondition(format!("{} is not a constant", theory.signature.name(unit))));
    }
    (0..n)
        .map(|k| {
            let plugged = TheoryPresentation::unit_insertion(n, k, unit).compose(&theory.generator(alpha))?;
            decide_equal(theory, &plugged, &Morphism::identity(1), opts)
        })
        .collect()
}

pub fn is_unital(theory: &TheoryPresentation, alpha: OpId, unit: OpId, opts: DecideOptions) -> Result<bool> {
    Ok(check_unital(theory, alpha, unit, opts)?.iter().all(EqualityVerdict::is_equal))
}

#[derive(Clone, Debug, Serialize)]
pub struct Eh1Report {
    pub passes: bool,
    /// The constant all operations of arity at least 2 are unital for.
    pub unit: Option<String>,
    /// Pairs of constants shown equal; commutativity allows at most one unit.
    pub units_merged: Vec<(String, String)>,
    pub non_unital: Vec<String>,
    pub unary: Vec<String>,
    pub notes: Vec<String>,
}

pub fn eh_preconditions_1d(theory: &TheoryPresentation, opts: DecideOptions) -> Result<Eh1Report> {
    let basis = theory.basis();
    let name = |o: OpId| theory.signature.name(o).to_string();
    let constants: Vec<OpId> = basis.iter().copied().filter(|&o| theory.arity(o) == 0).collect();
    let mut units_merged = Vec::new();
    let mut notes = Vec::new();
    for (i, &u) in constants.iter().enumerate() {
        for &v in &constants[i + 1..] {
            let verdict = decide_equal(theory, &theory.generator(u), &theory.generator(v), opts)?;
            if verdict.is_equal() {
                units_merged.push((name(u), name(v)));
            } else {
                notes.push(format!("constants {} and {} are not shown equal", name(u), name(v)));
            }
        }
    }
    let unary: Vec<String> = basis.iter().copied().filter(|&o| theory.arity(o) == 1).map(name).collect();
    let wide: Vec<OpId> = basis.iter().copied().filter(|&o| theory.arity(o) >= 2).collect();
    let mut chosen = None;
    let mut non_unital = Vec::new();
    if !wide.is_empty() {
        for &u in &constants {
            let mut bad = Vec::new();
            for &a in &wide {
                if !is_unital(theory, a, u, opts)? {
                    bad.push(name(a));
                }
            }
            if bad.is_empty() {
                chosen = Some(name(u));
                break;
            }
            if non_unital.is_empty() || bad.len() < non_unital.len() {
                non_unital = bad;
            }
        }
        if constants.is_empty() {
            non_unital = wide.iter().map(|&a| name(a)).collect();
            notes.push("no constant in the basis to serve as a unit".into());
        }
    } else {
        notes.push("no operation of arity at least 2, unitality holds vacuously".into());
    }
    if chosen.is_some() {
        non_unital.clear();
    }
    if !unary.is_empty() {
        notes.push(format!("unary basis operations: {}", unary.join(", ")));
    }
    let unital_ok = wide.is_empty() || chosen.is_some();
    Ok(Eh1Report {
        passes: unital_ok && unary.is_empty(),
        unit: chosen.or_else(|| constants.first().map(|&u| name(u)).filter(|_| wide.is_empty())),
        units_merged,
        non_unital,
        unary,
        notes,
    })
}
