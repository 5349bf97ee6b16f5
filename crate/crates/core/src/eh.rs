//! Eckmann-Hilton conditions for 2-theories with a commutativity table, and
//! a probe for the lifting of lax homomorphisms being bijective.

use serde::Serialize;

use crate::cat_model::{power_model, CatModel};
use crate::equality::rewrite_equal;
use crate::error::{Error, Result};
use crate::lax::{compose_homs, enumerate_lax_homs, is_modification, lift, power_hom, LaxHom};
use crate::rewrite::DEFAULT_BUDGET;
use crate::sigma::{iso_to_identity, Extension, SigmaTable, TheoryMap};
use crate::term::{Morphism, OpId, Term};
use crate::two_cells::{Pasting, TwoTheory, Weakness};

#[derive(Clone, Debug, Serialize)]
pub struct Eh2Report {
    pub passes: bool,
    /// Basis operations of arity one.
    pub unary: Vec<String>,
    /// The constant every wide basis operation is unital for.
    pub unit: Option<String>,
    pub non_unital: Vec<String>,
    /// Basis operations whose table entry against themselves is not invertible.
    pub diagonal_not_invertible: Vec<String>,
    /// Pairs of basis constants whose table entry is not invertible.
    pub units_not_invertible: Vec<(String, String)>,
    pub notes: Vec<String>,
}

/// Invertible syntactically, or invertible in every probe.
fn entry_invertible(theory: &TwoTheory, p: &Pasting, probes: &[CatModel]) -> Result<bool> {
    if theory.is_invertible(p) {
        return Ok(true);
    }
    for probe in probes {
        let t = probe.evaluate_pasting(p)?;
        if !t.comps.iter().all(|&a| probe.carrier.is_iso(a)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `a` with its argument at position `k` and `u` everywhere else is
/// invertibly comparable with the identity, either after reading every
/// invertible cell as an equation or on every probe.
fn unital_at(theory: &TwoTheory, a: OpId, k: usize, u: OpId, probes: &[CatModel]) -> Result<bool> {
    let base = &theory.base;
    let n = base.arity(a);
    let insert = Morphism::new(
        1,
        (0..n)
            .map(|i| if i == k { Term::Proj(0) } else { Term::Apply(u, vec![]) })
            .collect(),
    )?;
    let f = insert.compose(&base.generator(a))?;
    if rewrite_equal(&theory.iso_flattening(), &f, &Morphism::identity(1), DEFAULT_BUDGET)?.is_some() {
        return Ok(true);
    }
    Ok(probes.iter().all(|p| iso_to_identity(p, &f)))
}

/// Checks the conditions under which lifting is locally an isomorphism: no
/// unary basis operations, every wide basis operation unital for a common
/// basis constant, and invertible table entries on the diagonal and between
/// constants.
pub fn eckmann_hilton_2d(theory: &TwoTheory, table: &SigmaTable, probes: &[CatModel]) -> Result<Eh2Report> {
    if table.weakness.is_colax() {
        return Err(Error::Precondition("the conditions are stated for lax or pseudo tables".into()));
    }
    let base = &theory.base;
    let name = |o: OpId| base.signature.name(o).to_string();
    let rho = TheoryMap::identity(theory);
    let ext = Extension {
        source: theory,
        target: theory,
        rho: &rho,
        table,
    };
    let basis = base.basis();
    let mut notes = Vec::new();
    let unary: Vec<String> = basis.iter().copied().filter(|&o| base.arity(o) == 1).map(name).collect();
    let constants: Vec<OpId> = basis.iter().copied().filter(|&o| base.arity(o) == 0).collect();
    let wide: Vec<OpId> = basis.iter().copied().filter(|&o| base.arity(o) >= 2).collect();

    let mut unit = None;
    let mut non_unital: Vec<String> = wide.iter().map(|&a| name(a)).collect();
    if wide.is_empty() {
        non_unital.clear();
        notes.push("no basis operation of arity at least 2".into());
    } else if constants.is_empty() {
        notes.push("no basis constant to serve as a unit".into());
    }
    for &u in &constants {
        let mut bad = Vec::new();
        for &a in &wide {
            let mut ok = true;
            for k in 0..base.arity(a) {
                ok &= unital_at(theory, a, k, u, probes)?;
            }
            if !ok {
                bad.push(name(a));
            }
        }
        if bad.len() < non_unital.len() || bad.is_empty() {
            non_unital = bad;
        }
        if non_unital.is_empty() {
            unit = Some(name(u));
            break;
        }
    }

    let mut diagonal_not_invertible = Vec::new();
    for &a in &basis {
        if !entry_invertible(theory, &ext.entry(a, a)?, probes)? {
            diagonal_not_invertible.push(name(a));
        }
    }
    let mut units_not_invertible = Vec::new();
    for &u in &constants {
        for &v in &constants {
            if !entry_invertible(theory, &ext.entry(u, v)?, probes)? {
                units_not_invertible.push((name(u), name(v)));
            }
        }
    }
    let passes =
        unary.is_empty() && non_unital.is_empty() && diagonal_not_invertible.is_empty() && units_not_invertible.is_empty();
    Ok(Eh2Report {
        passes,
        unary,
        unit,
        non_unital,
        diagonal_not_invertible,
        units_not_invertible,
        notes,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalIsoReport {
    pub source: String,
    pub target: String,
    pub homs: usize,
    /// Homomorphisms whose own cells are a lift of themselves.
    pub lifted: usize,
    /// Structures on a homomorphism's functor that lift it without being its
    /// own cells.
    pub extra_lifts: Vec<String>,
    pub bijection: bool,
}

/// For every lax homomorphism `f: x -> y`, the lax structures on the same
/// functor whose cells form modifications `lift_y(a) . f^n => f . lift_x(a)`.
/// Lifting is a bijection on objects exactly when that structure is `f`'s own.
pub fn eh_local_iso_probe(x: &CatModel, y: &CatModel, table: &SigmaTable) -> Result<LocalIsoReport> {
    if *x.theory != *y.theory {
        return Err(Error::Precondition("models of different theories".into()));
    }
    let w = Weakness::Lax;
    let sig = &x.theory.base.signature;
    let homs = enumerate_lax_homs(x, y, w)?;
    let mut shapes = Vec::new();
    for op in 0..sig.ops.len() {
        let n = sig.arity(op);
        shapes.push((power_model(x, n)?, power_model(y, n)?, lift(x, table, op, w)?, lift(y, table, op, w)?));
    }
    let lifts = |f: &LaxHom, g: &LaxHom| -> Result<bool> {
        for (op, (xn, yn, lx, ly)) in shapes.iter().enumerate() {
            let n = sig.arity(op);
            let upper = compose_homs(xn, yn, y, &power_hom(x, y, f, n), ly)?;
            let lower = compose_homs(xn, x, y, lx, f)?;
            if !is_modification(xn, y, &upper, &lower, &g.cells[op].comps) {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let mut lifted = 0;
    let mut extra_lifts = Vec::new();
    for f in &homs {
        if lifts(f, f)? {
            lifted += 1;
        }
        for g in homs.iter().filter(|g| g.f1 == f.f1 && *g != f) {
            if lifts(f, g)? {
                extra_lifts.push(format!("{} lifts {}", g.describe(x, y), f.describe(x, y)));
            }
        }
    }
    Ok(LocalIsoReport {
        source: x.name.clone(),
        target: y.name.clone(),
        homs: homs.len(),
        bijection: lifted == homs.len() && extra_lifts.is_empty(),
        lifted,
        extra_lifts,
    })
}
