//! Commutativity data for 2-theories: tables of cells between the two sides
//! of every commutativity square, their extension to composite maps, and the
//! coherence checks that make such a table a genuine commutativity structure.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::cat_model::{find_nat_table, CatModel, TupleMap};
use crate::equality::{decide_equal, rewrite_equal, DecideOptions, EqualityVerdict};
use crate::error::{Error, Result};
use crate::fincat::{ArrId, ObjId};
use crate::rewrite::DEFAULT_BUDGET;
use crate::term::{tensor_ops, tensor_ops_rev, Morphism, OpId, Term};
use crate::theory::TheoryPresentation;
use crate::two_cells::{normalize_pasting, CellId, Pasting, TwoTheory, Weakness};

/// Cells `rev(a, b) => tensor(a, b)` for basis pairs (the other way round for
/// colax tables), where `rev` applies `b` to the rows first and `tensor`
/// applies `a` to the columns first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaTable {
    pub name: String,
    pub weakness: Weakness,
    pub symmetric: bool,
    pub entries: BTreeMap<(OpId, OpId), Pasting>,
}

/// A map of 2-theories, given on generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoryMap {
    pub name: String,
    /// Image of each generator of the source, a map `arity -> 1`.
    pub ops: Vec<Morphism>,
    /// Image of each generating cell of the source.
    pub cells: Vec<Pasting>,
}

impl TheoryMap {
    pub fn identity(theory: &TwoTheory) -> TheoryMap {
        TheoryMap {
            name: "id".into(),
            ops: (0..theory.base.signature.ops.len())
                .map(|o| theory.base.generator(o))
                .collect(),
            cells: (0..theory.cells.len()).map(Pasting::Gen).collect(),
        }
    }

    pub fn apply_term(&self, t: &Term) -> Term {
        match t {
            Term::Proj(i) => Term::Proj(*i),
            Term::Apply(op, args) => {
                let args: Vec<Term> = args.iter().map(|a| self.apply_term(a)).collect();
                self.ops[*op].components[0].subst(&args)
            }
        }
    }

    pub fn apply(&self, f: &Morphism) -> Morphism {
        Morphism {
            source: f.source,
            components: f.components.iter().map(|t| self.apply_term(t)).collect(),
        }
    }

    pub fn apply_pasting(&self, p: &Pasting) -> Pasting {
        match p {
            Pasting::Id(f) => Pasting::Id(self.apply(f)),
            Pasting::Gen(c) => self.cells[*c].clone(),
            Pasting::Inverse(q) => Pasting::inverse(self.apply_pasting(q)),
            Pasting::Vert(a, b) => Pasting::vert(self.apply_pasting(a), self.apply_pasting(b)),
            Pasting::WhiskerL(h, q) => Pasting::whisker_l(self.apply(h), self.apply_pasting(q)),
            Pasting::WhiskerR(q, h) => Pasting::whisker_r(self.apply_pasting(q), self.apply(h)),
            Pasting::PowerL(k, q) => Pasting::power_l(*k, self.apply_pasting(q)),
            Pasting::PowerR(q, k) => Pasting::power_r(self.apply_pasting(q), *k),
            Pasting::Tuple(ps) => Pasting::Tuple(ps.iter().map(|q| self.apply_pasting(q)).collect()),
        }
    }
}

/// Check that a map sends generators to well-formed maps, equations to
/// equalities and cells to cells with the translated boundaries. Equations the
/// rewriter cannot join are accepted if no counter-model refutes them and all
/// probes satisfy them.
pub fn validate_theory_map(source: &TwoTheory, target: &TwoTheory, map: &TheoryMap, probes: &[CatModel]) -> Result<()> {
    let sig = &source.base.signature;
    if map.ops.len() != sig.ops.len() || map.cells.len() != source.cells.len() {
        return Err(Error::Arity(format!("map {} does not cover every generator", map.name)));
    }
    for (op, img) in map.ops.iter().enumerate() {
        img.check(&target.base.signature)?;
        if img.source != sig.arity(op) || img.target() != 1 {
            return Err(Error::Arity(format!(
                "map {} sends {} to a map {} -> {}",
                map.name,
                sig.name(op),
                img.source,
                img.target()
            )));
        }
    }
    for eq in &source.base.equations {
        let (l, r) = (map.apply(&eq.lhs), map.apply(&eq.rhs));
        match decide_equal(&target.base, &l, &r, DecideOptions::default())? {
            EqualityVerdict::Equal { .. } => {}
            EqualityVerdict::NotEqual { .. } => {
                return Err(Error::Precondition(format!(
                    "map {} does not preserve equation {}",
                    map.name, eq.name
                )))
            }
            EqualityVerdict::Unknown { .. } => {
                for probe in probes {
                    for i in 0..probe.arr_count(l.source) {
                        let fs = probe.arr_tuple(i, l.source);
                        if probe.map_arr(&l, &fs) != probe.map_arr(&r, &fs) {
                            return Err(Error::Precondition(format!(
                                "map {} breaks equation {} in {}",
                                map.name, eq.name, probe.name
                            )));
                        }
                    }
                }
            }
        }
    }
    for (c, cell) in source.cells.iter().enumerate() {
        let (s, t) = target.boundary(&map.cells[c])?;
        target.same_map(&s, &map.apply(&cell.source), &format!("image of cell {}", cell.name))?;
        target.same_map(&t, &map.apply(&cell.target), &format!("image of cell {}", cell.name))?;
        if cell.invertible && !target.is_invertible(&map.cells[c]) {
            return Err(Error::Precondition(format!(
                "map {} sends invertible cell {} to a non-invertible one",
                map.name, cell.name
            )));
        }
    }
    Ok(())
}

/// The extension of a table from basis pairs to arbitrary maps, phrased in a
/// target theory through a map `rho` (the identity for ordinary tables).
pub struct Extension<'a> {
    pub source: &'a TwoTheory,
    pub target: &'a TwoTheory,
    pub rho: &'a TheoryMap,
    pub table: &'a SigmaTable,
}

impl Extension<'_> {
    fn colax(&self) -> bool {
        self.table.weakness.is_colax()
    }

    fn join(&self, first: Pasting, second: Pasting) -> Pasting {
        if self.colax() {
            Pasting::vert(second, first)
        } else {
            Pasting::vert(first, second)
        }
    }

    pub fn entry(&self, a: OpId, b: OpId) -> Result<Pasting> {
        self.table.entries.get(&(a, b)).cloned().ok_or_else(|| {
            let sig = &self.source.base.signature;
            Error::Malformed(format!(
                "table {} has no entry for ({}, {})",
                self.table.name,
                sig.name(a),
                sig.name(b)
            ))
        })
    }

    fn generator(&self, op: OpId) -> Morphism {
        self.rho.ops[op].clone()
    }

    /// The cell between `rev(g, d)` and `tensor(g, d)` for terms `g` in
    /// context `p` and `d` in context `k`.
    pub fn sigma(&self, g: &Term, p: usize, d: &Term, k: usize) -> Result<Pasting> {
        let gm = Morphism {
            source: p,
            components: vec![g.clone()],
        };
        let dm = Morphism {
            source: k,
            components: vec![d.clone()],
        };
        match g {
            Term::Proj(_) => Ok(Pasting::Id(self.rho.apply(&tensor_ops_rev(&gm, &dm)))),
            Term::Apply(a, ts) => {
                let inner = Morphism {
                    source: p,
                    components: ts.clone(),
                };
                let parts = ts
                    .iter()
                    .map(|t| self.sigma(t, p, d, k))
                    .collect::<Result<Vec<_>>>()?;
                let tuple = if parts.is_empty() {
                    Pasting::Id(self.rho.apply(&Morphism::power_left(p, &dm).compose(&inner)?))
                } else {
                    Pasting::Tuple(parts)
                };
                let first = Pasting::whisker_r(tuple, self.generator(*a));
                let second = Pasting::whisker_l(
                    self.rho.apply(&Morphism::power_right(&inner, k)),
                    self.sigma_op(*a, d, k)?,
                );
                Ok(self.join(first, second))
            }
        }
    }

    /// The cell for a generator `a` against a term `d` in context `k`.
    pub fn sigma_op(&self, a: OpId, d: &Term, k: usize) -> Result<Pasting> {
        let n = self.source.base.arity(a);
        let am = self.source.base.generator(a);
        let dm = Morphism {
            source: k,
            components: vec![d.clone()],
        };
        match d {
            Term::Proj(_) => Ok(Pasting::Id(self.rho.apply(&tensor_ops_rev(&am, &dm)))),
            Term::Apply(b, ds) => {
                let inner = Morphism {
                    source: k,
                    components: ds.clone(),
                };
                let first = Pasting::whisker_l(self.rho.apply(&Morphism::power_left(n, &inner)), self.entry(a, *b)?);
                let parts = ds
                    .iter()
                    .map(|t| self.sigma_op(a, t, k))
                    .collect::<Result<Vec<_>>>()?;
                let tuple = if parts.is_empty() {
                    let rows = Morphism::power_left(n, &inner).compose(&Morphism::power_right(&am, ds.len()))?;
                    Pasting::Id(self.rho.apply(&rows))
                } else {
                    Pasting::Tuple(parts)
                };
                let second = Pasting::whisker_r(tuple, self.generator(*b));
                Ok(self.join(first, second))
            }
        }
    }

    /// The cell for arbitrary maps `g: p -> q` and `d: k -> l`, a tuple over
    /// output pairs in row-major order.
    pub fn sigma_map(&self, g: &Morphism, d: &Morphism) -> Result<Pasting> {
        let mut parts = Vec::new();
        for gi in &g.components {
            for dj in &d.components {
                parts.push(self.sigma(gi, g.source, dj, d.source)?);
            }
        }
        Ok(match parts.len() {
            0 => Pasting::Id(self.rho.apply(&tensor_ops_rev(g, d))),
            1 => parts.pop().expect("one part"),
            _ => Pasting::Tuple(parts),
        })
    }

    /// Both sides of the compatibility of a cell `s: g => g'` (maps `p -> q`)
    /// with a basis operation `b` in the second slot.
    pub fn gray2_horizontal(&self, s: &Pasting, g: &Morphism, g2: &Morphism, b: OpId) -> Result<(Pasting, Pasting)> {
        let bm = self.source.base.generator(b);
        let k = bm.source;
        let (p, q) = (g.source, g.target());
        let after = Pasting::whisker_r(Pasting::power_r(s.clone(), k), self.rho.apply(&Morphism::power_left(q, &bm)));
        let before = Pasting::whisker_l(self.rho.apply(&Morphism::power_left(p, &bm)), s.clone());
        let (sg, sg2) = (self.sigma_map(g, &bm)?, self.sigma_map(g2, &bm)?);
        Ok(if self.colax() {
            (Pasting::vert(after, sg2), Pasting::vert(sg, before))
        } else {
            (Pasting::vert(sg, after), Pasting::vert(before, sg2))
        })
    }

    /// Both sides of the compatibility of a cell `s: d => d'` (maps `k -> l`)
    /// with a basis operation `a` in the first slot.
    pub fn gray2_vertical(&self, s: &Pasting, d: &Morphism, d2: &Morphism, a: OpId) -> Result<(Pasting, Pasting)> {
        let am = self.source.base.generator(a);
        let m = am.source;
        let (k, l) = (d.source, d.target());
        let after = Pasting::whisker_l(self.rho.apply(&Morphism::power_right(&am, k)), s.clone());
        let before = Pasting::whisker_r(Pasting::power_l(m, s.clone()), self.rho.apply(&Morphism::power_right(&am, l)));
        let (sd, sd2) = (self.sigma_map(&am, d)?, self.sigma_map(&am, d2)?);
        Ok(if self.colax() {
            (Pasting::vert(after, sd2), Pasting::vert(sd, before))
        } else {
            (Pasting::vert(sd, after), Pasting::vert(before, sd2))
        })
    }
}

/// Equality of two parallel pastings relative to a set of probe models.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum RelativeVerdict {
    SyntacticallyEqual,
    EqualOnProbes {
        probes: usize,
    },
    Distinguished {
        probe: String,
        objects: Vec<String>,
        lhs: Vec<String>,
        rhs: Vec<String>,
    },
}

impl RelativeVerdict {
    pub fn holds(&self) -> bool {
        !matches!(self, RelativeVerdict::Distinguished { .. })
    }
}

fn replace_all(p: &Pasting, from: &Pasting, to: &Pasting) -> Pasting {
    if p == from {
        return to.clone();
    }
    match p {
        Pasting::Id(_) | Pasting::Gen(_) => p.clone(),
        Pasting::Inverse(q) => Pasting::inverse(replace_all(q, from, to)),
        Pasting::Vert(a, b) => Pasting::vert(replace_all(a, from, to), replace_all(b, from, to)),
        Pasting::WhiskerL(h, q) => Pasting::whisker_l(h.clone(), replace_all(q, from, to)),
        Pasting::WhiskerR(q, h) => Pasting::whisker_r(replace_all(q, from, to), h.clone()),
        Pasting::PowerL(k, q) => Pasting::power_l(*k, replace_all(q, from, to)),
        Pasting::PowerR(q, k) => Pasting::power_r(replace_all(q, from, to), *k),
        Pasting::Tuple(ps) => Pasting::Tuple(ps.iter().map(|q| replace_all(q, from, to)).collect()),
    }
}

/// Bounded syntactic comparison: normalize both sides, then try rewriting
/// with each cell equation in both directions once.
pub fn syntactically_equal(theory: &TwoTheory, p: &Pasting, q: &Pasting) -> bool {
    if p == q {
        return true;
    }
    let mut budget = DEFAULT_BUDGET;
    let (Some(np), Some(nq)) = (
        normalize_pasting(theory, p, &mut budget),
        normalize_pasting(theory, q, &mut budget),
    ) else {
        return false;
    };
    if np == nq {
        return true;
    }
    for eq in &theory.cell_equations {
        let (Some(l), Some(r)) = (
            normalize_pasting(theory, &eq.lhs, &mut budget),
            normalize_pasting(theory, &eq.rhs, &mut budget),
        ) else {
            return false;
        };
        for (from, to) in [(&l, &r), (&r, &l)] {
            let a = normalize_pasting(theory, &replace_all(&np, from, to), &mut budget);
            let b = normalize_pasting(theory, &replace_all(&nq, from, to), &mut budget);
            match (a, b) {
                (Some(a), Some(b)) if a == b || a == nq || b == np => return true,
                (None, _) | (_, None) => return false,
                _ => {}
            }
        }
    }
    false
}

pub fn pastings_equal(theory: &TwoTheory, p: &Pasting, q: &Pasting, probes: &[CatModel]) -> Result<RelativeVerdict> {
    let (s1, t1) = theory.boundary(p)?;
    let (s2, t2) = theory.boundary(q)?;
    theory.same_map(&s1, &s2, "sources of compared cells")?;
    theory.same_map(&t1, &t2, "targets of compared cells")?;
    if syntactically_equal(theory, p, q) {
        return Ok(RelativeVerdict::SyntacticallyEqual);
    }
    for probe in probes {
        if *probe.theory != *theory {
            return Err(Error::Precondition(format!(
                "probe {} is not a model of {}",
                probe.name,
                theory.name()
            )));
        }
        let (a, b) = (probe.evaluate_pasting(p)?, probe.evaluate_pasting(q)?);
        if let Some(i) = (0..probe.obj_count(a.source)).find(|&i| a.at(i) != b.at(i)) {
            let names = |fs: &[ArrId]| fs.iter().map(|&f| probe.carrier.arrows[f].name.clone()).collect();
            return Ok(RelativeVerdict::Distinguished {
                probe: probe.name.clone(),
                objects: probe
                    .obj_tuple(i, a.source)
                    .iter()
                    .map(|&x| probe.carrier.objects[x].clone())
                    .collect(),
                lhs: names(a.at(i)),
                rhs: names(b.at(i)),
            });
        }
    }
    Ok(RelativeVerdict::EqualOnProbes { probes: probes.len() })
}

#[derive(Clone, Debug, Serialize)]
pub struct InstanceResult {
    pub rule: String,
    pub instance: String,
    pub verdict: RelativeVerdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoherenceReport {
    pub table: String,
    pub weakness: Weakness,
    pub coherent: bool,
    pub results: Vec<InstanceResult>,
}

impl CoherenceReport {
    pub fn failures(&self) -> impl Iterator<Item = &InstanceResult> {
        self.results.iter().filter(|r| !r.verdict.holds())
    }
}

struct Instance {
    rule: &'static str,
    instance: String,
    lhs: Pasting,
    rhs: Pasting,
}

fn run_instances(target: &TwoTheory, instances: Vec<Instance>, probes: &[CatModel]) -> Result<Vec<InstanceResult>> {
    instances
        .into_par_iter()
        .map(|inst| {
            Ok(InstanceResult {
                verdict: pastings_equal(target, &inst.lhs, &inst.rhs, probes)?,
                rule: inst.rule.to_string(),
                instance: inst.instance,
            })
        })
        .collect()
}

/// Check that every entry has the right boundary and strength.
pub fn validate_sigma(ext: &Extension) -> Result<()> {
    let s = &ext.source.base;
    let basis = s.basis();
    for (&(a, b), _) in ext.table.entries.iter() {
        if !basis.contains(&a) || !basis.contains(&b) {
            return Err(Error::Malformed(format!(
                "table {} has an entry for ({}, {}) outside the basis",
                ext.table.name,
                s.signature.name(a),
                s.signature.name(b)
            )));
        }
    }
    for &a in &basis {
        for &b in &basis {
            let e = ext.entry(a, b)?;
            let (src, tgt) = ext.target.boundary(&e)?;
            let (am, bm) = (s.generator(a), s.generator(b));
            let (mut want_s, mut want_t) = (ext.rho.apply(&tensor_ops_rev(&am, &bm)), ext.rho.apply(&tensor_ops(&am, &bm)));
            if ext.colax() {
                std::mem::swap(&mut want_s, &mut want_t);
            }
            let what = format!("entry ({}, {}) of {}", s.signature.name(a), s.signature.name(b), ext.table.name);
            ext.target
                .same_map(&src, &want_s, &what)
                .map_err(|e| Error::Malformed(e.to_string()))?;
            ext.target
                .same_map(&tgt, &want_t, &what)
                .map_err(|e| Error::Malformed(e.to_string()))?;
            match ext.table.weakness {
                Weakness::Pseudo if !ext.target.is_invertible(&e) => {
                    return Err(Error::Malformed(format!("{what} is not invertible")));
                }
                Weakness::Strict => {
                    let mut budget = DEFAULT_BUDGET;
                    if !matches!(normalize_pasting(ext.target, &e, &mut budget), Some(Pasting::Id(_))) {
                        return Err(Error::Malformed(format!("{what} is not an identity")));
                    }
                }
                _ => {}
            }
        }
    }
    Ok(())
}

fn gray_instances(ext: &Extension) -> Result<Vec<Instance>> {
    let s = &ext.source.base;
    let name = |o: OpId| s.signature.name(o).to_string();
    let basis = s.basis();
    let mut out = Vec::new();
    for eq in &s.equations {
        for &b in &basis {
            let bm = s.generator(b);
            out.push(Instance {
                rule: "gray1-horizontal",
                instance: format!("equation {}, basis {}", eq.name, name(b)),
                lhs: ext.sigma_map(&eq.lhs, &bm)?,
                rhs: ext.sigma_map(&eq.rhs, &bm)?,
            });
        }
        for &a in &basis {
            let am = s.generator(a);
            out.push(Instance {
                rule: "gray1-vertical",
                instance: format!("basis {}, equation {}", name(a), eq.name),
                lhs: ext.sigma_map(&am, &eq.lhs)?,
                rhs: ext.sigma_map(&am, &eq.rhs)?,
            });
        }
    }
    for (c, cell) in ext.source.cells.iter().enumerate() {
        let sc = ext.rho.cells[c].clone();
        for &b in &basis {
            let (lhs, rhs) = ext.gray2_horizontal(&sc, &cell.source, &cell.target, b)?;
            out.push(Instance {
                rule: "gray2-horizontal",
                instance: format!("cell {}, basis {}", cell.name, name(b)),
                lhs,
                rhs,
            });
        }
        for &a in &basis {
            let (lhs, rhs) = ext.gray2_vertical(&sc, &cell.source, &cell.target, a)?;
            out.push(Instance {
                rule: "gray2-vertical",
                instance: format!("basis {}, cell {}", name(a), cell.name),
                lhs,
                rhs,
            });
        }
    }
    for &b in &basis {
        let bm = s.generator(b);
        let x = Morphism::identity(1);
        out.push(Instance {
            rule: "unit",
            instance: format!("variable, basis {}", name(b)),
            lhs: ext.sigma_map(&x, &bm)?,
            rhs: Pasting::Id(ext.rho.apply(&tensor_ops_rev(&x, &bm))),
        });
        out.push(Instance {
            rule: "unit",
            instance: format!("basis {}, variable", name(b)),
            lhs: ext.sigma_map(&bm, &x)?,
            rhs: Pasting::Id(ext.rho.apply(&tensor_ops_rev(&bm, &x))),
        });
    }
    if ext.table.symmetric {
        for &a in &basis {
            for &b in &basis {
                let (am, bm) = (s.generator(a), s.generator(b));
                let swap = Morphism::transpose(am.source, bm.source);
                let there = ext.entry(a, b)?;
                let back = Pasting::whisker_l(swap, ext.entry(b, a)?);
                let id_side = if ext.colax() {
                    ext.rho.apply(&tensor_ops(&am, &bm))
                } else {
                    ext.rho.apply(&tensor_ops_rev(&am, &bm))
                };
                out.push(Instance {
                    rule: "symmetric",
                    instance: format!("({}, {})", name(a), name(b)),
                    lhs: Pasting::vert(there, back),
                    rhs: Pasting::Id(id_side),
                });
            }
        }
    }
    Ok(out)
}

/// Run every coherence instance of a table on the probes.
pub fn check_sigma_coherence(theory: &TwoTheory, table: &SigmaTable, probes: &[CatModel]) -> Result<CoherenceReport> {
    let rho = TheoryMap::identity(theory);
    let ext = Extension {
        source: theory,
        target: theory,
        rho: &rho,
        table,
    };
    coherence_of(&ext, probes)
}

fn coherence_of(ext: &Extension, probes: &[CatModel]) -> Result<CoherenceReport> {
    validate_sigma(ext)?;
    let mut results = Vec::new();
    if ext.table.weakness == Weakness::Strict {
        let s = &ext.source.base;
        let basis = s.basis();
        for &a in &basis {
            for &b in &basis {
                let (am, bm) = (s.generator(a), s.generator(b));
                let (l, r) = (ext.rho.apply(&tensor_ops_rev(&am, &bm)), ext.rho.apply(&tensor_ops(&am, &bm)));
                let verdict = match decide_equal(&ext.target.base, &l, &r, DecideOptions::default())? {
                    EqualityVerdict::NotEqual { model, witness, .. } => RelativeVerdict::Distinguished {
                        probe: format!("set model of size {}", model.size),
                        objects: witness.iter().map(|w| w.to_string()).collect(),
                        lhs: model.eval(&l, &witness).iter().map(|w| w.to_string()).collect(),
                        rhs: model.eval(&r, &witness).iter().map(|w| w.to_string()).collect(),
                    },
                    _ => RelativeVerdict::SyntacticallyEqual,
                };
                results.push(InstanceResult {
                    rule: "strict".into(),
                    instance: format!("({}, {})", s.signature.name(a), s.signature.name(b)),
                    verdict,
                });
            }
        }
    }
    results.extend(run_instances(ext.target, gray_instances(ext)?, probes)?);
    Ok(CoherenceReport {
        table: ext.table.name.clone(),
        weakness: ext.table.weakness,
        coherent: results.iter().all(|r| r.verdict.holds()),
        results,
    })
}

/// The two compatibilities making the pseudomonoid built from the table
/// associative, for every basis triple: the cell for the first pair against
/// the third operation, and the first operation against the cell for the last
/// pair.
pub fn derived_associativity_check(theory: &TwoTheory, table: &SigmaTable, probes: &[CatModel]) -> Result<CoherenceReport> {
    let rho = TheoryMap::identity(theory);
    let ext = Extension {
        source: theory,
        target: theory,
        rho: &rho,
        table,
    };
    validate_sigma(&ext)?;
    let instances = associativity_instances(&ext)?;
    let results = run_instances(theory, instances, probes)?;
    Ok(CoherenceReport {
        table: table.name.clone(),
        weakness: table.weakness,
        coherent: results.iter().all(|r| r.verdict.holds()),
        results,
    })
}

/// Sides of the associativity compatibilities for one basis triple.
pub fn associativity_sides(ext: &Extension, a: OpId, b: OpId, c: OpId) -> Result<[(Pasting, Pasting); 2]> {
    let s = &ext.source.base;
    let (am, bm, cm) = (s.generator(a), s.generator(b), s.generator(c));
    let ab = ext.entry(a, b)?;
    let (rev_ab, ten_ab) = (tensor_ops_rev(&am, &bm), tensor_ops(&am, &bm));
    let (from_ab, to_ab) = if ext.colax() { (ten_ab, rev_ab) } else { (rev_ab, ten_ab) };
    let first = ext.gray2_horizontal(&ab, &from_ab, &to_ab, c)?;
    let bc = ext.entry(b, c)?;
    let (rev_bc, ten_bc) = (tensor_ops_rev(&bm, &cm), tensor_ops(&bm, &cm));
    let (from_bc, to_bc) = if ext.colax() { (ten_bc, rev_bc) } else { (rev_bc, ten_bc) };
    let second = ext.gray2_vertical(&bc, &from_bc, &to_bc, a)?;
    Ok([first, second])
}

fn associativity_instances(ext: &Extension) -> Result<Vec<Instance>> {
    let s = &ext.source.base;
    let basis = s.basis();
    let name = |o: OpId| s.signature.name(o).to_string();
    let mut out = Vec::new();
    for &a in &basis {
        for &b in &basis {
            for &c in &basis {
                let [(l1, r1), (l2, r2)] = associativity_sides(ext, a, b, c)?;
                let triple = format!("({}, {}, {})", name(a), name(b), name(c));
                out.push(Instance {
                    rule: "associativity-left",
                    instance: triple.clone(),
                    lhs: l1,
                    rhs: r1,
                });
                out.push(Instance {
                    rule: "associativity-right",
                    instance: triple,
                    lhs: l2,
                    rhs: r2,
                });
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct TripleCheck {
    pub objects: [String; 3],
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct YangBaxterReport {
    pub model: String,
    pub holds: bool,
    pub triples: Vec<TripleCheck>,
}

/// The braid relation on every triple of objects, with associators inserted
/// when the model has them:
/// `(b_yz 1)(1 b_xz)(b_xy 1) = (1 b_xy)(b_xz 1)(1 b_yz)`.
pub fn yang_baxter_check(model: &CatModel, tensor: OpId, braiding: CellId, associator: Option<CellId>) -> Result<YangBaxterReport> {
    let c = &model.carrier;
    let b_table = model
        .cells
        .get(braiding)
        .ok_or_else(|| Error::Precondition("model has no braiding table".into()))?;
    if model.theory.base.arity(tensor) != 2 || b_table.source != 2 || b_table.width != 1 {
        return Err(Error::Precondition("braiding must be a cell between binary maps".into()));
    }
    let t = |x: ObjId, y: ObjId| model.op_obj(tensor, &[x, y]);
    let ta = |f: ArrId, g: ArrId| model.op_arr(tensor, &[f, g]);
    let b = |x: ObjId, y: ObjId| b_table.at(model.obj_index(&[x, y]))[0];
    let a = |x: ObjId, y: ObjId, z: ObjId| -> Result<ArrId> {
        match associator {
            Some(cell) => Ok(model.cells[cell].at(model.obj_index(&[x, y, z]))[0]),
            None => {
                let (l, r) = (t(t(x, y), z), t(x, t(y, z)));
                if l != r {
                    return Err(Error::Precondition("tensor is not strictly associative and no associator given".into()));
                }
                Ok(c.id(l))
            }
        }
    };
    let ainv = |x, y, z| -> Result<ArrId> {
        let f = a(x, y, z)?;
        c.inverse(f)
            .ok_or_else(|| Error::Precondition("associator component is not invertible".into()))
    };
    let path = |arrows: &[ArrId]| -> Result<ArrId> {
        c.compose_path(arrows)
            .ok_or_else(|| Error::Precondition("braid relation composite is ill-typed".into()))
    };
    let id = |x: ObjId| c.id(x);
    let mut triples = Vec::new();
    let n = c.num_objects();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let lhs = path(&[
                    ta(b(x, y), id(z)),
                    a(y, x, z)?,
                    ta(id(y), b(x, z)),
                    ainv(y, z, x)?,
                    ta(b(y, z), id(x)),
                ])?;
                let rhs = path(&[
                    a(x, y, z)?,
                    ta(id(x), b(y, z)),
                    ainv(x, z, y)?,
                    ta(b(x, z), id(y)),
                    a(z, x, y)?,
                    ta(id(z), b(x, y)),
                    ainv(z, y, x)?,
                ])?;
                triples.push(TripleCheck {
                    objects: [c.objects[x].clone(), c.objects[y].clone(), c.objects[z].clone()],
                    lhs: c.arrows[lhs].name.clone(),
                    rhs: c.arrows[rhs].name.clone(),
                    holds: lhs == rhs,
                });
            }
        }
    }
    Ok(YangBaxterReport {
        model: model.name.clone(),
        holds: triples.iter().all(|t| t.holds),
        triples,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct UnitCheck {
    pub op: String,
    /// 1-based insertion position.
    pub position: usize,
    pub syntactic: bool,
    /// Probes on which no invertible comparison with the identity exists.
    pub failing_probes: Vec<String>,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CommutingOverReport {
    pub map: String,
    pub coherence: CoherenceReport,
    pub unit: Vec<UnitCheck>,
    pub passes: bool,
}

/// Whether `f: 1 -> 1` is invertibly comparable with the identity in a probe.
pub(crate) fn iso_to_identity(probe: &CatModel, f: &Morphism) -> bool {
    let c = &probe.carrier;
    let obj = |xs: &[ObjId]| probe.map_obj(f, xs)[0];
    let arr = |fs: &[ArrId]| probe.map_arr(f, fs)[0];
    let id_obj = |xs: &[ObjId]| xs[0];
    let id_arr = |fs: &[ArrId]| fs[0];
    find_nat_table(
        &[c],
        c,
        &TupleMap { obj: &obj, arr: &arr },
        &TupleMap {
            obj: &id_obj,
            arr: &id_arr,
        },
        &|a| c.is_iso(a),
    )
    .is_some()
}

/// A commuting of `source` over `target` along `rho`: the coherence instances
/// for the source's equations and cells, phrased in the target, and the unit
/// laws `rho(a)` with `unit` plugged in at either place of a binary basis
/// operation being invertibly comparable with the identity.
pub fn check_commuting_over(
    source: &TwoTheory,
    target: &TwoTheory,
    rho: &TheoryMap,
    table: &SigmaTable,
    unit: Option<OpId>,
    probes: &[CatModel],
) -> Result<CommutingOverReport> {
    validate_theory_map(source, target, rho, probes)?;
    let ext = Extension {
        source,
        target,
        rho,
        table,
    };
    let coherence = coherence_of(&ext, probes)?;
    let s = &source.base;
    let mut unit_checks = Vec::new();
    if let Some(u) = unit {
        if s.arity(u) != 0 {
            return Err(Error::Precondition(format!("{} is not a constant", s.signature.name(u))));
        }
        let flat = target.iso_flattening();
        for a in s.basis().into_iter().filter(|&a| s.arity(a) == 2) {
            for k in 0..2 {
                let plugged = TheoryPresentation::unit_insertion(2, k, u).compose(&s.generator(a))?;
                let image = rho.apply(&plugged);
                let syntactic = rewrite_equal(&flat, &image, &Morphism::identity(1), DEFAULT_BUDGET)?.is_some();
                let failing_probes: Vec<String> = if syntactic {
                    Vec::new()
                } else {
                    probes
                        .iter()
                        .filter(|p| !iso_to_identity(p, &image))
                        .map(|p| p.name.clone())
                        .collect()
                };
                unit_checks.push(UnitCheck {
                    op: s.signature.name(a).to_string(),
                    position: k + 1,
                    syntactic,
                    holds: syntactic || failing_probes.is_empty(),
                    failing_probes,
                });
            }
        }
    }
    let passes = coherence.coherent && unit_checks.iter().all(|u| u.holds);
    Ok(CommutingOverReport {
        map: rho.name.clone(),
        coherence,
        unit: unit_checks,
        passes,
    })
}
