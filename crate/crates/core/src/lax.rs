//! Lax, colax, pseudo and strict homomorphisms between finite models, their
//! modifications, and the categories they form.

use std::collections::HashMap;

use serde::Serialize;

use crate::cat_model::{enumerate_nat_tables, power_model, CatModel, NatTable, TupleMap};
use crate::error::{Error, Result, Violation};
use crate::fincat::{self, validate_category, validate_functor, ArrId, Arrow, FinCategory, FinFunctor, ObjId};
use crate::sigma::{Extension, SigmaTable, TheoryMap};
use crate::term::{tuple_at, tuple_count, tuple_index, OpId, Term};
use crate::two_cells::Weakness;

/// Largest number of structure-cell assignments tried per underlying functor.
pub const MAX_CELL_ASSIGNMENTS: usize = 256;

/// A homomorphism of models given by its underlying functor and one cell per
/// generator `a: n -> 1`. Lax cells go `Y(a)(f x) -> f(X(a) x)`, colax cells
/// the other way; pseudo cells are invertible and strict ones identities.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LaxHom {
    pub weakness: Weakness,
    pub f1: FinFunctor,
    pub cells: Vec<NatTable>,
}

/// A modification between two parallel homomorphisms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Modification {
    pub source: usize,
    pub target: usize,
    pub comps: Vec<ArrId>,
}

fn same_theory(x: &CatModel, y: &CatModel) -> Result<()> {
    if *x.theory != *y.theory {
        return Err(Error::Precondition(format!(
            "models {} and {} are over different theories",
            x.name, y.name
        )));
    }
    Ok(())
}

fn ill_typed(what: &str) -> Error {
    Error::Arity(format!("{what} does not compose"))
}

impl LaxHom {
    pub fn cell(&self, op: OpId, index: usize) -> ArrId {
        self.cells[op].comps[index]
    }

    /// The cell of a term at an object tuple, built from generator cells.
    pub fn induced(&self, x: &CatModel, y: &CatModel, t: &Term, xs: &[ObjId]) -> Result<ArrId> {
        let c = &y.carrier;
        match t {
            Term::Proj(i) => Ok(c.id(self.f1.obj[xs[*i]])),
            Term::Apply(op, args) => {
                let inner = args
                    .iter()
                    .map(|a| self.induced(x, y, a, xs))
                    .collect::<Result<Vec<_>>>()?;
                let vals: Vec<ObjId> = args.iter().map(|a| x.term_obj(a, xs)).collect();
                let own = self.cell(*op, x.obj_index(&vals));
                let lifted = y.op_arr(*op, &inner);
                let composite = if self.weakness.is_colax() {
                    c.compose(lifted, own)
                } else {
                    c.compose(own, lifted)
                };
                composite.ok_or_else(|| ill_typed("induced cell"))
            }
        }
    }

    /// A short readable label: the object map, then the cells.
    pub fn describe(&self, x: &CatModel, y: &CatModel) -> String {
        let objs: Vec<&str> = self.f1.obj.iter().map(|&o| y.carrier.objects[o].as_str()).collect();
        let head = if objs.len() == 1 {
            objs[0].to_string()
        } else {
            format!("({})", objs.join(","))
        };
        let sig = &x.theory.base.signature;
        let cells: Vec<String> = self
            .cells
            .iter()
            .enumerate()
            .map(|(op, t)| {
                let names: Vec<&str> = t.comps.iter().map(|&a| y.carrier.arrows[a].name.as_str()).collect();
                format!("{}={}", sig.name(op), names.join(","))
            })
            .collect();
        if cells.is_empty() {
            head
        } else {
            format!("{head}[{}]", cells.join(";"))
        }
    }
}

/// Ends of the cell for `op` at `xs` in the direction fixed by `weakness`.
fn cell_ends(x: &CatModel, y: &CatModel, f1: &FinFunctor, weakness: Weakness, op: OpId, xs: &[ObjId]) -> (ObjId, ObjId) {
    let fx: Vec<ObjId> = xs.iter().map(|&o| f1.obj[o]).collect();
    let lax = (y.op_obj(op, &fx), f1.obj[x.op_obj(op, xs)]);
    if weakness.is_colax() {
        (lax.1, lax.0)
    } else {
        lax
    }
}

/// Checks everything except the functor laws and the shape of the tables.
pub(crate) fn check_structure(x: &CatModel, y: &CatModel, h: &LaxHom) -> Result<()> {
    let c = &y.carrier;
    let theory = &x.theory;
    let sig = &theory.base.signature;
    for (op, table) in h.cells.iter().enumerate() {
        let n = sig.arity(op);
        for i in 0..x.obj_count(n) {
            let xs = x.obj_tuple(i, n);
            let a = table.comps[i];
            let (s, t) = cell_ends(x, y, &h.f1, h.weakness, op, &xs);
            if c.src(a) != s || c.tgt(a) != t {
                return Err(Violation::new(format!("boundary of the cell for {}", sig.name(op)), x.show_objects(&xs)).into());
            }
            match h.weakness {
                Weakness::Pseudo if !c.is_iso(a) => {
                    return Err(Violation::new(format!("cell for {} is invertible", sig.name(op)), x.show_objects(&xs)).into())
                }
                Weakness::Strict if !c.is_identity(a) => {
                    return Err(Violation::new(format!("cell for {} is an identity", sig.name(op)), x.show_objects(&xs)).into())
                }
                _ => {}
            }
        }
        for i in 0..x.arr_count(n) {
            let fs = x.arr_tuple(i, n);
            let srcs: Vec<ObjId> = fs.iter().map(|&f| x.carrier.src(f)).collect();
            let tgts: Vec<ObjId> = fs.iter().map(|&f| x.carrier.tgt(f)).collect();
            let (cs, ct) = (table.comps[x.obj_index(&srcs)], table.comps[x.obj_index(&tgts)]);
            let ffs: Vec<ArrId> = fs.iter().map(|&f| h.f1.arr[f]).collect();
            let (mut before, mut after) = (y.op_arr(op, &ffs), h.f1.arr[x.op_arr(op, &fs)]);
            if h.weakness.is_colax() {
                std::mem::swap(&mut before, &mut after);
            }
            if c.compose(after, cs) != c.compose(ct, before) {
                return Err(Violation::new(format!("naturality of the cell for {}", sig.name(op)), x.show_arrows(&fs)).into());
            }
        }
    }
    for eq in &theory.base.equations {
        let m = eq.lhs.source;
        for i in 0..x.obj_count(m) {
            let xs = x.obj_tuple(i, m);
            for (l, r) in eq.lhs.components.iter().zip(&eq.rhs.components) {
                if h.induced(x, y, l, &xs)? != h.induced(x, y, r, &xs)? {
                    return Err(Violation::new(format!("equation {}", eq.name), x.show_objects(&xs)).into());
                }
            }
        }
    }
    for (k, cell) in theory.cells.iter().enumerate() {
        let p = cell.source.source;
        for i in 0..x.obj_count(p) {
            let xs = x.obj_tuple(i, p);
            let fx: Vec<ObjId> = xs.iter().map(|&o| h.f1.obj[o]).collect();
            let (xc, yc) = (x.cells[k].at(i), y.cells[k].at(y.obj_index(&fx)));
            for (j, (g, g2)) in cell.source.components.iter().zip(&cell.target.components).enumerate() {
                let (ig, ig2) = (h.induced(x, y, g, &xs)?, h.induced(x, y, g2, &xs)?);
                let fxc = h.f1.arr[xc[j]];
                let (lhs, rhs) = if h.weakness.is_colax() {
                    (c.compose(yc[j], ig), c.compose(ig2, fxc))
                } else {
                    (c.compose(ig2, yc[j]), c.compose(fxc, ig))
                };
                if lhs.is_none() || lhs != rhs {
                    return Err(Violation::new(format!("compatibility with cell {}", cell.name), x.show_objects(&xs)).into());
                }
            }
        }
    }
    Ok(())
}

pub fn validate_lax_hom(x: &CatModel, y: &CatModel, h: &LaxHom) -> Result<()> {
    same_theory(x, y)?;
    validate_functor(&x.carrier, &y.carrier, &h.f1)?;
    let sig = &x.theory.base.signature;
    if h.cells.len() != sig.ops.len() {
        return Err(Error::Arity(format!("{} cells for {} generators", h.cells.len(), sig.ops.len())));
    }
    for (op, t) in h.cells.iter().enumerate() {
        let n = sig.arity(op);
        if t.source != n || t.width != 1 || t.comps.len() != x.obj_count(n) {
            return Err(Error::Arity(format!("cell table for {} has the wrong size", sig.name(op))));
        }
        if t.comps.iter().any(|&a| a >= y.carrier.num_arrows()) {
            return Err(Error::Malformed(format!("cell table for {} leaves the carrier", sig.name(op))));
        }
    }
    check_structure(x, y, h)
}

/// The identity homomorphism, with identity cells.
pub fn identity_hom(x: &CatModel, weakness: Weakness) -> LaxHom {
    let sig = &x.theory.base.signature;
    LaxHom {
        weakness,
        f1: FinFunctor::identity(&x.carrier),
        cells: (0..sig.ops.len())
            .map(|op| {
                let n = sig.arity(op);
                NatTable {
                    source: n,
                    width: 1,
                    comps: (0..x.obj_count(n)).map(|i| x.carrier.id(x.ops[op].obj[i])).collect(),
                }
            })
            .collect(),
    }
}

/// Whether `comps` is a modification `f => g`.
pub fn is_modification(x: &CatModel, y: &CatModel, f: &LaxHom, g: &LaxHom, comps: &[ArrId]) -> bool {
    validate_modification(x, y, f, g, comps).is_ok()
}

pub fn validate_modification(x: &CatModel, y: &CatModel, f: &LaxHom, g: &LaxHom, comps: &[ArrId]) -> Result<()> {
    let c = &y.carrier;
    if comps.len() != x.num_objects() {
        return Err(Error::Arity("modification has the wrong number of components".into()));
    }
    fincat::validate_nat(&x.carrier, c, &f.f1, &g.f1, &fincat::FinNat { comps: comps.to_vec() })?;
    let sig = &x.theory.base.signature;
    for op in 0..sig.ops.len() {
        let n = sig.arity(op);
        for i in 0..x.obj_count(n) {
            let xs = x.obj_tuple(i, n);
            let ts: Vec<ArrId> = xs.iter().map(|&o| comps[o]).collect();
            let lifted = y.op_arr(op, &ts);
            let at = comps[x.op_obj(op, &xs)];
            let (lhs, rhs) = if f.weakness.is_colax() {
                (c.compose(lifted, f.cell(op, i)), c.compose(g.cell(op, i), at))
            } else {
                (c.compose(g.cell(op, i), lifted), c.compose(at, f.cell(op, i)))
            };
            if lhs.is_none() || lhs != rhs {
                return Err(Violation::new(format!("modification square for {}", sig.name(op)), x.show_objects(&xs)).into());
            }
        }
    }
    Ok(())
}

/// All homomorphisms `x -> y` of the given weakness, in the order of their
/// underlying functors and then of their cell tables.
pub fn enumerate_lax_homs(x: &CatModel, y: &CatModel, weakness: Weakness) -> Result<Vec<LaxHom>> {
    same_theory(x, y)?;
    let sig = &x.theory.base.signature;
    let cx = &x.carrier;
    let cy = &y.carrier;
    let mut out = Vec::new();
    for f1 in fincat::enumerate_functors(cx, cy, fincat::DEFAULT_MAX_ARROWS)? {
        let mut per_op = Vec::with_capacity(sig.ops.len());
        let mut total: usize = 1;
        for op in 0..sig.ops.len() {
            let n = sig.arity(op);
            let factors = vec![cx; n];
            let src_obj = |xs: &[ObjId]| y.op_obj(op, &xs.iter().map(|&o| f1.obj[o]).collect::<Vec<_>>());
            let src_arr = |fs: &[ArrId]| y.op_arr(op, &fs.iter().map(|&a| f1.arr[a]).collect::<Vec<_>>());
            let tgt_obj = |xs: &[ObjId]| f1.obj[x.op_obj(op, xs)];
            let tgt_arr = |fs: &[ArrId]| f1.arr[x.op_arr(op, fs)];
            let lax_src = TupleMap { obj: &src_obj, arr: &src_arr };
            let lax_tgt = TupleMap { obj: &tgt_obj, arr: &tgt_arr };
            let (s, t) = if weakness.is_colax() { (&lax_tgt, &lax_src) } else { (&lax_src, &lax_tgt) };
            let allow: &dyn Fn(ArrId) -> bool = match weakness {
                Weakness::Pseudo => &|a| cy.is_iso(a),
                Weakness::Strict => &|a| cy.is_identity(a),
                _ => &|_| true,
            };
            let tables = enumerate_nat_tables(&factors, cy, s, t, allow, MAX_CELL_ASSIGNMENTS + 1)?;
            total = total.saturating_mul(tables.len());
            if total > MAX_CELL_ASSIGNMENTS {
                return Err(Error::Bound(format!(
                    "more than {MAX_CELL_ASSIGNMENTS} cell assignments for one functor {} -> {}",
                    x.name, y.name
                )));
            }
            per_op.push(tables);
        }
        let counts: Vec<usize> = per_op.iter().map(Vec::len).collect();
        for pick in 0..total {
            let mut rest = pick;
            let mut choice = vec![0; counts.len()];
            for (slot, &n) in choice.iter_mut().zip(&counts).rev() {
                *slot = rest % n;
                rest /= n;
            }
            let h = LaxHom {
                weakness,
                f1: f1.clone(),
                cells: choice
                    .iter()
                    .enumerate()
                    .map(|(op, &k)| NatTable {
                        source: sig.arity(op),
                        width: 1,
                        comps: per_op[op][k].clone(),
                    })
                    .collect(),
            };
            match check_structure(x, y, &h) {
                Ok(()) => out.push(h),
                Err(Error::Violation(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(out)
}

/// Homomorphisms `x -> y` as objects and modifications as arrows.
#[derive(Clone, Debug)]
pub struct HomCategory {
    pub weakness: Weakness,
    pub category: FinCategory,
    pub homs: Vec<LaxHom>,
    pub mods: Vec<Modification>,
    hom_index: HashMap<LaxHom, usize>,
    mod_index: HashMap<Modification, ArrId>,
}

impl HomCategory {
    pub fn find_hom(&self, h: &LaxHom) -> Option<usize> {
        self.hom_index.get(h).copied()
    }

    pub fn find_mod(&self, source: usize, target: usize, comps: &[ArrId]) -> Option<ArrId> {
        self.mod_index
            .get(&Modification {
                source,
                target,
                comps: comps.to_vec(),
            })
            .copied()
    }
}

fn arrow_label(c: &FinCategory, comps: &[ArrId]) -> String {
    let names: Vec<&str> = comps.iter().map(|&a| c.arrows[a].name.as_str()).collect();
    if names.len() == 1 {
        names[0].to_string()
    } else {
        format!("({})", names.join(","))
    }
}

pub fn hom_category(x: &CatModel, y: &CatModel, weakness: Weakness) -> Result<HomCategory> {
    let homs = enumerate_lax_homs(x, y, weakness)?;
    hom_category_of(x, y, weakness, homs)
}

/// The category on a given list of homomorphisms and all modifications
/// between them.
pub fn hom_category_of(x: &CatModel, y: &CatModel, weakness: Weakness, homs: Vec<LaxHom>) -> Result<HomCategory> {
    let cy = &y.carrier;
    let mut mods = Vec::new();
    for (i, f) in homs.iter().enumerate() {
        for (j, g) in homs.iter().enumerate() {
            for nat in fincat::enumerate_naturals(&x.carrier, cy, &f.f1, &g.f1) {
                if is_modification(x, y, f, g, &nat.comps) {
                    mods.push(Modification {
                        source: i,
                        target: j,
                        comps: nat.comps,
                    });
                }
            }
        }
    }
    let mod_index: HashMap<Modification, ArrId> = mods.iter().cloned().enumerate().map(|(k, m)| (m, k)).collect();
    let mut identities = Vec::with_capacity(homs.len());
    for (i, f) in homs.iter().enumerate() {
        let comps: Vec<ArrId> = f.f1.obj.iter().map(|&o| cy.id(o)).collect();
        let key = Modification {
            source: i,
            target: i,
            comps,
        };
        identities.push(*mod_index.get(&key).ok_or_else(|| ill_typed("identity modification"))?);
    }
    let mut composition = Vec::new();
    for (k1, f) in mods.iter().enumerate() {
        for (k2, g) in mods.iter().enumerate() {
            if f.target != g.source {
                continue;
            }
            let comps = f
                .comps
                .iter()
                .zip(&g.comps)
                .map(|(&a, &b)| cy.compose(b, a))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| ill_typed("vertical composite of modifications"))?;
            let key = Modification {
                source: f.source,
                target: g.target,
                comps,
            };
            let h = *mod_index
                .get(&key)
                .ok_or_else(|| Error::Precondition("modifications are not closed under composition".into()))?;
            composition.push((k2, k1, h));
        }
    }
    let objects: Vec<String> = homs.iter().map(|h| h.describe(x, y)).collect();
    let arrows: Vec<Arrow> = mods
        .iter()
        .map(|m| Arrow {
            name: arrow_label(cy, &m.comps),
            src: m.source,
            tgt: m.target,
        })
        .collect();
    let category = validate_category(objects, arrows, identities, &composition)?;
    let hom_index = homs.iter().cloned().enumerate().map(|(k, h)| (h, k)).collect();
    Ok(HomCategory {
        weakness,
        category,
        homs,
        mods,
        hom_index,
        mod_index,
    })
}

/// `g . f` for homomorphisms `f: x -> y` and `g: y -> z`.
pub fn compose_homs(x: &CatModel, y: &CatModel, z: &CatModel, f: &LaxHom, g: &LaxHom) -> Result<LaxHom> {
    if f.weakness.is_colax() != g.weakness.is_colax() {
        return Err(Error::Precondition("cannot compose lax and colax homomorphisms".into()));
    }
    let weakness = if f.weakness == g.weakness {
        f.weakness
    } else if f.weakness.is_colax() {
        Weakness::Colax
    } else {
        Weakness::Lax
    };
    let c = &z.carrier;
    let sig = &x.theory.base.signature;
    let mut cells = Vec::with_capacity(sig.ops.len());
    for op in 0..sig.ops.len() {
        let n = sig.arity(op);
        let mut comps = Vec::with_capacity(x.obj_count(n));
        for i in 0..x.obj_count(n) {
            let xs = x.obj_tuple(i, n);
            let fx: Vec<ObjId> = xs.iter().map(|&o| f.f1.obj[o]).collect();
            let outer = g.cell(op, y.obj_index(&fx));
            let inner = g.f1.arr[f.cell(op, i)];
            let composite = if weakness.is_colax() {
                c.compose(outer, inner)
            } else {
                c.compose(inner, outer)
            };
            comps.push(composite.ok_or_else(|| ill_typed("composite cell"))?);
        }
        cells.push(NatTable { source: n, width: 1, comps });
    }
    Ok(LaxHom {
        weakness,
        f1: f.f1.then(&g.f1),
        cells,
    })
}

/// The homomorphism `x -> y^n` with components `fs`.
pub fn tuple_hom(x: &CatModel, y: &CatModel, fs: &[LaxHom], weakness: Weakness) -> LaxHom {
    let n = fs.len();
    let (no, na) = (y.carrier.num_objects(), y.carrier.num_arrows());
    let f1 = FinFunctor {
        obj: (0..x.num_objects())
            .map(|o| tuple_index(&fs.iter().map(|f| f.f1.obj[o]).collect::<Vec<_>>(), no))
            .collect(),
        arr: (0..x.carrier.num_arrows())
            .map(|a| tuple_index(&fs.iter().map(|f| f.f1.arr[a]).collect::<Vec<_>>(), na))
            .collect(),
    };
    let sig = &x.theory.base.signature;
    let cells = (0..sig.ops.len())
        .map(|op| {
            let k = sig.arity(op);
            NatTable {
                source: k,
                width: 1,
                comps: (0..x.obj_count(k))
                    .map(|i| tuple_index(&fs.iter().map(|f| f.cell(op, i)).collect::<Vec<_>>(), na))
                    .collect(),
            }
        })
        .collect();
    debug_assert!(n == 0 || fs.iter().all(|f| f.weakness.is_colax() == weakness.is_colax()));
    LaxHom { weakness, f1, cells }
}

/// The homomorphism `x^n -> y^n` acting by `f` in every coordinate.
pub fn power_hom(x: &CatModel, y: &CatModel, f: &LaxHom, n: usize) -> LaxHom {
    let (xo, xa) = (x.carrier.num_objects(), x.carrier.num_arrows());
    let (yo, ya) = (y.carrier.num_objects(), y.carrier.num_arrows());
    let f1 = FinFunctor {
        obj: (0..tuple_count(xo, n))
            .map(|i| tuple_index(&tuple_at(i, xo, n).iter().map(|&o| f.f1.obj[o]).collect::<Vec<_>>(), yo))
            .collect(),
        arr: (0..tuple_count(xa, n))
            .map(|i| tuple_index(&tuple_at(i, xa, n).iter().map(|&a| f.f1.arr[a]).collect::<Vec<_>>(), ya))
            .collect(),
    };
    let sig = &x.theory.base.signature;
    let px = tuple_count(xo, n);
    let cells = (0..sig.ops.len())
        .map(|op| {
            let k = sig.arity(op);
            let comps = (0..tuple_count(px, k))
                .map(|i| {
                    let points: Vec<Vec<ObjId>> = tuple_at(i, px, k).iter().map(|&p| tuple_at(p, xo, n)).collect();
                    let coords: Vec<ArrId> = (0..n)
                        .map(|r| {
                            let column: Vec<ObjId> = points.iter().map(|p| p[r]).collect();
                            f.cell(op, x.obj_index(&column))
                        })
                        .collect();
                    tuple_index(&coords, ya)
                })
                .collect();
            NatTable { source: k, width: 1, comps }
        })
        .collect();
    LaxHom {
        weakness: f.weakness,
        f1,
        cells,
    }
}

/// The operation `op: n -> 1` of `y` as a homomorphism `y^n -> y`, with cells
/// taken from the commutativity table. Tables of the other direction are
/// inverted componentwise when possible.
pub fn lift(y: &CatModel, table: &SigmaTable, op: OpId, weakness: Weakness) -> Result<LaxHom> {
    let theory = &*y.theory;
    let sig = &theory.base.signature;
    let n = sig.arity(op);
    let rho = TheoryMap::identity(theory);
    let ext = Extension {
        source: theory,
        target: theory,
        rho: &rho,
        table,
    };
    let invert = table.weakness.is_colax() != weakness.is_colax() && table.weakness != Weakness::Strict;
    let c = &y.carrier;
    let mut cells = Vec::with_capacity(sig.ops.len());
    for b in 0..sig.ops.len() {
        let p = ext.sigma_map(&theory.base.generator(b), &theory.base.generator(op))?;
        let mut t = y.evaluate_pasting(&p)?;
        if invert {
            for a in t.comps.iter_mut() {
                *a = c.inverse(*a).ok_or_else(|| {
                    Error::Precondition(format!(
                        "table {} is not invertible at {}, no {} lift of {}",
                        table.name,
                        c.arrows[*a].name,
                        weakness.name(),
                        sig.name(op)
                    ))
                })?;
            }
        }
        cells.push(t);
    }
    debug_assert_eq!(y.ops[op].obj.len(), y.obj_count(n));
    Ok(LaxHom {
        weakness,
        f1: y.op_functor(op),
        cells,
    })
}

/// Lifts of every operation of a model, each checked to be a homomorphism.
pub fn lift_model(y: &CatModel, table: &SigmaTable, weakness: Weakness) -> Result<Vec<LaxHom>> {
    let sig = &y.theory.base.signature;
    let mut out = Vec::new();
    for op in 0..sig.ops.len() {
        let h = lift(y, table, op, weakness)?;
        let power = power_model(y, sig.arity(op))?;
        validate_lax_hom(&power, y, &h)?;
        out.push(h);
    }
    Ok(out)
}
