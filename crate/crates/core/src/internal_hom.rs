//! The internal hom of two models, binary multimaps, the currying bijection
//! between them, and the comonad of internal algebras.

use std::collections::HashMap;

use serde::Serialize;

use crate::cat_model::{enumerate_nat_tables, power_model, terminal_model, validate_cat_model, CatModel, NatTable, OpTable, TupleMap};
use crate::error::{Error, Result};
use crate::fincat::{self, ArrId, FinFunctor, ObjId};
use crate::lax::{check_structure, compose_homs, enumerate_lax_homs, hom_category, lift, tuple_hom, HomCategory, LaxHom, MAX_CELL_ASSIGNMENTS};
use crate::sigma::{Extension, SigmaTable, TheoryMap};
use crate::term::{tuple_at, tuple_count, tuple_index, OpId};
use crate::two_cells::Weakness;

/// The model of homomorphisms `y -> z`, with operations acting through the
/// lifts of the operations of `z`.
#[derive(Clone, Debug)]
pub struct InternalHom {
    pub model: CatModel,
    pub homs: HomCategory,
}

fn not_closed(what: &str) -> Error {
    Error::Precondition(format!("{what} is not among the enumerated homomorphisms"))
}

pub fn internal_hom(y: &CatModel, z: &CatModel, table: &SigmaTable, weakness: Weakness) -> Result<InternalHom> {
    let theory = y.theory.clone();
    let sig = &theory.base.signature;
    let homs = hom_category(y, z, weakness)?;
    let (no, na) = (homs.homs.len(), homs.mods.len());
    let mut powers: HashMap<usize, CatModel> = HashMap::new();
    let mut ops = Vec::with_capacity(sig.ops.len());
    for op in 0..sig.ops.len() {
        let n = sig.arity(op);
        if !powers.contains_key(&n) {
            powers.insert(n, power_model(z, n)?);
        }
        let zn = &powers[&n];
        let lifted = lift(z, table, op, weakness)?;
        let obj = (0..tuple_count(no, n))
            .map(|i| {
                let parts: Vec<LaxHom> = tuple_at(i, no, n).iter().map(|&k| homs.homs[k].clone()).collect();
                let paired = tuple_hom(y, z, &parts, weakness);
                let h = compose_homs(y, zn, z, &paired, &lifted)?;
                homs.find_hom(&h).ok_or_else(|| not_closed("a lifted operation on homomorphisms"))
            })
            .collect::<Result<Vec<_>>>()?;
        let arr = (0..tuple_count(na, n))
            .map(|i| {
                let ts = tuple_at(i, na, n);
                let src: Vec<usize> = ts.iter().map(|&t| homs.mods[t].source).collect();
                let tgt: Vec<usize> = ts.iter().map(|&t| homs.mods[t].target).collect();
                let comps: Vec<ArrId> = (0..y.num_objects())
                    .map(|o| z.op_arr(op, &ts.iter().map(|&t| homs.mods[t].comps[o]).collect::<Vec<_>>()))
                    .collect();
                homs.find_mod(obj[tuple_index(&src, no)], obj[tuple_index(&tgt, no)], &comps)
                    .ok_or_else(|| not_closed("a lifted operation on modifications"))
            })
            .collect::<Result<Vec<_>>>()?;
        ops.push(OpTable { arity: n, obj, arr });
    }
    let mut model = CatModel {
        name: format!("[{}, {}]", y.name, z.name),
        theory: theory.clone(),
        carrier: homs.category.clone(),
        ops,
        cells: Vec::new(),
    };
    let mut cells = Vec::with_capacity(theory.cells.len());
    for (k, cell) in theory.cells.iter().enumerate() {
        let p = cell.source.source;
        let mut comps = Vec::new();
        for i in 0..tuple_count(no, p) {
            let fs = tuple_at(i, no, p);
            let (from, to) = (model.map_obj(&cell.source, &fs), model.map_obj(&cell.target, &fs));
            for j in 0..cell.source.target() {
                let at: Vec<ArrId> = (0..y.num_objects())
                    .map(|o| {
                        let point: Vec<ObjId> = fs.iter().map(|&h| homs.homs[h].f1.obj[o]).collect();
                        z.cells[k].at(z.obj_index(&point))[j]
                    })
                    .collect();
                comps.push(
                    homs.find_mod(from[j], to[j], &at)
                        .ok_or_else(|| not_closed(&format!("the cell {} on homomorphisms", cell.name)))?,
                );
            }
        }
        cells.push(NatTable {
            source: p,
            width: cell.source.target(),
            comps,
        });
    }
    model.cells = cells;
    validate_cat_model(&model)?;
    Ok(InternalHom { model, homs })
}

/// A binary multimap `x, y -> z`: a functor on the product with cells for
/// every generator acting in either variable. `left[a]` is indexed by an
/// object tuple of `x` followed by an object of `y`; `right[b]` by an object
/// of `x` followed by an object tuple of `y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BinaryMultimap {
    pub f11: FinFunctor,
    pub left: Vec<Vec<ArrId>>,
    pub right: Vec<Vec<ArrId>>,
}

struct MultiShape<'a> {
    x: &'a CatModel,
    y: &'a CatModel,
    z: &'a CatModel,
    weakness: Weakness,
}

impl MultiShape<'_> {
    fn ny(&self) -> usize {
        self.y.num_objects()
    }

    fn obj(&self, m: &BinaryMultimap, a: ObjId, b: ObjId) -> ObjId {
        m.f11.obj[a * self.ny() + b]
    }

    fn left_index(&self, xs: &[ObjId], b: ObjId) -> usize {
        self.x.obj_index(xs) * self.ny() + b
    }

    fn right_index(&self, a: ObjId, ys: &[ObjId]) -> usize {
        a * self.y.obj_count(ys.len()) + self.y.obj_index(ys)
    }

    /// The homomorphism `x -> z` obtained by fixing `b`.
    fn slice_left(&self, m: &BinaryMultimap, b: ObjId) -> LaxHom {
        let (x, y) = (self.x, self.y);
        let sig = &x.theory.base.signature;
        LaxHom {
            weakness: self.weakness,
            f1: FinFunctor {
                obj: (0..x.num_objects()).map(|a| self.obj(m, a, b)).collect(),
                arr: (0..x.carrier.num_arrows())
                    .map(|f| m.f11.arr[f * y.carrier.num_arrows() + y.carrier.id(b)])
                    .collect(),
            },
            cells: (0..sig.ops.len())
                .map(|op| {
                    let n = sig.arity(op);
                    NatTable {
                        source: n,
                        width: 1,
                        comps: (0..x.obj_count(n)).map(|i| m.left[op][i * self.ny() + b]).collect(),
                    }
                })
                .collect(),
        }
    }

    /// The homomorphism `y -> z` obtained by fixing `a`.
    fn slice_right(&self, m: &BinaryMultimap, a: ObjId) -> LaxHom {
        let y = self.y;
        let sig = &y.theory.base.signature;
        let ida = self.x.carrier.id(a);
        LaxHom {
            weakness: self.weakness,
            f1: FinFunctor {
                obj: (0..y.num_objects()).map(|b| self.obj(m, a, b)).collect(),
                arr: (0..y.carrier.num_arrows())
                    .map(|g| m.f11.arr[ida * y.carrier.num_arrows() + g])
                    .collect(),
            },
            cells: (0..sig.ops.len())
                .map(|op| {
                    let k = sig.arity(op);
                    NatTable {
                        source: k,
                        width: 1,
                        comps: (0..y.obj_count(k)).map(|i| m.right[op][a * y.obj_count(k) + i]).collect(),
                    }
                })
                .collect(),
        }
    }

    /// The interchange of the two kinds of cells through the table, for
    /// basis operations `a` (on `x`) and `b` (on `y`).
    fn interchange_holds(&self, m: &BinaryMultimap, a: OpId, b: OpId, sigma: &NatTable) -> bool {
        let (x, y, z) = (self.x, self.y, self.z);
        let c = &z.carrier;
        let base = &x.theory.base;
        let (n, k) = (base.arity(a), base.arity(b));
        for i in 0..x.obj_count(n) {
            let xs = x.obj_tuple(i, n);
            let xa = x.op_obj(a, &xs);
            for j in 0..y.obj_count(k) {
                let ys = y.obj_tuple(j, k);
                let yb = y.op_obj(b, &ys);
                let matrix: Vec<ObjId> = ys.iter().flat_map(|&q| xs.iter().map(move |&p| (p, q))).map(|(p, q)| self.obj(m, p, q)).collect();
                let s = sigma.at(z.obj_index(&matrix))[0];
                let lefts: Vec<ArrId> = ys.iter().map(|&q| m.left[a][self.left_index(&xs, q)]).collect();
                let rights: Vec<ArrId> = xs.iter().map(|&p| m.right[b][self.right_index(p, &ys)]).collect();
                let outer_right = m.right[b][self.right_index(xa, &ys)];
                let outer_left = m.left[a][self.left_index(&xs, yb)];
                let (lhs, rhs) = if self.weakness.is_colax() {
                    (
                        c.compose_path(&[outer_right, z.op_arr(b, &lefts)]),
                        c.compose_path(&[outer_left, z.op_arr(a, &rights), s]),
                    )
                } else {
                    (
                        c.compose_path(&[z.op_arr(b, &lefts), outer_right]),
                        c.compose_path(&[s, z.op_arr(a, &rights), outer_left]),
                    )
                };
                if lhs.is_none() || lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    fn is_multimap(&self, m: &BinaryMultimap, sigmas: &HashMap<(OpId, OpId), NatTable>) -> Result<bool> {
        for b in 0..self.y.num_objects() {
            match check_structure(self.x, self.z, &self.slice_left(m, b)) {
                Ok(()) => {}
                Err(Error::Violation(_)) => return Ok(false),
                Err(e) => return Err(e),
            }
        }
        for a in 0..self.x.num_objects() {
            match check_structure(self.y, self.z, &self.slice_right(m, a)) {
                Ok(()) => {}
                Err(Error::Violation(_)) => return Ok(false),
                Err(e) => return Err(e),
            }
        }
        Ok(sigmas.iter().all(|(&(a, b), s)| self.interchange_holds(m, a, b, s)))
    }
}

fn interchange_tables(z: &CatModel, table: &SigmaTable) -> Result<HashMap<(OpId, OpId), NatTable>> {
    let theory = &*z.theory;
    let base = &theory.base;
    let rho = TheoryMap::identity(theory);
    let ext = Extension {
        source: theory,
        target: theory,
        rho: &rho,
        table,
    };
    let mut out = HashMap::new();
    for &a in &base.basis() {
        for &b in &base.basis() {
            let p = ext.sigma_map(&base.generator(b), &base.generator(a))?;
            out.insert((a, b), z.evaluate_pasting(&p)?);
        }
    }
    Ok(out)
}

pub fn enumerate_binary_multimaps(
    x: &CatModel,
    y: &CatModel,
    z: &CatModel,
    table: &SigmaTable,
    weakness: Weakness,
) -> Result<Vec<BinaryMultimap>> {
    if *x.theory != *y.theory || *y.theory != *z.theory {
        return Err(Error::Precondition("multimaps need models of one theory".into()));
    }
    let shape = MultiShape { x, y, z, weakness };
    let sigmas = interchange_tables(z, table)?;
    let sig = &x.theory.base.signature;
    let (cx, cy, cz) = (&x.carrier, &y.carrier, &z.carrier);
    let (ny, nya) = (cy.num_objects(), cy.num_arrows());
    let pair = fincat::product(&[cx, cy]);
    let allow: &dyn Fn(ArrId) -> bool = match weakness {
        Weakness::Pseudo => &|a| cz.is_iso(a),
        Weakness::Strict => &|a| cz.is_identity(a),
        _ => &|_| true,
    };
    let mut out = Vec::new();
    for f11 in fincat::enumerate_functors(&pair, cz, fincat::DEFAULT_MAX_ARROWS)? {
        let mut candidates: Vec<Vec<Vec<ArrId>>> = Vec::new();
        let mut total: usize = 1;
        for op in 0..sig.ops.len() {
            let n = sig.arity(op);
            let mut factors = vec![cx; n];
            factors.push(cy);
            let s_obj = |v: &[ObjId]| z.op_obj(op, &v[..n].iter().map(|&p| f11.obj[p * ny + v[n]]).collect::<Vec<_>>());
            let s_arr = |v: &[ArrId]| z.op_arr(op, &v[..n].iter().map(|&p| f11.arr[p * nya + v[n]]).collect::<Vec<_>>());
            let t_obj = |v: &[ObjId]| f11.obj[x.op_obj(op, &v[..n]) * ny + v[n]];
            let t_arr = |v: &[ArrId]| f11.arr[x.op_arr(op, &v[..n]) * nya + v[n]];
            candidates.push(directed_tables(&factors, cz, (&s_obj, &s_arr), (&t_obj, &t_arr), weakness, allow)?);
            total = total.saturating_mul(candidates.last().map_or(1, Vec::len));
        }
        for op in 0..sig.ops.len() {
            let k = sig.arity(op);
            let mut factors = vec![cx];
            factors.extend(std::iter::repeat(cy).take(k));
            let s_obj = |v: &[ObjId]| z.op_obj(op, &v[1..].iter().map(|&q| f11.obj[v[0] * ny + q]).collect::<Vec<_>>());
            let s_arr = |v: &[ArrId]| z.op_arr(op, &v[1..].iter().map(|&q| f11.arr[v[0] * nya + q]).collect::<Vec<_>>());
            let t_obj = |v: &[ObjId]| f11.obj[v[0] * ny + y.op_obj(op, &v[1..])];
            let t_arr = |v: &[ArrId]| f11.arr[v[0] * nya + y.op_arr(op, &v[1..])];
            candidates.push(directed_tables(&factors, cz, (&s_obj, &s_arr), (&t_obj, &t_arr), weakness, allow)?);
            total = total.saturating_mul(candidates.last().map_or(1, Vec::len));
        }
        if total > MAX_CELL_ASSIGNMENTS {
            return Err(Error::Bound(format!(
                "more than {MAX_CELL_ASSIGNMENTS} cell assignments for one multimap functor"
            )));
        }
        let counts: Vec<usize> = candidates.iter().map(Vec::len).collect();
        let ops = sig.ops.len();
        for pick in 0..total {
            let mut rest = pick;
            let mut choice = vec![0; counts.len()];
            for (slot, &n) in choice.iter_mut().zip(&counts).rev() {
                *slot = rest % n;
                rest /= n;
            }
            let m = BinaryMultimap {
                f11: f11.clone(),
                left: (0..ops).map(|op| candidates[op][choice[op]].clone()).collect(),
                right: (0..ops).map(|op| candidates[ops + op][choice[ops + op]].clone()).collect(),
            };
            if shape.is_multimap(&m, &sigmas)? {
                out.push(m);
            }
        }
    }
    Ok(out)
}

type ObjFn<'a> = &'a dyn Fn(&[ObjId]) -> ObjId;
type ArrFn<'a> = &'a dyn Fn(&[ArrId]) -> ArrId;

/// Natural families between two functors in the lax direction, or the other
/// way round for colax weakness.
fn directed_tables(
    factors: &[&fincat::FinCategory],
    target: &fincat::FinCategory,
    lax_src: (ObjFn, ArrFn),
    lax_tgt: (ObjFn, ArrFn),
    weakness: Weakness,
    allow: &dyn Fn(ArrId) -> bool,
) -> Result<Vec<Vec<ArrId>>> {
    let s = TupleMap {
        obj: lax_src.0,
        arr: lax_src.1,
    };
    let t = TupleMap {
        obj: lax_tgt.0,
        arr: lax_tgt.1,
    };
    let (from, to) = if weakness.is_colax() { (&t, &s) } else { (&s, &t) };
    enumerate_nat_tables(factors, target, from, to, allow, MAX_CELL_ASSIGNMENTS + 1)
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosedReport {
    pub multimaps: usize,
    pub homs: usize,
    /// Every multimap curries to an enumerated homomorphism.
    pub curry_total: bool,
    /// Every homomorphism uncurries to an enumerated multimap.
    pub uncurry_total: bool,
    pub round_trips: bool,
    pub bijection: bool,
    pub failures: Vec<String>,
}

fn curry(shape: &MultiShape, hom: &InternalHom, m: &BinaryMultimap) -> Option<LaxHom> {
    let (x, y) = (shape.x, shape.y);
    let sig = &x.theory.base.signature;
    let slices: Option<Vec<usize>> = (0..x.num_objects()).map(|a| hom.homs.find_hom(&shape.slice_right(m, a))).collect();
    let slices = slices?;
    let arr: Option<Vec<ArrId>> = (0..x.carrier.num_arrows())
        .map(|f| {
            let (a, a2) = (x.carrier.src(f), x.carrier.tgt(f));
            let comps: Vec<ArrId> = (0..y.num_objects())
                .map(|b| m.f11.arr[f * y.carrier.num_arrows() + y.carrier.id(b)])
                .collect();
            hom.homs.find_mod(slices[a], slices[a2], &comps)
        })
        .collect();
    let mut cells = Vec::with_capacity(sig.ops.len());
    for op in 0..sig.ops.len() {
        let n = sig.arity(op);
        let mut comps = Vec::with_capacity(x.obj_count(n));
        for i in 0..x.obj_count(n) {
            let xs = x.obj_tuple(i, n);
            let images: Vec<usize> = xs.iter().map(|&a| slices[a]).collect();
            let lifted = hom.model.op_obj(op, &images);
            let target = slices[x.op_obj(op, &xs)];
            let at: Vec<ArrId> = (0..y.num_objects()).map(|b| m.left[op][shape.left_index(&xs, b)]).collect();
            let (s, t) = if shape.weakness.is_colax() { (target, lifted) } else { (lifted, target) };
            comps.push(hom.homs.find_mod(s, t, &at)?);
        }
        cells.push(NatTable { source: n, width: 1, comps });
    }
    Some(LaxHom {
        weakness: shape.weakness,
        f1: FinFunctor { obj: slices, arr: arr? },
        cells,
    })
}

fn uncurry(shape: &MultiShape, hom: &InternalHom, g: &LaxHom) -> Option<BinaryMultimap> {
    let (x, y, z) = (shape.x, shape.y, shape.z);
    let sig = &x.theory.base.signature;
    let (ny, nya) = (y.num_objects(), y.carrier.num_arrows());
    let at = |a: ObjId| &hom.homs.homs[g.f1.obj[a]];
    let obj: Vec<ObjId> = (0..x.num_objects() * ny).map(|i| at(i / ny).f1.obj[i % ny]).collect();
    let arr: Option<Vec<ArrId>> = (0..x.carrier.num_arrows() * nya)
        .map(|i| {
            let (f, h) = (i / nya, i % nya);
            let t = &hom.homs.mods[g.f1.arr[f]];
            z.carrier.compose(t.comps[y.carrier.tgt(h)], at(x.carrier.src(f)).f1.arr[h])
        })
        .collect();
    let left = (0..sig.ops.len())
        .map(|op| {
            let n = sig.arity(op);
            (0..x.obj_count(n) * ny)
                .map(|i| hom.homs.mods[g.cell(op, i / ny)].comps[i % ny])
                .collect()
        })
        .collect();
    let right = (0..sig.ops.len())
        .map(|op| {
            let k = sig.arity(op);
            let per = y.obj_count(k);
            (0..x.num_objects() * per).map(|i| at(i / per).cell(op, i % per)).collect()
        })
        .collect();
    Some(BinaryMultimap {
        f11: FinFunctor { obj, arr: arr? },
        left,
        right,
    })
}

/// Enumerates both sides of the currying correspondence between multimaps
/// `x, y -> z` and homomorphisms `x -> [y, z]`, and checks that currying and
/// uncurrying are mutually inverse.
pub fn closed_check(x: &CatModel, y: &CatModel, z: &CatModel, table: &SigmaTable, weakness: Weakness) -> Result<ClosedReport> {
    let multimaps = enumerate_binary_multimaps(x, y, z, table, weakness)?;
    let hom = internal_hom(y, z, table, weakness)?;
    let homs = enumerate_lax_homs(x, &hom.model, weakness)?;
    let shape = MultiShape { x, y, z, weakness };
    let mut failures = Vec::new();
    let hom_set: HashMap<&LaxHom, usize> = homs.iter().enumerate().map(|(i, h)| (h, i)).collect();
    let multi_set: HashMap<&BinaryMultimap, usize> = multimaps.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let (mut curry_total, mut uncurry_total, mut round_trips) = (true, true, true);
    for (i, m) in multimaps.iter().enumerate() {
        match curry(&shape, &hom, m) {
            Some(h) if hom_set.contains_key(&h) => {
                if uncurry(&shape, &hom, &h).as_ref() != Some(m) {
                    round_trips = false;
                    failures.push(format!("multimap {i} does not survive currying and uncurrying"));
                }
            }
            _ => {
                curry_total = false;
                failures.push(format!("multimap {i} does not curry to a homomorphism"));
            }
        }
    }
    for (i, g) in homs.iter().enumerate() {
        match uncurry(&shape, &hom, g) {
            Some(m) if multi_set.contains_key(&m) => {
                if curry(&shape, &hom, &m).as_ref() != Some(g) {
                    round_trips = false;
                    failures.push(format!("homomorphism {i} does not survive uncurrying and currying"));
                }
            }
            _ => {
                uncurry_total = false;
                failures.push(format!("homomorphism {i} does not uncurry to a multimap"));
            }
        }
    }
    Ok(ClosedReport {
        multimaps: multimaps.len(),
        homs: homs.len(),
        bijection: curry_total && uncurry_total && round_trips && multimaps.len() == homs.len(),
        curry_total,
        uncurry_total,
        round_trips,
        failures,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FoxReport {
    pub model: String,
    pub weakness: Weakness,
    pub algebras: usize,
    pub algebra_maps: usize,
    pub algebras_of_algebras: usize,
    pub algebra_maps_of_algebras: usize,
    /// Comultiplication is defined on every object and arrow.
    pub comultiplication_defined: bool,
    /// Comultiplication commutes with the operations and cells on the nose.
    pub comultiplication_strict: bool,
    pub counit_left: bool,
    pub counit_right: bool,
    pub coassociative: bool,
    pub comultiplication_iso: bool,
    pub essentially_surjective: bool,
    /// Objects of the double construction not isomorphic to any image.
    pub outside_image: Vec<String>,
    pub laws_hold: bool,
}

/// The homomorphism from the terminal model picking object `a` of an
/// internal hom out of the terminal model, with its own cells as structure.
fn pick(q: &InternalHom, a: usize) -> Option<LaxHom> {
    let w = q.homs.weakness;
    let sig = &q.model.theory.base.signature;
    let own = &q.homs.homs[a];
    let cells: Option<Vec<NatTable>> = (0..sig.ops.len())
        .map(|op| {
            let n = sig.arity(op);
            let lifted = q.model.op_obj(op, &vec![a; n]);
            let (s, t) = if w.is_colax() { (a, lifted) } else { (lifted, a) };
            let arrow = q.homs.find_mod(s, t, &[own.cell(op, 0)])?;
            Some(NatTable {
                source: n,
                width: 1,
                comps: vec![arrow],
            })
        })
        .collect();
    Some(LaxHom {
        weakness: w,
        f1: FinFunctor {
            obj: vec![a],
            arr: vec![q.homs.category.id(a)],
        },
        cells: cells?,
    })
}

/// The comonad of internal algebras at one model: the counit evaluates an
/// algebra at its object, and the comultiplication sends an algebra to the
/// algebra of algebras it picks out.
pub fn fox_comonad(x: &CatModel, table: &SigmaTable, weakness: Weakness) -> Result<FoxReport> {
    let q = internal_hom(&terminal_model(x.theory.clone()), x, table, weakness)?;
    let qq = internal_hom(&terminal_model(x.theory.clone()), &q.model, table, weakness)?;
    let sig = &x.theory.base.signature;
    let (nq, mq) = (q.homs.homs.len(), q.homs.mods.len());
    let delta_obj: Vec<Option<usize>> = (0..nq).map(|a| pick(&q, a).and_then(|h| qq.homs.find_hom(&h))).collect();
    let delta_arr: Vec<Option<ArrId>> = (0..mq)
        .map(|t| {
            let m = &q.homs.mods[t];
            qq.homs.find_mod(delta_obj[m.source]?, delta_obj[m.target]?, &[t])
        })
        .collect();
    let defined = delta_obj.iter().all(Option::is_some) && delta_arr.iter().all(Option::is_some);
    let mut report = FoxReport {
        model: x.name.clone(),
        weakness,
        algebras: nq,
        algebra_maps: mq,
        algebras_of_algebras: qq.homs.homs.len(),
        algebra_maps_of_algebras: qq.homs.mods.len(),
        comultiplication_defined: defined,
        comultiplication_strict: false,
        counit_left: false,
        counit_right: false,
        coassociative: false,
        comultiplication_iso: false,
        essentially_surjective: false,
        outside_image: Vec::new(),
        laws_hold: false,
    };
    if !defined {
        return Ok(report);
    }
    let d_obj: Vec<usize> = delta_obj.into_iter().flatten().collect();
    let d_arr: Vec<ArrId> = delta_arr.into_iter().flatten().collect();

    let mut strict = true;
    for op in 0..sig.ops.len() {
        let n = sig.arity(op);
        for i in 0..tuple_count(nq, n) {
            let objs = tuple_at(i, nq, n);
            let images: Vec<usize> = objs.iter().map(|&a| d_obj[a]).collect();
            strict &= d_obj[q.model.op_obj(op, &objs)] == qq.model.op_obj(op, &images);
        }
        for i in 0..tuple_count(mq, n) {
            let ts = tuple_at(i, mq, n);
            let images: Vec<ArrId> = ts.iter().map(|&t| d_arr[t]).collect();
            strict &= d_arr[q.model.op_arr(op, &ts)] == qq.model.op_arr(op, &images);
        }
    }
    for (k, cell) in x.theory.cells.iter().enumerate() {
        let p = cell.source.source;
        for i in 0..tuple_count(nq, p) {
            let objs = tuple_at(i, nq, p);
            let images: Vec<usize> = objs.iter().map(|&a| d_obj[a]).collect();
            let mapped: Vec<ArrId> = q.model.cells[k].at(i).iter().map(|&t| d_arr[t]).collect();
            strict &= mapped == qq.model.cells[k].at(qq.model.obj_index(&images));
        }
    }
    report.comultiplication_strict = strict;

    // counit of the outer construction after comultiplication
    report.counit_left = (0..nq).all(|a| qq.homs.homs[d_obj[a]].f1.obj[0] == a)
        && (0..mq).all(|t| qq.homs.mods[d_arr[t]].comps == [t]);
    // the construction applied to the counit, after comultiplication
    report.counit_right = (0..nq).all(|a| {
        let d = &qq.homs.homs[d_obj[a]];
        let evaluated = LaxHom {
            weakness,
            f1: FinFunctor {
                obj: vec![q.homs.homs[d.f1.obj[0]].f1.obj[0]],
                arr: vec![x.carrier.id(q.homs.homs[d.f1.obj[0]].f1.obj[0])],
            },
            cells: d
                .cells
                .iter()
                .map(|t| NatTable {
                    comps: vec![q.homs.mods[t.comps[0]].comps[0]],
                    ..t.clone()
                })
                .collect(),
        };
        evaluated == q.homs.homs[a]
    }) && (0..mq).all(|t| q.homs.mods[qq.homs.mods[d_arr[t]].comps[0]].comps == q.homs.mods[t].comps);
    report.coassociative = (0..nq).all(|a| {
        let d = &qq.homs.homs[d_obj[a]];
        let pushed = LaxHom {
            weakness,
            f1: FinFunctor {
                obj: vec![d_obj[d.f1.obj[0]]],
                arr: vec![qq.homs.category.id(d_obj[d.f1.obj[0]])],
            },
            cells: d
                .cells
                .iter()
                .map(|t| NatTable {
                    comps: vec![d_arr[t.comps[0]]],
                    ..t.clone()
                })
                .collect(),
        };
        pick(&qq, d_obj[a]).is_some_and(|h| h == pushed)
    });
    let mut seen_obj = vec![false; qq.homs.homs.len()];
    d_obj.iter().for_each(|&o| seen_obj[o] = true);
    let mut seen_arr = vec![false; qq.homs.mods.len()];
    d_arr.iter().for_each(|&t| seen_arr[t] = true);
    let injective = {
        let mut o = d_obj.clone();
        o.sort_unstable();
        o.dedup();
        let mut t = d_arr.clone();
        t.sort_unstable();
        t.dedup();
        o.len() == nq && t.len() == mq
    };
    report.comultiplication_iso = injective && seen_obj.iter().all(|&s| s) && seen_arr.iter().all(|&s| s);
    let cat = &qq.homs.category;
    for o in 0..cat.num_objects() {
        let reached = d_obj
            .iter()
            .any(|&img| cat.hom(img, o).iter().any(|&f| cat.is_iso(f)));
        if !reached {
            report.outside_image.push(cat.objects[o].clone());
        }
    }
    report.essentially_surjective = report.outside_image.is_empty();
    report.laws_hold = report.comultiplication_strict && report.counit_left && report.counit_right && report.coassociative;
    Ok(report)
}
