//! Models of 2-theories in finite categories, and evaluation of pastings.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result, Violation};
use crate::fincat::{self, ArrId, FinCategory, FinFunctor, ObjId};
use crate::term::{tuple_at, tuple_count, tuple_index, Morphism, OpId, Term};
use crate::two_cells::{Pasting, TwoTheory};

/// Largest number of arrows of a materialized power of a carrier.
pub const MAX_POWER_ARROWS: usize = 4096;

/// Object and arrow tables of a functor `C^arity -> C`, indexed by tuples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OpTable {
    pub arity: usize,
    pub obj: Vec<ObjId>,
    pub arr: Vec<ArrId>,
}

/// A family of arrow tuples indexed by object tuples of length `source`;
/// every component is a tuple of `width` arrows.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct NatTable {
    pub source: usize,
    pub width: usize,
    pub comps: Vec<ArrId>,
}

impl NatTable {
    pub fn at(&self, index: usize) -> &[ArrId] {
        &self.comps[index * self.width..(index + 1) * self.width]
    }
}

#[derive(Clone, Debug)]
pub struct CatModel {
    pub name: String,
    pub theory: Arc<TwoTheory>,
    pub carrier: FinCategory,
    pub ops: Vec<OpTable>,
    pub cells: Vec<NatTable>,
}

impl CatModel {
    pub fn num_objects(&self) -> usize {
        self.carrier.num_objects()
    }

    pub fn obj_index(&self, xs: &[ObjId]) -> usize {
        tuple_index(xs, self.carrier.num_objects())
    }

    pub fn arr_index(&self, fs: &[ArrId]) -> usize {
        tuple_index(fs, self.carrier.num_arrows())
    }

    pub fn obj_tuple(&self, index: usize, n: usize) -> Vec<ObjId> {
        tuple_at(index, self.carrier.num_objects(), n)
    }

    pub fn arr_tuple(&self, index: usize, n: usize) -> Vec<ArrId> {
        tuple_at(index, self.carrier.num_arrows(), n)
    }

    pub fn obj_count(&self, n: usize) -> usize {
        tuple_count(self.carrier.num_objects(), n)
    }

    pub fn arr_count(&self, n: usize) -> usize {
        tuple_count(self.carrier.num_arrows(), n)
    }

    pub fn op_obj(&self, op: OpId, xs: &[ObjId]) -> ObjId {
        self.ops[op].obj[self.obj_index(xs)]
    }

    pub fn op_arr(&self, op: OpId, fs: &[ArrId]) -> ArrId {
        self.ops[op].arr[self.arr_index(fs)]
    }

    pub fn term_obj(&self, t: &Term, xs: &[ObjId]) -> ObjId {
        match t {
            Term::Proj(i) => xs[*i],
            Term::Apply(op, args) => {
                let vals: Vec<ObjId> = args.iter().map(|a| self.term_obj(a, xs)).collect();
                self.op_obj(*op, &vals)
            }
        }
    }

    pub fn term_arr(&self, t: &Term, fs: &[ArrId]) -> ArrId {
        match t {
            Term::Proj(i) => fs[*i],
            Term::Apply(op, args) => {
                let vals: Vec<ArrId> = args.iter().map(|a| self.term_arr(a, fs)).collect();
                self.op_arr(*op, &vals)
            }
        }
    }

    pub fn map_obj(&self, f: &Morphism, xs: &[ObjId]) -> Vec<ObjId> {
        f.components.iter().map(|t| self.term_obj(t, xs)).collect()
    }

    pub fn map_arr(&self, f: &Morphism, fs: &[ArrId]) -> Vec<ArrId> {
        f.components.iter().map(|t| self.term_arr(t, fs)).collect()
    }

    /// A generator as a functor on the materialized power of the carrier.
    pub fn op_functor(&self, op: OpId) -> FinFunctor {
        FinFunctor {
            obj: self.ops[op].obj.clone(),
            arr: self.ops[op].arr.clone(),
        }
    }

    pub fn show_objects(&self, xs: &[ObjId]) -> String {
        let names: Vec<&str> = xs.iter().map(|&x| self.carrier.objects[x].as_str()).collect();
        format!("({})", names.join(", "))
    }

    pub fn show_arrows(&self, fs: &[ArrId]) -> String {
        let names: Vec<&str> = fs.iter().map(|&f| self.carrier.arrows[f].name.as_str()).collect();
        format!("({})", names.join(", "))
    }

    pub fn identity_table(&self, f: &Morphism) -> NatTable {
        let mut comps = Vec::with_capacity(self.obj_count(f.source) * f.target());
        for i in 0..self.obj_count(f.source) {
            let xs = self.obj_tuple(i, f.source);
            comps.extend(self.map_obj(f, &xs).into_iter().map(|y| self.carrier.id(y)));
        }
        NatTable {
            source: f.source,
            width: f.target(),
            comps,
        }
    }

    /// Componentwise value of a pasting, after type-checking it.
    pub fn evaluate_pasting(&self, p: &Pasting) -> Result<NatTable> {
        self.theory.boundary(p)?;
        self.eval(p)
    }

    fn eval(&self, p: &Pasting) -> Result<NatTable> {
        let c = &self.carrier;
        Ok(match p {
            Pasting::Id(f) => self.identity_table(f),
            Pasting::Gen(g) => self
                .cells
                .get(*g)
                .cloned()
                .ok_or_else(|| Error::UnknownName(format!("cell #{g}")))?,
            Pasting::Inverse(q) => {
                let mut t = self.eval(q)?;
                for a in t.comps.iter_mut() {
                    *a = c.inverse(*a).ok_or_else(|| {
                        Error::Precondition(format!("component {} is not invertible", c.arrows[*a].name))
                    })?;
                }
                t
            }
            Pasting::Vert(a, b) => {
                let (ta, tb) = (self.eval(a)?, self.eval(b)?);
                if ta.source != tb.source || ta.width != tb.width {
                    return Err(Error::Arity("vertical composite of cells of different shapes".into()));
                }
                let comps = ta
                    .comps
                    .iter()
                    .zip(&tb.comps)
                    .map(|(&f, &g)| {
                        c.compose(g, f).ok_or_else(|| {
                            Error::Arity(format!(
                                "components {} and {} do not compose",
                                c.arrows[f].name, c.arrows[g].name
                            ))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                NatTable { comps, ..ta }
            }
            Pasting::WhiskerL(h, q) => {
                let t = self.eval(q)?;
                let mut comps = Vec::with_capacity(self.obj_count(h.source) * t.width);
                for i in 0..self.obj_count(h.source) {
                    let ys = self.map_obj(h, &self.obj_tuple(i, h.source));
                    comps.extend_from_slice(t.at(self.obj_index(&ys)));
                }
                NatTable {
                    source: h.source,
                    width: t.width,
                    comps,
                }
            }
            Pasting::WhiskerR(q, h) => {
                let t = self.eval(q)?;
                let count = self.obj_count(t.source);
                let mut comps = Vec::with_capacity(count * h.target());
                for i in 0..count {
                    comps.extend(self.map_arr(h, t.at(i)));
                }
                NatTable {
                    source: t.source,
                    width: h.target(),
                    comps,
                }
            }
            Pasting::PowerL(k, q) => {
                let t = self.eval(q)?;
                let m = t.source;
                let mut comps = Vec::new();
                for i in 0..self.obj_count(k * m) {
                    let xs = self.obj_tuple(i, k * m);
                    for b in 0..*k {
                        comps.extend_from_slice(t.at(self.obj_index(&xs[b * m..(b + 1) * m])));
                    }
                }
                NatTable {
                    source: k * m,
                    width: k * t.width,
                    comps,
                }
            }
            Pasting::PowerR(q, k) => {
                let t = self.eval(q)?;
                let (m, n) = (t.source, t.width);
                let mut comps = Vec::new();
                for i in 0..self.obj_count(m * k) {
                    let xs = self.obj_tuple(i, m * k);
                    let cols: Vec<&[ArrId]> = (0..*k)
                        .map(|j| {
                            let col: Vec<ObjId> = (0..m).map(|r| xs[r * k + j]).collect();
                            t.at(self.obj_index(&col))
                        })
                        .collect();
                    for r in 0..n {
                        for col in &cols {
                            comps.push(col[r]);
                        }
                    }
                }
                NatTable {
                    source: m * k,
                    width: n * k,
                    comps,
                }
            }
            Pasting::Tuple(ps) => {
                let ts = ps.iter().map(|q| self.eval(q)).collect::<Result<Vec<_>>>()?;
                let source = ts.first().map(|t| t.source).unwrap_or(0);
                if ts.iter().any(|t| t.source != source) {
                    return Err(Error::Arity("tuple of cells with different sources".into()));
                }
                let width = ts.iter().map(|t| t.width).sum();
                let mut comps = Vec::new();
                for i in 0..self.obj_count(source) {
                    for t in &ts {
                        comps.extend_from_slice(t.at(i));
                    }
                }
                NatTable { source, width, comps }
            }
        })
    }
}

/// Check that the tables form a model: generators are functors, equations hold
/// as equalities of functors, cells are natural with the declared boundaries,
/// invertible cells are invertible and cell equations hold.
pub fn validate_cat_model(model: &CatModel) -> Result<()> {
    let theory = &model.theory;
    let c = &model.carrier;
    let base = &theory.base;
    if model.ops.len() != base.signature.ops.len() {
        return Err(Error::Arity(format!(
            "model {} interprets {} operations, the theory has {}",
            model.name,
            model.ops.len(),
            base.signature.ops.len()
        )));
    }
    if model.cells.len() != theory.cells.len() {
        return Err(Error::Arity(format!(
            "model {} interprets {} cells, the theory has {}",
            model.name,
            model.cells.len(),
            theory.cells.len()
        )));
    }
    for (op, table) in model.ops.iter().enumerate() {
        let name = base.signature.name(op);
        let n = base.arity(op);
        if table.arity != n || table.obj.len() != model.obj_count(n) || table.arr.len() != model.arr_count(n) {
            return Err(Error::Arity(format!("table of {name} has the wrong size")));
        }
        if table.obj.iter().any(|&x| x >= c.num_objects()) || table.arr.iter().any(|&a| a >= c.num_arrows()) {
            return Err(Error::Malformed(format!("table of {name} leaves the carrier")));
        }
        for i in 0..model.arr_count(n) {
            let fs = model.arr_tuple(i, n);
            let img = table.arr[i];
            let srcs: Vec<ObjId> = fs.iter().map(|&f| c.src(f)).collect();
            let tgts: Vec<ObjId> = fs.iter().map(|&f| c.tgt(f)).collect();
            if c.src(img) != model.op_obj(op, &srcs) || c.tgt(img) != model.op_obj(op, &tgts) {
                return Err(Violation::new(&format!("{name} is a functor"), model.show_arrows(&fs)).into());
            }
        }
        for i in 0..model.obj_count(n) {
            let xs = model.obj_tuple(i, n);
            let ids: Vec<ArrId> = xs.iter().map(|&x| c.id(x)).collect();
            if model.op_arr(op, &ids) != c.id(table.obj[i]) {
                return Err(Violation::new(&format!("{name} preserves identities"), model.show_objects(&xs)).into());
            }
        }
        let pairs = c.composable_pairs();
        for i in 0..tuple_count(pairs.len(), n) {
            let pick = tuple_at(i, pairs.len(), n);
            let gs: Vec<ArrId> = pick.iter().map(|&p| pairs[p].0).collect();
            let fs: Vec<ArrId> = pick.iter().map(|&p| pairs[p].1).collect();
            let gfs: Vec<ArrId> = pick.iter().map(|&p| c.compose(pairs[p].0, pairs[p].1).expect("composable")).collect();
            if c.compose(model.op_arr(op, &gs), model.op_arr(op, &fs)) != Some(model.op_arr(op, &gfs)) {
                return Err(Violation::new(
                    &format!("{name} preserves composition"),
                    format!("{} . {}", model.show_arrows(&gs), model.show_arrows(&fs)),
                )
                .into());
            }
        }
    }
    for eq in &base.equations {
        let m = eq.lhs.source;
        for i in 0..model.arr_count(m) {
            let fs = model.arr_tuple(i, m);
            if model.map_arr(&eq.lhs, &fs) != model.map_arr(&eq.rhs, &fs) {
                return Err(Violation::new(&eq.name, model.show_arrows(&fs)).into());
            }
        }
    }
    for (k, cell) in theory.cells.iter().enumerate() {
        let t = &model.cells[k];
        let m = cell.source.source;
        let width = cell.source.target();
        if t.source != m || t.width != width || t.comps.len() != model.obj_count(m) * width {
            return Err(Error::Arity(format!("table of cell {} has the wrong size", cell.name)));
        }
        for i in 0..model.obj_count(m) {
            let xs = model.obj_tuple(i, m);
            let from = model.map_obj(&cell.source, &xs);
            let to = model.map_obj(&cell.target, &xs);
            for (j, &a) in t.at(i).iter().enumerate() {
                if a >= c.num_arrows() || c.src(a) != from[j] || c.tgt(a) != to[j] {
                    return Err(Violation::new(&format!("boundary of {}", cell.name), model.show_objects(&xs)).into());
                }
                if cell.invertible && !c.is_iso(a) {
                    return Err(Violation::new(&format!("{} is invertible", cell.name), model.show_objects(&xs)).into());
                }
            }
        }
        for i in 0..model.arr_count(m) {
            let fs = model.arr_tuple(i, m);
            let xs: Vec<ObjId> = fs.iter().map(|&f| c.src(f)).collect();
            let ys: Vec<ObjId> = fs.iter().map(|&f| c.tgt(f)).collect();
            let ff = model.map_arr(&cell.source, &fs);
            let gf = model.map_arr(&cell.target, &fs);
            let (ex, ey) = (t.at(model.obj_index(&xs)), t.at(model.obj_index(&ys)));
            for j in 0..width {
                if c.compose(gf[j], ex[j]) != c.compose(ey[j], ff[j]) {
                    return Err(Violation::new(&format!("naturality of {}", cell.name), model.show_arrows(&fs)).into());
                }
            }
        }
    }
    for ceq in &theory.cell_equations {
        let l = model.evaluate_pasting(&ceq.lhs)?;
        let r = model.evaluate_pasting(&ceq.rhs)?;
        if let Some(i) = (0..model.obj_count(l.source)).find(|&i| l.at(i) != r.at(i)) {
            return Err(Violation::new(&ceq.name, model.show_objects(&model.obj_tuple(i, l.source))).into());
        }
    }
    Ok(())
}

/// The model with one object and one arrow.
pub fn terminal_model(theory: Arc<TwoTheory>) -> CatModel {
    let ops = theory
        .base
        .signature
        .ops
        .iter()
        .map(|o| OpTable {
            arity: o.arity,
            obj: vec![0],
            arr: vec![0],
        })
        .collect();
    let cells = theory
        .cells
        .iter()
        .map(|c| NatTable {
            source: c.source.source,
            width: c.source.target(),
            comps: vec![0; c.source.target()],
        })
        .collect();
    CatModel {
        name: "*".into(),
        theory,
        carrier: fincat::terminal(),
        ops,
        cells,
    }
}

/// The pointwise model on the `n`-th power of the carrier.
pub fn power_model(y: &CatModel, n: usize) -> Result<CatModel> {
    let (no, na) = (y.carrier.num_objects(), y.carrier.num_arrows());
    if tuple_count(na, n) > MAX_POWER_ARROWS {
        return Err(Error::Bound(format!(
            "power {n} of {} has {} arrows, more than {MAX_POWER_ARROWS}",
            y.name,
            tuple_count(na, n)
        )));
    }
    let carrier = fincat::power(&y.carrier, n);
    let (pno, pna) = (tuple_count(no, n), tuple_count(na, n));
    // column j of a tuple of k points of the power
    let column = |points: &[usize], base: usize, j: usize| -> Vec<usize> {
        points.iter().map(|&p| tuple_at(p, base, n)[j]).collect()
    };
    let mut ops = Vec::new();
    for (op, table) in y.ops.iter().enumerate() {
        let k = table.arity;
        let obj = (0..tuple_count(pno, k))
            .map(|i| {
                let points = tuple_at(i, pno, k);
                let comps: Vec<ObjId> = (0..n).map(|j| y.op_obj(op, &column(&points, no, j))).collect();
                tuple_index(&comps, no)
            })
            .collect();
        let arr = (0..tuple_count(pna, k))
            .map(|i| {
                let points = tuple_at(i, pna, k);
                let comps: Vec<ArrId> = (0..n).map(|j| y.op_arr(op, &column(&points, na, j))).collect();
                tuple_index(&comps, na)
            })
            .collect();
        ops.push(OpTable { arity: k, obj, arr });
    }
    let mut cells = Vec::new();
    for t in &y.cells {
        let mut comps = Vec::new();
        for i in 0..tuple_count(pno, t.source) {
            let points = tuple_at(i, pno, t.source);
            let per_coord: Vec<&[ArrId]> = (0..n).map(|j| t.at(y.obj_index(&column(&points, no, j)))).collect();
            for r in 0..t.width {
                let arrows: Vec<ArrId> = per_coord.iter().map(|c| c[r]).collect();
                comps.push(tuple_index(&arrows, na));
            }
        }
        cells.push(NatTable {
            source: t.source,
            width: t.width,
            comps,
        });
    }
    Ok(CatModel {
        name: format!("{}^{n}", y.name),
        theory: y.theory.clone(),
        carrier,
        ops,
        cells,
    })
}

/// A functor out of a product of categories, given on tuples.
pub struct TupleMap<'a> {
    pub obj: &'a dyn Fn(&[ObjId]) -> ObjId,
    pub arr: &'a dyn Fn(&[ArrId]) -> ArrId,
}

fn mixed_at(mut index: usize, radices: &[usize]) -> Vec<usize> {
    let mut out = vec![0; radices.len()];
    for (slot, &r) in out.iter_mut().zip(radices).rev() {
        *slot = index % r.max(1);
        index /= r.max(1);
    }
    out
}

fn mixed_index(xs: &[usize], radices: &[usize]) -> usize {
    xs.iter().zip(radices).fold(0, |acc, (&x, &r)| acc * r + x)
}

/// All natural families `f => g` between functors from the product of
/// `factors` into `target`, with components accepted by `allow`. Components are
/// indexed by object tuples in mixed radix, first factor most significant.
pub fn enumerate_nat_tables(
    factors: &[&FinCategory],
    target: &FinCategory,
    f: &TupleMap,
    g: &TupleMap,
    allow: &dyn Fn(ArrId) -> bool,
    limit: usize,
) -> Result<Vec<Vec<ArrId>>> {
    let mut out = Vec::new();
    let mut over = false;
    visit_nat_tables(factors, target, f, g, allow, &mut |comps| {
        if out.len() >= limit {
            over = true;
            return false;
        }
        out.push(comps.to_vec());
        true
    });
    if over {
        return Err(Error::Bound(format!("more than {limit} candidate cells")));
    }
    Ok(out)
}

/// First natural family accepted by `allow`, if any.
pub fn find_nat_table(
    factors: &[&FinCategory],
    target: &FinCategory,
    f: &TupleMap,
    g: &TupleMap,
    allow: &dyn Fn(ArrId) -> bool,
) -> Option<Vec<ArrId>> {
    let mut found = None;
    visit_nat_tables(factors, target, f, g, allow, &mut |comps| {
        found = Some(comps.to_vec());
        false
    });
    found
}

/// Calls `visit` on every natural family until it returns `false`.
pub fn visit_nat_tables(
    factors: &[&FinCategory],
    target: &FinCategory,
    f: &TupleMap,
    g: &TupleMap,
    allow: &dyn Fn(ArrId) -> bool,
    visit: &mut dyn FnMut(&[ArrId]) -> bool,
) {
    let obj_radix: Vec<usize> = factors.iter().map(|c| c.num_objects()).collect();
    let arr_radix: Vec<usize> = factors.iter().map(|c| c.num_arrows()).collect();
    let no: usize = obj_radix.iter().product();
    let na: usize = arr_radix.iter().product();
    let mut candidates = Vec::with_capacity(no);
    for i in 0..no {
        let xs = mixed_at(i, &obj_radix);
        let (a, b) = ((f.obj)(&xs), (g.obj)(&xs));
        candidates.push(target.hom(a, b).iter().copied().filter(|&h| allow(h)).collect::<Vec<_>>());
    }
    let mut checks: Vec<Vec<(usize, usize, ArrId, ArrId)>> = vec![Vec::new(); no];
    for i in 0..na {
        let fs = mixed_at(i, &arr_radix);
        let srcs: Vec<ObjId> = fs.iter().zip(factors).map(|(&a, c)| c.src(a)).collect();
        let tgts: Vec<ObjId> = fs.iter().zip(factors).map(|(&a, c)| c.tgt(a)).collect();
        let (s, t) = (mixed_index(&srcs, &obj_radix), mixed_index(&tgts, &obj_radix));
        checks[s.max(t)].push((s, t, (f.arr)(&fs), (g.arr)(&fs)));
    }
    let mut comps = vec![usize::MAX; no];
    fn go(
        i: usize,
        target: &FinCategory,
        candidates: &[Vec<ArrId>],
        checks: &[Vec<(usize, usize, ArrId, ArrId)>],
        comps: &mut Vec<ArrId>,
        visit: &mut dyn FnMut(&[ArrId]) -> bool,
    ) -> bool {
        if i == candidates.len() {
            return visit(comps);
        }
        for &c in &candidates[i] {
            comps[i] = c;
            let ok = checks[i]
                .iter()
                .all(|&(s, t, fa, ga)| target.compose(ga, comps[s]) == target.compose(comps[t], fa));
            if ok && !go(i + 1, target, candidates, checks, comps, visit) {
                return false;
            }
        }
        comps[i] = usize::MAX;
        true
    }
    go(0, target, &candidates, &checks, &mut comps, visit);
}
