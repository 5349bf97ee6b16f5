//! Finite categories, functors and natural transformations.

use crate::error::{Error, Result, Violation};
use crate::term::{tuple_at, tuple_count, tuple_index};
use serde::Serialize;

pub type ObjId = usize;
pub type ArrId = usize;

pub const DEFAULT_MAX_ARROWS: usize = 64;
const NONE: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Arrow {
    pub name: String,
    pub src: ObjId,
    pub tgt: ObjId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinCategory {
    pub objects: Vec<String>,
    pub arrows: Vec<Arrow>,
    pub identities: Vec<ArrId>,
    /// `comp[g * arrows + f]` is `g . f` when `tgt f = src g`.
    comp: Vec<u32>,
    homs: Vec<Vec<ArrId>>,
}

impl FinCategory {
    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn src(&self, f: ArrId) -> ObjId {
        self.arrows[f].src
    }

    pub fn tgt(&self, f: ArrId) -> ObjId {
        self.arrows[f].tgt
    }

    pub fn id(&self, x: ObjId) -> ArrId {
        self.identities[x]
    }

    /// `g . f`, defined when `f` ends where `g` starts.
    pub fn compose(&self, g: ArrId, f: ArrId) -> Option<ArrId> {
        match self.comp[g * self.arrows.len() + f] {
            NONE => None,
            h => Some(h as ArrId),
        }
    }

    /// Composite of a path given in order of application.
    pub fn compose_path(&self, path: &[ArrId]) -> Option<ArrId> {
        let (&first, rest) = path.split_first()?;
        rest.iter().try_fold(first, |acc, &g| self.compose(g, acc))
    }

    pub fn hom(&self, a: ObjId, b: ObjId) -> &[ArrId] {
        &self.homs[a * self.objects.len() + b]
    }

    pub fn inverse(&self, f: ArrId) -> Option<ArrId> {
        let (a, b) = (self.src(f), self.tgt(f));
        self.hom(b, a)
            .iter()
            .copied()
            .find(|&g| self.compose(g, f) == Some(self.id(a)) && self.compose(f, g) == Some(self.id(b)))
    }

    pub fn is_iso(&self, f: ArrId) -> bool {
        self.inverse(f).is_some()
    }

    pub fn is_identity(&self, f: ArrId) -> bool {
        self.identities[self.src(f)] == f
    }

    pub fn object(&self, name: &str) -> Option<ObjId> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn arrow(&self, name: &str) -> Option<ArrId> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn composition_entries(&self) -> impl Iterator<Item = (ArrId, ArrId, ArrId)> + '_ {
        let n = self.arrows.len();
        self.comp
            .iter()
            .enumerate()
            .filter(|(_, &h)| h != NONE)
            .map(move |(i, &h)| (i / n, i % n, h as ArrId))
    }

    /// Every pair `(g, f)` with `g . f` defined.
    pub fn composable_pairs(&self) -> Vec<(ArrId, ArrId)> {
        self.composition_entries().map(|(g, f, _)| (g, f)).collect()
    }
}

/// Build a category from explicit tables and check the axioms.
/// `composition` lists `(g, f, g . f)` for every composable pair.
pub fn validate_category(
    objects: Vec<String>,
    arrows: Vec<Arrow>,
    identities: Vec<ArrId>,
    composition: &[(ArrId, ArrId, ArrId)],
) -> Result<FinCategory> {
    let (no, na) = (objects.len(), arrows.len());
    for a in &arrows {
        if a.src >= no || a.tgt >= no {
            return Err(Error::Malformed(format!("arrow {} has a dangling end", a.name)));
        }
    }
    if identities.len() != no {
        return Err(Error::Malformed(format!("{} identities for {no} objects", identities.len())));
    }
    for (x, &i) in identities.iter().enumerate() {
        if i >= na || arrows[i].src != x || arrows[i].tgt != x {
            return Err(Error::Malformed(format!("identity of {} is not an endo-arrow on it", objects[x])));
        }
    }
    let mut comp = vec![NONE; na * na];
    for &(g, f, h) in composition {
        if g >= na || f >= na || h >= na {
            return Err(Error::Malformed("composition mentions a dangling arrow".into()));
        }
        if arrows[f].tgt != arrows[g].src {
            return Err(Violation::new(
                "composability",
                format!("{} . {} is listed but the arrows do not meet", arrows[g].name, arrows[f].name),
            )
            .into());
        }
        if arrows[h].src != arrows[f].src || arrows[h].tgt != arrows[g].tgt {
            return Err(Violation::new(
                "composite boundary",
                format!("{} . {} = {}", arrows[g].name, arrows[f].name, arrows[h].name),
            )
            .into());
        }
        let slot = &mut comp[g * na + f];
        if *slot != NONE && *slot != h as u32 {
            return Err(Error::Malformed(format!(
                "{} . {} is given twice",
                arrows[g].name, arrows[f].name
            )));
        }
        *slot = h as u32;
    }
    let mut homs = vec![Vec::new(); no * no];
    for (i, a) in arrows.iter().enumerate() {
        homs[a.src * no + a.tgt].push(i);
    }
    let cat = FinCategory {
        objects,
        arrows,
        identities,
        comp,
        homs,
    };
    check_axioms(&cat)?;
    Ok(cat)
}

fn check_axioms(c: &FinCategory) -> Result<()> {
    let na = c.num_arrows();
    let name = |f: ArrId| c.arrows[f].name.as_str();
    for g in 0..na {
        for f in 0..na {
            if c.tgt(f) == c.src(g) && c.compose(g, f).is_none() {
                return Err(Violation::new("totality", format!("{} . {} is missing", name(g), name(f))).into());
            }
        }
    }
    for f in 0..na {
        if c.compose(c.id(c.tgt(f)), f) != Some(f) || c.compose(f, c.id(c.src(f))) != Some(f) {
            return Err(Violation::new("identity law", name(f).to_string()).into());
        }
    }
    for (g, f, gf) in c.composition_entries().collect::<Vec<_>>() {
        for &h in &c.homs_from(c.tgt(g)) {
            let left = c.compose(h, gf);
            let right = c.compose(h, g).and_then(|hg| c.compose(hg, f));
            if left != right {
                return Err(Violation::new(
                    "associativity",
                    format!("({}, {}, {})", name(h), name(g), name(f)),
                )
                .into());
            }
        }
    }
    Ok(())
}

impl FinCategory {
    fn homs_from(&self, a: ObjId) -> Vec<ArrId> {
        (0..self.num_arrows()).filter(|&f| self.src(f) == a).collect()
    }
}

/// Product category with tuples in mixed radix, first factor most significant.
/// The empty product is the terminal category.
pub fn product(cats: &[&FinCategory]) -> FinCategory {
    let obj_counts: Vec<usize> = cats.iter().map(|c| c.num_objects()).collect();
    let arr_counts: Vec<usize> = cats.iter().map(|c| c.num_arrows()).collect();
    let no: usize = obj_counts.iter().product();
    let na: usize = arr_counts.iter().product();
    let split = |mut i: usize, counts: &[usize]| {
        let mut out = vec![0; counts.len()];
        for k in (0..counts.len()).rev() {
            out[k] = i % counts[k];
            i /= counts[k];
        }
        out
    };
    let join = |parts: &[usize], counts: &[usize]| parts.iter().zip(counts).fold(0, |acc, (&p, &c)| acc * c + p);
    let tuple_name = |names: Vec<&str>| {
        if names.len() == 1 {
            names[0].to_string()
        } else {
            format!("({})", names.join(","))
        }
    };
    let objects: Vec<String> = (0..no)
        .map(|i| {
            let parts = split(i, &obj_counts);
            tuple_name(parts.iter().zip(cats).map(|(&p, c)| c.objects[p].as_str()).collect())
        })
        .collect();
    let arrows: Vec<Arrow> = (0..na)
        .map(|i| {
            let parts = split(i, &arr_counts);
            let srcs: Vec<usize> = parts.iter().zip(cats).map(|(&p, c)| c.src(p)).collect();
            let tgts: Vec<usize> = parts.iter().zip(cats).map(|(&p, c)| c.tgt(p)).collect();
            Arrow {
                name: tuple_name(parts.iter().zip(cats).map(|(&p, c)| c.arrows[p].name.as_str()).collect()),
                src: join(&srcs, &obj_counts),
                tgt: join(&tgts, &obj_counts),
            }
        })
        .collect();
    let identities: Vec<ArrId> = (0..no)
        .map(|i| {
            let parts = split(i, &obj_counts);
            let ids: Vec<usize> = parts.iter().zip(cats).map(|(&p, c)| c.id(p)).collect();
            join(&ids, &arr_counts)
        })
        .collect();
    let mut comp = vec![NONE; na * na];
    for g in 0..na {
        let gp = split(g, &arr_counts);
        for f in 0..na {
            let fp = split(f, &arr_counts);
            let parts: Option<Vec<usize>> = gp
                .iter()
                .zip(&fp)
                .zip(cats)
                .map(|((&a, &b), c)| c.compose(a, b))
                .collect();
            if let Some(parts) = parts {
                comp[g * na + f] = join(&parts, &arr_counts) as u32;
            }
        }
    }
    let mut homs = vec![Vec::new(); no * no];
    for (i, a) in arrows.iter().enumerate() {
        homs[a.src * no + a.tgt].push(i);
    }
    FinCategory {
        objects,
        arrows,
        identities,
        comp,
        homs,
    }
}

pub fn power(c: &FinCategory, k: usize) -> FinCategory {
    product(&vec![c; k])
}

pub fn terminal() -> FinCategory {
    product(&[])
}

/// Index of an object tuple of `C^n`, matching [`power`].
pub fn obj_tuple_index(c: &FinCategory, xs: &[ObjId]) -> usize {
    tuple_index(xs, c.num_objects())
}

pub fn arr_tuple_index(c: &FinCategory, fs: &[ArrId]) -> usize {
    tuple_index(fs, c.num_arrows())
}

pub fn obj_tuple(c: &FinCategory, index: usize, n: usize) -> Vec<ObjId> {
    tuple_at(index, c.num_objects(), n)
}

pub fn arr_tuple(c: &FinCategory, index: usize, n: usize) -> Vec<ArrId> {
    tuple_at(index, c.num_arrows(), n)
}

pub fn obj_tuple_count(c: &FinCategory, n: usize) -> usize {
    tuple_count(c.num_objects(), n)
}

pub fn arr_tuple_count(c: &FinCategory, n: usize) -> usize {
    tuple_count(c.num_arrows(), n)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FinFunctor {
    pub obj: Vec<ObjId>,
    pub arr: Vec<ArrId>,
}

impl FinFunctor {
    pub fn identity(c: &FinCategory) -> FinFunctor {
        FinFunctor {
            obj: (0..c.num_objects()).collect(),
            arr: (0..c.num_arrows()).collect(),
        }
    }

    /// `self` first, then `g`.
    pub fn then(&self, g: &FinFunctor) -> FinFunctor {
        FinFunctor {
            obj: self.obj.iter().map(|&x| g.obj[x]).collect(),
            arr: self.arr.iter().map(|&f| g.arr[f]).collect(),
        }
    }
}

pub fn validate_functor(c: &FinCategory, d: &FinCategory, f: &FinFunctor) -> Result<()> {
    if f.obj.len() != c.num_objects() || f.arr.len() != c.num_arrows() {
        return Err(Error::Arity("functor tables do not cover the source".into()));
    }
    if f.obj.iter().any(|&x| x >= d.num_objects()) || f.arr.iter().any(|&a| a >= d.num_arrows()) {
        return Err(Error::Malformed("functor maps outside the target".into()));
    }
    for a in 0..c.num_arrows() {
        let img = f.arr[a];
        if d.src(img) != f.obj[c.src(a)] || d.tgt(img) != f.obj[c.tgt(a)] {
            return Err(Violation::new("functor boundary", c.arrows[a].name.clone()).into());
        }
    }
    for x in 0..c.num_objects() {
        if f.arr[c.id(x)] != d.id(f.obj[x]) {
            return Err(Violation::new("functor identity", c.objects[x].clone()).into());
        }
    }
    for (g, h, gh) in c.composition_entries() {
        if d.compose(f.arr[g], f.arr[h]) != Some(f.arr[gh]) {
            return Err(Violation::new(
                "functor composition",
                format!("{} . {}", c.arrows[g].name, c.arrows[h].name),
            )
            .into());
        }
    }
    Ok(())
}

/// Component per object of the source category.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FinNat {
    pub comps: Vec<ArrId>,
}

pub fn validate_nat(c: &FinCategory, d: &FinCategory, f: &FinFunctor, g: &FinFunctor, eta: &FinNat) -> Result<()> {
    if eta.comps.len() != c.num_objects() {
        return Err(Error::Arity("natural transformation has the wrong number of components".into()));
    }
    for x in 0..c.num_objects() {
        let a = eta.comps[x];
        if a >= d.num_arrows() || d.src(a) != f.obj[x] || d.tgt(a) != g.obj[x] {
            return Err(Violation::new("component boundary", c.objects[x].clone()).into());
        }
    }
    for a in 0..c.num_arrows() {
        let (x, y) = (c.src(a), c.tgt(a));
        if d.compose(g.arr[a], eta.comps[x]) != d.compose(eta.comps[y], f.arr[a]) {
            return Err(Violation::new("naturality", c.arrows[a].name.clone()).into());
        }
    }
    Ok(())
}

/// `eta` then `theta`.
pub fn vertical(d: &FinCategory, eta: &FinNat, theta: &FinNat) -> FinNat {
    FinNat {
        comps: eta
            .comps
            .iter()
            .zip(&theta.comps)
            .map(|(&a, &b)| d.compose(b, a).expect("components meet"))
            .collect(),
    }
}

/// Horizontal composite of `eta: F => G` (C -> D) and `theta: H => K` (D -> E),
/// as `K(eta_x) . theta_{F x}`.
pub fn horizontal(e: &FinCategory, f: &FinFunctor, eta: &FinNat, theta: &FinNat, k: &FinFunctor) -> FinNat {
    FinNat {
        comps: (0..f.obj.len())
            .map(|x| e.compose(k.arr[eta.comps[x]], theta.comps[f.obj[x]]).expect("components meet"))
            .collect(),
    }
}

fn check_size(c: &FinCategory, max_arrows: usize) -> Result<()> {
    if c.num_arrows() > max_arrows {
        return Err(Error::Bound(format!("{} arrows exceed {max_arrows}", c.num_arrows())));
    }
    Ok(())
}

/// All functors `C -> D`, ordered by object map then arrow map.
pub fn enumerate_functors(c: &FinCategory, d: &FinCategory, max_arrows: usize) -> Result<Vec<FinFunctor>> {
    check_size(c, max_arrows)?;
    check_size(d, max_arrows)?;
    let mut out = Vec::new();
    let no = c.num_objects();
    if no > 0 && d.num_objects() == 0 {
        return Ok(out);
    }
    let obj_maps = tuple_count(d.num_objects(), no);
    if obj_maps > 1 << 20 {
        return Err(Error::Bound("too many object maps".into()));
    }
    // arrows other than identities, checked against composites already chosen
    let free: Vec<ArrId> = (0..c.num_arrows()).filter(|&a| !c.is_identity(a)).collect();
    for oi in 0..obj_maps {
        let obj = tuple_at(oi, d.num_objects(), no);
        let mut arr = vec![usize::MAX; c.num_arrows()];
        for x in 0..no {
            arr[c.id(x)] = d.id(obj[x]);
        }
        extend_functor(c, d, &obj, &free, 0, &mut arr, &mut out);
    }
    Ok(out)
}

fn extend_functor(
    c: &FinCategory,
    d: &FinCategory,
    obj: &[ObjId],
    free: &[ArrId],
    k: usize,
    arr: &mut Vec<ArrId>,
    out: &mut Vec<FinFunctor>,
) {
    if k == free.len() {
        out.push(FinFunctor {
            obj: obj.to_vec(),
            arr: arr.clone(),
        });
        return;
    }
    let a = free[k];
    for &img in d.hom(obj[c.src(a)], obj[c.tgt(a)]) {
        arr[a] = img;
        let consistent = c.composition_entries().all(|(g, f, gf)| {
            let (x, y, z) = (arr[g], arr[f], arr[gf]);
            if x == usize::MAX || y == usize::MAX || z == usize::MAX {
                return true;
            }
            d.compose(x, y) == Some(z)
        });
        if consistent {
            extend_functor(c, d, obj, free, k + 1, arr, out);
        }
    }
    arr[a] = usize::MAX;
}

/// All natural transformations `F => G` between functors `C -> D`.
pub fn enumerate_naturals(c: &FinCategory, d: &FinCategory, f: &FinFunctor, g: &FinFunctor) -> Vec<FinNat> {
    let mut out = Vec::new();
    let mut comps = vec![usize::MAX; c.num_objects()];
    extend_nat(c, d, f, g, 0, &mut comps, &mut out);
    out
}

fn extend_nat(c: &FinCategory, d: &FinCategory, f: &FinFunctor, g: &FinFunctor, x: usize, comps: &mut Vec<ArrId>, out: &mut Vec<FinNat>) {
    if x == c.num_objects() {
        out.push(FinNat { comps: comps.clone() });
        return;
    }
    for &a in d.hom(f.obj[x], g.obj[x]) {
        comps[x] = a;
        let ok = (0..c.num_arrows()).all(|h| {
            let (s, t) = (c.src(h), c.tgt(h));
            if s > x || t > x {
                return true;
            }
            d.compose(g.arr[h], comps[s]) == d.compose(comps[t], f.arr[h])
        });
        if ok {
            extend_nat(c, d, f, g, x + 1, comps, out);
        }
    }
    comps[x] = usize::MAX;
}
