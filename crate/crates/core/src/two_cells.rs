//! Lawvere 2-theories: generating 2-cells and pasting expressions.

use crate::equality::rewrite_equal;
use crate::error::{Error, Result};
use crate::rewrite::DEFAULT_BUDGET;
use crate::term::Morphism;
use crate::theory::{Equation, TheoryPresentation};

pub type CellId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoCellSymbol {
    pub name: String,
    pub source: Morphism,
    pub target: Morphism,
    pub invertible: bool,
}

/// A composite 2-cell. Whiskering and vertical composition are written in
/// diagrammatic order: `Vert(p, q)` is `p` then `q`, `WhiskerL(h, p)` runs `h`
/// before the cell and `WhiskerR(p, h)` runs `h` after it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Pasting {
    Id(Morphism),
    Gen(CellId),
    Inverse(Box<Pasting>),
    Vert(Box<Pasting>, Box<Pasting>),
    WhiskerL(Morphism, Box<Pasting>),
    WhiskerR(Box<Pasting>, Morphism),
    /// `k` copies side by side, on the rows of a `k x m` matrix.
    PowerL(usize, Box<Pasting>),
    /// The cell on every column of an `m x k` matrix.
    PowerR(Box<Pasting>, usize),
    /// Cells with a common source, stacked into a cell into the product.
    Tuple(Vec<Pasting>),
}

impl Pasting {
    pub fn vert(p: Pasting, q: Pasting) -> Pasting {
        Pasting::Vert(Box::new(p), Box::new(q))
    }

    pub fn inverse(p: Pasting) -> Pasting {
        Pasting::Inverse(Box::new(p))
    }

    pub fn whisker_l(h: Morphism, p: Pasting) -> Pasting {
        Pasting::WhiskerL(h, Box::new(p))
    }

    pub fn whisker_r(p: Pasting, h: Morphism) -> Pasting {
        Pasting::WhiskerR(Box::new(p), h)
    }

    pub fn power_l(k: usize, p: Pasting) -> Pasting {
        Pasting::PowerL(k, Box::new(p))
    }

    pub fn power_r(p: Pasting, k: usize) -> Pasting {
        Pasting::PowerR(Box::new(p), k)
    }

    pub fn generators(&self, out: &mut Vec<CellId>) {
        match self {
            Pasting::Id(_) => {}
            Pasting::Gen(c) => out.push(*c),
            Pasting::Inverse(p) | Pasting::WhiskerL(_, p) | Pasting::WhiskerR(p, _) | Pasting::PowerL(_, p) | Pasting::PowerR(p, _) => {
                p.generators(out)
            }
            Pasting::Vert(p, q) => {
                p.generators(out);
                q.generators(out);
            }
            Pasting::Tuple(ps) => ps.iter().for_each(|p| p.generators(out)),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Pasting::Id(_) | Pasting::Gen(_) => 1,
            Pasting::Inverse(p) | Pasting::WhiskerL(_, p) | Pasting::WhiskerR(p, _) | Pasting::PowerL(_, p) | Pasting::PowerR(p, _) => 1 + p.size(),
            Pasting::Vert(p, q) => 1 + p.size() + q.size(),
            Pasting::Tuple(ps) => 1 + ps.iter().map(Pasting::size).sum::<usize>(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellEquation {
    pub name: String,
    pub lhs: Pasting,
    pub rhs: Pasting,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoTheory {
    pub base: TheoryPresentation,
    pub cells: Vec<TwoCellSymbol>,
    pub cell_equations: Vec<CellEquation>,
}

impl TwoTheory {
    pub fn new(base: TheoryPresentation) -> Self {
        TwoTheory {
            base,
            cells: Vec::new(),
            cell_equations: Vec::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.base.name
    }

    pub fn cell(&self, name: &str) -> Result<CellId> {
        self.cells
            .iter()
            .position(|c| c.name == name)
            .ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    pub fn add_cell(&mut self, name: &str, source: Morphism, target: Morphism, invertible: bool) -> Result<CellId> {
        if self.cells.iter().any(|c| c.name == name) || self.base.signature.lookup(name).is_some() {
            return Err(Error::Duplicate(name.to_string()));
        }
        if source.source != target.source || source.target() != target.target() {
            return Err(Error::Arity(format!("cell {name} joins non-parallel maps")));
        }
        source.check(&self.base.signature)?;
        target.check(&self.base.signature)?;
        self.cells.push(TwoCellSymbol {
            name: name.to_string(),
            source,
            target,
            invertible,
        });
        Ok(self.cells.len() - 1)
    }

    pub fn add_cell_equation(&mut self, name: &str, lhs: Pasting, rhs: Pasting) -> Result<()> {
        if self.cell_equations.iter().any(|e| e.name == name) {
            return Err(Error::Duplicate(name.to_string()));
        }
        let (s1, t1) = self.boundary(&lhs)?;
        let (s2, t2) = self.boundary(&rhs)?;
        self.same_map(&s1, &s2, &format!("source of cell equation {name}"))?;
        self.same_map(&t1, &t2, &format!("target of cell equation {name}"))?;
        self.cell_equations.push(CellEquation {
            name: name.to_string(),
            lhs,
            rhs,
        });
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        for c in &self.cells {
            c.source.check(&self.base.signature)?;
            c.target.check(&self.base.signature)?;
        }
        for e in &self.cell_equations {
            let (s1, t1) = self.boundary(&e.lhs)?;
            let (s2, t2) = self.boundary(&e.rhs)?;
            self.same_map(&s1, &s2, &e.name)?;
            self.same_map(&t1, &t2, &e.name)?;
        }
        Ok(())
    }

    /// Maps are identified modulo the 1-cell equations, by rewriting.
    pub fn same_map(&self, f: &Morphism, g: &Morphism, what: &str) -> Result<()> {
        if f == g {
            return Ok(());
        }
        if f.source == g.source && f.target() == g.target() && rewrite_equal(&self.base, f, g, DEFAULT_BUDGET)?.is_some() {
            return Ok(());
        }
        Err(Error::Arity(format!(
            "{what}: {} and {} do not match",
            self.base.show_morphism(f),
            self.base.show_morphism(g)
        )))
    }

    pub fn is_invertible(&self, p: &Pasting) -> bool {
        let mut gens = Vec::new();
        p.generators(&mut gens);
        gens.iter().all(|&c| self.cells[c].invertible)
    }

    pub fn boundary(&self, p: &Pasting) -> Result<(Morphism, Morphism)> {
        match p {
            Pasting::Id(f) => {
                f.check(&self.base.signature)?;
                Ok((f.clone(), f.clone()))
            }
            Pasting::Gen(c) => {
                let cell = self
                    .cells
                    .get(*c)
                    .ok_or_else(|| Error::UnknownName(format!("cell #{c}")))?;
                Ok((cell.source.clone(), cell.target.clone()))
            }
            Pasting::Inverse(q) => {
                if !self.is_invertible(q) {
                    return Err(Error::Malformed("inverse of a non-invertible cell".into()));
                }
                let (s, t) = self.boundary(q)?;
                Ok((t, s))
            }
            Pasting::Vert(a, b) => {
                let (s1, t1) = self.boundary(a)?;
                let (s2, t2) = self.boundary(b)?;
                self.same_map(&t1, &s2, "vertical composite")?;
                Ok((s1, t2))
            }
            Pasting::WhiskerL(h, q) => {
                h.check(&self.base.signature)?;
                let (s, t) = self.boundary(q)?;
                Ok((h.compose(&s)?, h.compose(&t)?))
            }
            Pasting::WhiskerR(q, h) => {
                h.check(&self.base.signature)?;
                let (s, t) = self.boundary(q)?;
                Ok((s.compose(h)?, t.compose(h)?))
            }
            Pasting::PowerL(k, q) => {
                let (s, t) = self.boundary(q)?;
                Ok((Morphism::power_left(*k, &s), Morphism::power_left(*k, &t)))
            }
            Pasting::PowerR(q, k) => {
                let (s, t) = self.boundary(q)?;
                Ok((Morphism::power_right(&s, *k), Morphism::power_right(&t, *k)))
            }
            Pasting::Tuple(ps) => {
                let mut srcs = Vec::new();
                let mut tgts = Vec::new();
                for q in ps {
                    let (s, t) = self.boundary(q)?;
                    srcs.push(s);
                    tgts.push(t);
                }
                let source = match srcs.first() {
                    Some(s) => s.source,
                    None => {
                        return Err(Error::Malformed("empty tuple of cells has no determined source".into()));
                    }
                };
                Ok((Morphism::tuple(source, &srcs)?, Morphism::tuple(source, &tgts)?))
            }
        }
    }

    /// The 1-theory obtained by turning every generating 2-cell into an
    /// equation between its boundaries.
    pub fn truncation(&self) -> TheoryPresentation {
        self.flatten(|_| true)
    }

    /// The 1-theory in which exactly the invertible 2-cells become equations.
    pub fn iso_flattening(&self) -> TheoryPresentation {
        self.flatten(|c| c.invertible)
    }

    fn flatten(&self, keep: impl Fn(&TwoCellSymbol) -> bool) -> TheoryPresentation {
        let mut t = self.base.clone();
        for c in self.cells.iter().filter(|c| keep(c)) {
            t.equations.push(Equation {
                name: c.name.clone(),
                lhs: c.source.clone(),
                rhs: c.target.clone(),
            });
        }
        t
    }
}

/// Bounded normalization of pasting expressions: drops identities, cancels a
/// cell against its inverse, merges nested whiskers and pushes whiskers and
/// powers through vertical composites. Two expressions with the same normal
/// form denote the same 2-cell in every model.
pub fn normalize_pasting(theory: &TwoTheory, p: &Pasting, budget: &mut usize) -> Option<Pasting> {
    if *budget == 0 {
        return None;
    }
    *budget -= 1;
    let id_of = |q: &Pasting| theory.boundary(q).ok().map(|(s, _)| Pasting::Id(s));
    Some(match p {
        Pasting::Id(_) | Pasting::Gen(_) => p.clone(),
        Pasting::Inverse(q) => match normalize_pasting(theory, q, budget)? {
            Pasting::Inverse(r) => *r,
            Pasting::Id(f) => Pasting::Id(f),
            Pasting::Vert(a, b) => normalize_pasting(theory, &Pasting::vert(Pasting::inverse(*b), Pasting::inverse(*a)), budget)?,
            r => Pasting::inverse(r),
        },
        Pasting::Vert(_, _) => {
            let mut factors = Vec::new();
            flatten_vert(p, &mut factors);
            let mut out: Vec<Pasting> = Vec::new();
            for f in factors {
                let f = normalize_pasting(theory, f, budget)?;
                let mut parts = Vec::new();
                flatten_vert(&f, &mut parts);
                for g in parts {
                    if matches!(g, Pasting::Id(_)) {
                        continue;
                    }
                    let cancels = match (out.last(), g) {
                        (Some(Pasting::Inverse(a)), b) if **a == *b => true,
                        (Some(a), Pasting::Inverse(b)) if *a == **b => true,
                        _ => false,
                    };
                    if cancels {
                        out.pop();
                    } else {
                        out.push(g.clone());
                    }
                }
            }
            match out.len() {
                0 => id_of(p)?,
                _ => out.into_iter().reduce(Pasting::vert).expect("non-empty"),
            }
        }
        Pasting::WhiskerL(h, q) => {
            let q = normalize_pasting(theory, q, budget)?;
            if *h == Morphism::identity(h.source) {
                return Some(q);
            }
            match q {
                Pasting::Id(f) => Pasting::Id(h.compose(&f).ok()?),
                Pasting::WhiskerL(h2, r) => Pasting::whisker_l(h.compose(&h2).ok()?, *r),
                Pasting::Vert(a, b) => normalize_pasting(
                    theory,
                    &Pasting::vert(Pasting::whisker_l(h.clone(), *a), Pasting::whisker_l(h.clone(), *b)),
                    budget,
                )?,
                r => Pasting::whisker_l(h.clone(), r),
            }
        }
        Pasting::WhiskerR(q, h) => {
            let q = normalize_pasting(theory, q, budget)?;
            if *h == Morphism::identity(h.source) {
                return Some(q);
            }
            match q {
                Pasting::Id(f) => Pasting::Id(f.compose(h).ok()?),
                Pasting::WhiskerR(r, h2) => Pasting::whisker_r(*r, h2.compose(h).ok()?),
                Pasting::Vert(a, b) => normalize_pasting(
                    theory,
                    &Pasting::vert(Pasting::whisker_r(*a, h.clone()), Pasting::whisker_r(*b, h.clone())),
                    budget,
                )?,
                r => Pasting::whisker_r(r, h.clone()),
            }
        }
        Pasting::PowerL(k, q) => {
            let q = normalize_pasting(theory, q, budget)?;
            match (k, q) {
                (1, r) => r,
                (_, Pasting::Id(f)) => Pasting::Id(Morphism::power_left(*k, &f)),
                (_, Pasting::Vert(a, b)) => normalize_pasting(
                    theory,
                    &Pasting::vert(Pasting::power_l(*k, *a), Pasting::power_l(*k, *b)),
                    budget,
                )?,
                (_, r) => Pasting::power_l(*k, r),
            }
        }
        Pasting::PowerR(q, k) => {
            let q = normalize_pasting(theory, q, budget)?;
            match (k, q) {
                (1, r) => r,
                (_, Pasting::Id(f)) => Pasting::Id(Morphism::power_right(&f, *k)),
                (_, Pasting::Vert(a, b)) => normalize_pasting(
                    theory,
                    &Pasting::vert(Pasting::power_r(*a, *k), Pasting::power_r(*b, *k)),
                    budget,
                )?,
                (_, r) => Pasting::power_r(r, *k),
            }
        }
        Pasting::Tuple(ps) => {
            let qs: Option<Vec<Pasting>> = ps.iter().map(|q| normalize_pasting(theory, q, budget)).collect();
            let qs = qs?;
            if qs.len() == 1 {
                return qs.into_iter().next();
            }
            if qs.iter().all(|q| matches!(q, Pasting::Id(_))) {
                let maps: Vec<Morphism> = qs
                    .iter()
                    .map(|q| match q {
                        Pasting::Id(f) => f.clone(),
                        _ => unreachable!(),
                    })
                    .collect();
                let source = maps.first().map(|f| f.source)?;
                Pasting::Id(Morphism::tuple(source, &maps).ok()?)
            } else {
                Pasting::Tuple(qs)
            }
        }
    })
}

fn flatten_vert<'a>(p: &'a Pasting, out: &mut Vec<&'a Pasting>) {
    match p {
        Pasting::Vert(a, b) => {
            flatten_vert(a, out);
            flatten_vert(b, out);
        }
        q => out.push(q),
    }
}

/// Direction and strength of structure cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Weakness {
    Strict,
    Pseudo,
    Lax,
    Colax,
}

impl Weakness {
    pub fn parse(s: &str) -> Option<Weakness> {
        match s {
            "strict" => Some(Weakness::Strict),
            "pseudo" => Some(Weakness::Pseudo),
            "lax" => Some(Weakness::Lax),
            "colax" => Some(Weakness::Colax),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Weakness::Strict => "strict",
            Weakness::Pseudo => "pseudo",
            Weakness::Lax => "lax",
            Weakness::Colax => "colax",
        }
    }

    /// Colax cells point the other way; the rest use the lax direction.
    pub fn is_colax(self) -> bool {
        self == Weakness::Colax
    }
}
