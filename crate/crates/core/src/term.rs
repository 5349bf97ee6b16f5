//! Terms and morphisms of a free Lawvere theory.
//!
//! A morphism `m -> n` is stored as `n` terms in `m` variables. Composites of
//! shape `m·k` use a row-major layout: entry `(i, j)` of an `m x k` matrix of
//! variables is variable `i*k + j`.

use crate::error::{Error, Result};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct OpSymbol {
    pub name: String,
    pub arity: usize,
}

/// Index of an operation in its signature.
pub type OpId = usize;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub ops: Vec<OpSymbol>,
}

impl Signature {
    pub fn lookup(&self, name: &str) -> Option<OpId> {
        self.ops.iter().position(|o| o.name == name)
    }

    pub fn arity(&self, op: OpId) -> usize {
        self.ops[op].arity
    }

    pub fn name(&self, op: OpId) -> &str {
        &self.ops[op].name
    }

    pub fn add(&mut self, name: &str, arity: usize) -> Result<OpId> {
        if self.lookup(name).is_some() {
            return Err(Error::Duplicate(name.to_string()));
        }
        self.ops.push(OpSymbol {
            name: name.to_string(),
            arity,
        });
        Ok(self.ops.len() - 1)
    }

    pub fn show_term(&self, t: &Term) -> String {
        let mut out = String::new();
        self.write_term(t, &mut out);
        out
    }

    fn write_term(&self, t: &Term, out: &mut String) {
        match t {
            Term::Proj(i) => {
                out.push('x');
                out.push_str(&(i + 1).to_string());
            }
            Term::Apply(op, args) => {
                out.push_str(self.name(*op));
                if !args.is_empty() {
                    out.push('(');
                    for (k, a) in args.iter().enumerate() {
                        if k > 0 {
                            out.push_str(", ");
                        }
                        self.write_term(a, out);
                    }
                    out.push(')');
                }
            }
        }
    }

    /// Bare term when the source is the least context the term needs, otherwise
    /// an explicit literal `<t1, ..., tn | m>`.
    pub fn show_morphism(&self, f: &Morphism) -> String {
        if f.target() == 1 && f.source == f.components[0].min_context() {
            return self.show_term(&f.components[0]);
        }
        let parts: Vec<String> = f.components.iter().map(|t| self.show_term(t)).collect();
        format!("<{} | {}>", parts.join(", "), f.source)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Proj(usize),
    Apply(OpId, Vec<Term>),
}

impl Term {
    /// The operation applied to the first `arity` variables.
    pub fn generic(op: OpId, arity: usize) -> Term {
        Term::Apply(op, (0..arity).map(Term::Proj).collect())
    }

    pub fn is_inert(&self) -> bool {
        matches!(self, Term::Proj(_))
    }

    /// Replace every `Proj(j)` by `args[j]`.
    pub fn subst(&self, args: &[Term]) -> Term {
        match self {
            Term::Proj(j) => args[*j].clone(),
            Term::Apply(op, xs) => Term::Apply(*op, xs.iter().map(|x| x.subst(args)).collect()),
        }
    }

    pub fn rename(&self, f: &impl Fn(usize) -> usize) -> Term {
        match self {
            Term::Proj(j) => Term::Proj(f(*j)),
            Term::Apply(op, xs) => Term::Apply(*op, xs.iter().map(|x| x.rename(f)).collect()),
        }
    }

    /// Smallest context in which the term is well formed.
    pub fn min_context(&self) -> usize {
        match self {
            Term::Proj(j) => j + 1,
            Term::Apply(_, xs) => xs.iter().map(Term::min_context).max().unwrap_or(0),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Proj(_) => 1,
            Term::Apply(_, xs) => 1 + xs.iter().map(Term::size).sum::<usize>(),
        }
    }

    /// Variables in left-to-right order, with repetitions.
    pub fn variables(&self, out: &mut Vec<usize>) {
        match self {
            Term::Proj(j) => out.push(*j),
            Term::Apply(_, xs) => xs.iter().for_each(|x| x.variables(out)),
        }
    }

    pub fn at(&self, pos: &[usize]) -> Option<&Term> {
        match pos.split_first() {
            None => Some(self),
            Some((&i, rest)) => match self {
                Term::Apply(_, xs) => xs.get(i)?.at(rest),
                Term::Proj(_) => None,
            },
        }
    }

    pub fn replace_at(&self, pos: &[usize], new: Term) -> Term {
        match pos.split_first() {
            None => new,
            Some((&i, rest)) => match self {
                Term::Apply(op, xs) => {
                    let mut xs = xs.clone();
                    xs[i] = xs[i].replace_at(rest, new);
                    Term::Apply(*op, xs)
                }
                Term::Proj(_) => self.clone(),
            },
        }
    }

    /// Every position, in pre-order.
    pub fn positions(&self) -> Vec<Vec<usize>> {
        fn go(t: &Term, here: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            out.push(here.clone());
            if let Term::Apply(_, xs) = t {
                for (i, x) in xs.iter().enumerate() {
                    here.push(i);
                    go(x, here, out);
                    here.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn check(&self, sig: &Signature, context: usize) -> Result<()> {
        match self {
            Term::Proj(j) if *j < context => Ok(()),
            Term::Proj(j) => Err(Error::Arity(format!(
                "variable x{} outside a context of {context}",
                j + 1
            ))),
            Term::Apply(op, xs) => {
                let sym = sig
                    .ops
                    .get(*op)
                    .ok_or_else(|| Error::UnknownName(format!("operation #{op}")))?;
                if sym.arity != xs.len() {
                    return Err(Error::Arity(format!(
                        "{} takes {} arguments, got {}",
                        sym.name,
                        sym.arity,
                        xs.len()
                    )));
                }
                xs.iter().try_for_each(|x| x.check(sig, context))
            }
        }
    }
}

/// A map `source -> components.len()` of the free theory.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Morphism {
    pub source: usize,
    pub components: Vec<Term>,
}

impl Morphism {
    pub fn new(source: usize, components: Vec<Term>) -> Result<Morphism> {
        for t in &components {
            if t.min_context() > source {
                return Err(Error::Arity(format!(
                    "component needs {} variables but the source is {source}",
                    t.min_context()
                )));
            }
        }
        Ok(Morphism { source, components })
    }

    pub fn target(&self) -> usize {
        self.components.len()
    }

    pub fn check(&self, sig: &Signature) -> Result<()> {
        self.components.iter().try_for_each(|t| t.check(sig, self.source))
    }

    pub fn identity(n: usize) -> Morphism {
        Morphism {
            source: n,
            components: (0..n).map(Term::Proj).collect(),
        }
    }

    pub fn projection(n: usize, i: usize) -> Morphism {
        Morphism {
            source: n,
            components: vec![Term::Proj(i)],
        }
    }

    /// The generator `op` as a map `arity -> 1`.
    pub fn generator(op: OpId, arity: usize) -> Morphism {
        Morphism {
            source: arity,
            components: vec![Term::generic(op, arity)],
        }
    }

    /// `perm[i]` is the input variable read by output `i`.
    pub fn permutation(perm: &[usize]) -> Morphism {
        Morphism {
            source: perm.len(),
            components: perm.iter().map(|&j| Term::Proj(j)).collect(),
        }
    }

    /// Transpose of an `m x k` matrix of variables into a `k x m` one.
    pub fn transpose(m: usize, k: usize) -> Morphism {
        let mut components = Vec::with_capacity(m * k);
        for j in 0..k {
            for i in 0..m {
                components.push(Term::Proj(i * k + j));
            }
        }
        Morphism {
            source: m * k,
            components,
        }
    }

    pub fn is_inert(&self) -> bool {
        self.components.iter().all(Term::is_inert)
    }

    /// Diagrammatic composite: `self` first, then `g`.
    pub fn compose(&self, g: &Morphism) -> Result<Morphism> {
        if self.target() != g.source {
            return Err(Error::Arity(format!(
                "cannot compose {} -> {} with {} -> {}",
                self.source,
                self.target(),
                g.source,
                g.target()
            )));
        }
        Ok(Morphism {
            source: self.source,
            components: g.components.iter().map(|t| t.subst(&self.components)).collect(),
        })
    }

    /// Side-by-side product `self x g`.
    pub fn product(&self, g: &Morphism) -> Morphism {
        let shift = self.source;
        let mut components = self.components.clone();
        components.extend(g.components.iter().map(|t| t.rename(&|j| j + shift)));
        Morphism {
            source: self.source + g.source,
            components,
        }
    }

    /// Tuple of maps sharing a source.
    pub fn tuple(source: usize, parts: &[Morphism]) -> Result<Morphism> {
        let mut components = Vec::new();
        for p in parts {
            if p.source != source {
                return Err(Error::Arity(format!(
                    "tuple component has source {}, expected {source}",
                    p.source
                )));
            }
            components.extend(p.components.iter().cloned());
        }
        Ok(Morphism { source, components })
    }

    /// `k` copies of `self` on consecutive blocks: `k*m -> k*n`, acting on the
    /// rows of a `k x m` matrix.
    pub fn power_left(k: usize, f: &Morphism) -> Morphism {
        let (m, n) = (f.source, f.target());
        let mut components = Vec::with_capacity(k * n);
        for b in 0..k {
            for t in &f.components {
                components.push(t.rename(&|j| b * m + j));
            }
        }
        Morphism {
            source: k * m,
            components,
        }
    }

    /// `self` applied to every column of an `m x k` matrix: `m*k -> n*k`.
    pub fn power_right(f: &Morphism, k: usize) -> Morphism {
        let mut components = Vec::with_capacity(f.target() * k);
        for t in &f.components {
            for j in 0..k {
                components.push(t.rename(&|i| i * k + j));
            }
        }
        Morphism {
            source: f.source * k,
            components,
        }
    }
}

/// `alpha(beta_1, ..., beta_n)` with the variables of each `beta_i` shifted past
/// those of the earlier ones.
pub fn operadic_compose(alpha: &Morphism, betas: &[Morphism]) -> Result<Morphism> {
    if alpha.target() != 1 {
        return Err(Error::Arity("operadic composition needs a map n -> 1".into()));
    }
    if betas.len() != alpha.source {
        return Err(Error::Arity(format!(
            "expected {} maps to plug in, got {}",
            alpha.source,
            betas.len()
        )));
    }
    let mut prod = Morphism::identity(0);
    for b in betas {
        if b.target() != 1 {
            return Err(Error::Arity("plugged maps must have target 1".into()));
        }
        prod = prod.product(b);
    }
    prod.compose(alpha)
}

/// `alpha` on the columns, then `beta` on the rows: for `alpha: m -> n` and
/// `beta: k -> l`, a map `m*k -> n*l`.
pub fn tensor_ops(alpha: &Morphism, beta: &Morphism) -> Morphism {
    Morphism::power_right(alpha, beta.source)
        .compose(&Morphism::power_left(alpha.target(), beta))
        .expect("shapes agree by construction")
}

/// `beta` on the rows, then `alpha` on the columns. This is the other side of
/// the commutativity square; it equals `tensor_ops(beta, alpha)` conjugated by
/// transposition.
pub fn tensor_ops_rev(alpha: &Morphism, beta: &Morphism) -> Morphism {
    Morphism::power_left(alpha.source, beta)
        .compose(&Morphism::power_right(alpha, beta.target()))
        .expect("shapes agree by construction")
}

/// Index of a tuple in mixed radix with the first entry most significant.
pub fn tuple_index(tuple: &[usize], base: usize) -> usize {
    tuple.iter().fold(0, |acc, &x| acc * base + x)
}

/// Inverse of [`tuple_index`].
pub fn tuple_at(mut index: usize, base: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = index % base.max(1);
        index /= base.max(1);
    }
    out
}

/// `base^len`, the number of tuples of a given length.
pub fn tuple_count(base: usize, len: usize) -> usize {
    base.pow(len as u32)
}

/// All tuples of a given length over `0..base`, in [`tuple_index`] order.
pub fn all_tuples(base: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..tuple_count(base, len)).map(move |i| tuple_at(i, base, len))
}
