//! Presentations of Lawvere 1-theories.

use crate::error::{Error, Result};
use crate::term::{Morphism, OpId, Signature, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub name: String,
    pub lhs: Morphism,
    pub rhs: Morphism,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoryPresentation {
    pub name: String,
    pub signature: Signature,
    pub equations: Vec<Equation>,
    /// `None` means every generator.
    pub basis: Option<Vec<OpId>>,
}

impl TheoryPresentation {
    pub fn new(name: &str) -> Self {
        TheoryPresentation {
            name: name.to_string(),
            signature: Signature::default(),
            equations: Vec::new(),
            basis: None,
        }
    }

    pub fn add_op(&mut self, name: &str, arity: usize) -> Result<OpId> {
        self.signature.add(name, arity)
    }

    pub fn op(&self, name: &str) -> Result<OpId> {
        self.signature
            .lookup(name)
            .ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    pub fn add_equation(&mut self, name: &str, lhs: Morphism, rhs: Morphism) -> Result<()> {
        if self.equations.iter().any(|e| e.name == name) {
            return Err(Error::Duplicate(name.to_string()));
        }
        let eq = Equation {
            name: name.to_string(),
            lhs,
            rhs,
        };
        self.check_equation(&eq)?;
        self.equations.push(eq);
        Ok(())
    }

    fn check_equation(&self, eq: &Equation) -> Result<()> {
        if eq.lhs.source != eq.rhs.source || eq.lhs.target() != eq.rhs.target() {
            return Err(Error::Arity(format!(
                "equation {} relates a {} -> {} map to a {} -> {} map",
                eq.name,
                eq.lhs.source,
                eq.lhs.target(),
                eq.rhs.source,
                eq.rhs.target()
            )));
        }
        eq.lhs.check(&self.signature)?;
        eq.rhs.check(&self.signature)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, op) in self.signature.ops.iter().enumerate() {
            if self.signature.ops[..i].iter().any(|o| o.name == op.name) {
                return Err(Error::Duplicate(op.name.clone()));
            }
        }
        self.equations.iter().try_for_each(|e| self.check_equation(e))?;
        if let Some(b) = &self.basis {
            if let Some(bad) = b.iter().find(|&&o| o >= self.signature.ops.len()) {
                return Err(Error::UnknownName(format!("basis element #{bad}")));
            }
        }
        Ok(())
    }

    pub fn basis(&self) -> Vec<OpId> {
        match &self.basis {
            Some(b) => b.clone(),
            None => (0..self.signature.ops.len()).collect(),
        }
    }

    pub fn arity(&self, op: OpId) -> usize {
        self.signature.arity(op)
    }

    pub fn generator(&self, op: OpId) -> Morphism {
        Morphism::generator(op, self.arity(op))
    }

    pub fn show_term(&self, t: &Term) -> String {
        self.signature.show_term(t)
    }

    pub fn show_morphism(&self, f: &Morphism) -> String {
        self.signature.show_morphism(f)
    }

    /// `u` placed at position `k` among `n - 1` plain variables: `(n-1) -> n`.
    pub fn unit_insertion(n: usize, k: usize, unit: OpId) -> Morphism {
        let mut components = Vec::with_capacity(n);
        let mut next = 0;
        for i in 0..n {
            if i == k {
                components.push(Term::Apply(unit, vec![]));
            } else {
                components.push(Term::Proj(next));
                next += 1;
            }
        }
        Morphism {
            source: n - 1,
            components,
        }
    }
}
