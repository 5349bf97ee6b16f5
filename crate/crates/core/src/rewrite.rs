//! Oriented rewriting over a presentation.
//!
//! Equations are used left to right for normalization (leftmost-innermost),
//! except permutative ones such as commutativity, whose two sides differ only
//! by a renaming of variables. Those would loop, so they are instead used in
//! both directions by a bounded breadth-first search over normal forms.

use crate::error::Result;
use crate::term::{Morphism, Term};
use crate::theory::TheoryPresentation;
use serde::Serialize;
use std::collections::{HashMap, VecDeque};

pub const DEFAULT_BUDGET: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub name: String,
    pub lhs: Term,
    pub rhs: Term,
    pub permutative: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn flip(self) -> Direction {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

/// One rewrite of component `component` at `position`, yielding `result`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub component: usize,
    pub position: Vec<usize>,
    pub rule: String,
    pub direction: Direction,
    pub result: Term,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BudgetReport {
    pub steps: usize,
    pub nodes: usize,
    pub exhausted: bool,
}

pub struct Budget {
    pub limit: usize,
    pub steps: usize,
    pub nodes: usize,
}

impl Budget {
    pub fn new(limit: usize) -> Self {
        Budget {
            limit,
            steps: 0,
            nodes: 0,
        }
    }

    fn tick(&mut self) -> bool {
        self.steps += 1;
        self.steps <= self.limit
    }

    pub fn report(&self) -> BudgetReport {
        BudgetReport {
            steps: self.steps,
            nodes: self.nodes,
            exhausted: self.steps > self.limit || self.nodes > self.limit,
        }
    }
}

pub enum Joined {
    Yes(Vec<Step>),
    No,
    OutOfBudget,
}

#[derive(Clone, Debug)]
pub struct RewriteSystem {
    pub rules: Vec<Rule>,
}

/// Bind pattern variables against `t`; repeated variables must bind equal terms.
fn matches(pattern: &Term, t: &Term, env: &mut Vec<Option<Term>>) -> bool {
    match pattern {
        Term::Proj(j) => {
            if env.len() <= *j {
                env.resize(j + 1, None);
            }
            match &env[*j] {
                Some(bound) => bound == t,
                None => {
                    env[*j] = Some(t.clone());
                    true
                }
            }
        }
        Term::Apply(op, ps) => match t {
            Term::Apply(op2, ts) if op == op2 && ps.len() == ts.len() => {
                ps.iter().zip(ts).all(|(p, x)| matches(p, x, env))
            }
            _ => false,
        },
    }
}

fn instantiate(t: &Term, env: &[Option<Term>]) -> Option<Term> {
    match t {
        Term::Proj(j) => env.get(*j).cloned().flatten(),
        Term::Apply(op, xs) => {
            let args: Option<Vec<Term>> = xs.iter().map(|x| instantiate(x, env)).collect();
            Some(Term::Apply(*op, args?))
        }
    }
}

/// Whether `b` is `a` with its variables renamed by a non-identity bijection.
fn is_permutative(a: &Term, b: &Term) -> bool {
    fn align(a: &Term, b: &Term, fwd: &mut HashMap<usize, usize>, back: &mut HashMap<usize, usize>) -> bool {
        match (a, b) {
            (Term::Proj(i), Term::Proj(j)) => {
                let ok_f = *fwd.entry(*i).or_insert(*j) == *j;
                let ok_b = *back.entry(*j).or_insert(*i) == *i;
                ok_f && ok_b
            }
            (Term::Apply(o1, xs), Term::Apply(o2, ys)) => {
                o1 == o2 && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| align(x, y, fwd, back))
            }
            _ => false,
        }
    }
    a != b && align(a, b, &mut HashMap::new(), &mut HashMap::new())
}

fn vars_of(t: &Term) -> Vec<usize> {
    let mut v = Vec::new();
    t.variables(&mut v);
    v.sort_unstable();
    v.dedup();
    v
}

impl Rule {
    fn sides(&self, dir: Direction) -> (&Term, &Term) {
        match dir {
            Direction::Forward => (&self.lhs, &self.rhs),
            Direction::Backward => (&self.rhs, &self.lhs),
        }
    }

    /// Usable in this direction without inventing terms for fresh variables.
    fn usable(&self, dir: Direction) -> bool {
        let (l, r) = self.sides(dir);
        let lv = vars_of(l);
        !matches!(l, Term::Proj(_)) && vars_of(r).iter().all(|v| lv.contains(v))
    }

    fn apply(&self, dir: Direction, t: &Term) -> Option<Term> {
        let (l, r) = self.sides(dir);
        let mut env = Vec::new();
        if matches(l, t, &mut env) {
            instantiate(r, &env)
        } else {
            None
        }
    }
}

impl RewriteSystem {
    pub fn from_theory(theory: &TheoryPresentation) -> Self {
        Self::from_equations(theory.equations.iter().map(|e| (e.name.as_str(), &e.lhs, &e.rhs)))
    }

    pub fn from_equations<'a>(eqs: impl Iterator<Item = (&'a str, &'a Morphism, &'a Morphism)>) -> Self {
        let mut rules = Vec::new();
        for (name, lhs, rhs) in eqs {
            let many = lhs.target() > 1;
            for (i, (l, r)) in lhs.components.iter().zip(&rhs.components).enumerate() {
                if l == r {
                    continue;
                }
                rules.push(Rule {
                    name: if many { format!("{name}[{}]", i + 1) } else { name.to_string() },
                    lhs: l.clone(),
                    rhs: r.clone(),
                    permutative: is_permutative(l, r),
                });
            }
        }
        RewriteSystem { rules }
    }

    fn has_permutative(&self) -> bool {
        self.rules.iter().any(|r| r.permutative)
    }

    /// Leftmost-innermost redex for the reducing rules.
    fn find_redex(&self, t: &Term, here: &mut Vec<usize>) -> Option<(Vec<usize>, usize, Term)> {
        if let Term::Apply(_, xs) = t {
            for (i, x) in xs.iter().enumerate() {
                here.push(i);
                let found = self.find_redex(x, here);
                here.pop();
                if found.is_some() {
                    return found;
                }
            }
        }
        for (ri, rule) in self.rules.iter().enumerate() {
            if rule.permutative || !rule.usable(Direction::Forward) {
                continue;
            }
            if let Some(out) = rule.apply(Direction::Forward, t) {
                return Some((here.clone(), ri, out));
            }
        }
        None
    }

    /// Normalize with the reducing rules; `None` when the budget runs out.
    pub fn normalize(&self, t: &Term, component: usize, budget: &mut Budget, trace: &mut Vec<Step>) -> Option<Term> {
        let mut cur = t.clone();
        while let Some((pos, ri, replacement)) = self.find_redex(&cur, &mut Vec::new()) {
            if !budget.tick() {
                return None;
            }
            cur = cur.replace_at(&pos, replacement);
            trace.push(Step {
                component,
                position: pos,
                rule: self.rules[ri].name.clone(),
                direction: Direction::Forward,
                result: cur.clone(),
            });
        }
        Some(cur)
    }

    /// Try to join two terms: normalize both, then search over permutative
    /// moves. The returned trace leads from `s` to `t`.
    pub fn join(&self, s: &Term, t: &Term, component: usize, budget: &mut Budget) -> Joined {
        if s == t {
            return Joined::Yes(Vec::new());
        }
        let mut trace_s = Vec::new();
        let mut trace_t = Vec::new();
        let Some(ns) = self.normalize(s, component, budget, &mut trace_s) else {
            return Joined::OutOfBudget;
        };
        let Some(nt) = self.normalize(t, component, budget, &mut trace_t) else {
            return Joined::OutOfBudget;
        };
        let finish = |mut path: Vec<Step>, trace_t: Vec<Step>| {
            path.extend(reverse_steps(t, &trace_t));
            path
        };
        if ns == nt {
            return Joined::Yes(finish(trace_s, trace_t));
        }
        if !self.has_permutative() {
            return Joined::No;
        }
        // Breadth-first search; each edge is a permutative move plus renormalization.
        let mut parent: HashMap<Term, Option<(Term, Vec<Step>)>> = HashMap::new();
        parent.insert(ns.clone(), None);
        let mut queue = VecDeque::from([ns.clone()]);
        while let Some(u) = queue.pop_front() {
            for pos in u.positions() {
                let sub = u.at(&pos).expect("position from positions()");
                for rule in self.rules.iter().filter(|r| r.permutative) {
                    for dir in [Direction::Forward, Direction::Backward] {
                        let Some(out) = rule.apply(dir, sub) else { continue };
                        if !budget.tick() {
                            return Joined::OutOfBudget;
                        }
                        let moved = u.replace_at(&pos, out);
                        let mut steps = vec![Step {
                            component,
                            position: pos.clone(),
                            rule: rule.name.clone(),
                            direction: dir,
                            result: moved.clone(),
                        }];
                        let Some(v) = self.normalize(&moved, component, budget, &mut steps) else {
                            return Joined::OutOfBudget;
                        };
                        if parent.contains_key(&v) {
                            continue;
                        }
                        budget.nodes += 1;
                        if budget.nodes > budget.limit {
                            return Joined::OutOfBudget;
                        }
                        parent.insert(v.clone(), Some((u.clone(), steps)));
                        if v == nt {
                            let mut segments = Vec::new();
                            let mut cur = v;
                            while let Some(Some((prev, steps))) = parent.get(&cur) {
                                segments.push(steps.clone());
                                cur = prev.clone();
                            }
                            let mut path = trace_s;
                            for seg in segments.into_iter().rev() {
                                path.extend(seg);
                            }
                            return Joined::Yes(finish(path, trace_t));
                        }
                        queue.push_back(v);
                    }
                }
            }
        }
        Joined::No
    }

    /// Check one step: the two terms agree off `position` and the subterms there
    /// are an instance of the rule in the stated direction.
    pub fn step_is_valid(&self, before: &Term, step: &Step) -> bool {
        let Some(rule) = self.rules.iter().find(|r| r.name == step.rule) else {
            return false;
        };
        let (l, r) = rule.sides(step.direction);
        let (Some(a), Some(b)) = (before.at(&step.position), step.result.at(&step.position)) else {
            return false;
        };
        let mut env = Vec::new();
        if !matches(l, a, &mut env) || !matches(r, b, &mut env) {
            return false;
        }
        before.replace_at(&step.position, b.clone()) == step.result
    }

    /// Replay a trace over the components of `start`, returning the final map.
    pub fn replay(&self, start: &Morphism, steps: &[Step]) -> Result<Morphism> {
        let mut cur = start.clone();
        for s in steps {
            let Some(before) = cur.components.get(s.component) else {
                return Err(crate::error::Error::Malformed(format!("step on missing component {}", s.component)));
            };
            if !self.step_is_valid(before, s) {
                return Err(crate::error::Error::Malformed(format!(
                    "step with rule {} at {:?} does not replay",
                    s.rule, s.position
                )));
            }
            cur.components[s.component] = s.result.clone();
        }
        Ok(cur)
    }
}

/// Reverse a trace that led from `start` to its last result.
fn reverse_steps(start: &Term, steps: &[Step]) -> Vec<Step> {
    let mut terms = vec![start.clone()];
    for s in steps {
        terms.push(s.result.clone());
    }
    steps
        .iter()
        .enumerate()
        .rev()
        .map(|(i, s)| Step {
            component: s.component,
            position: s.position.clone(),
            rule: s.rule.clone(),
            direction: s.direction.flip(),
            result: terms[i].clone(),
        })
        .collect()
}
