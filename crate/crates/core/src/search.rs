//! Backtracking search for finite operation tables subject to equations.
//!
//! Unknown cells take values in `0..domain`. Constraints are equalities of
//! expressions over fixed and unknown tables; each undecided constraint
//! watches one unassigned cell it is blocked on and is re-evaluated when that
//! cell gets a value.

use crate::term::tuple_count;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Lit(usize),
    Table(usize, Vec<Expr>),
}

#[derive(Clone, Debug)]
pub struct TableSpec {
    pub arity: usize,
    /// Known contents; `None` for a table to be found.
    pub fixed: Option<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct Problem {
    pub domain: usize,
    pub tables: Vec<TableSpec>,
    pub constraints: Vec<(Expr, Expr)>,
    /// Assignment order of unknown cells; defaults to table order.
    pub order: Option<Vec<(usize, usize)>>,
}

struct State<'a> {
    p: &'a Problem,
    values: Vec<Vec<Option<usize>>>,
    cell_of: Vec<Vec<usize>>,
    watch: Vec<Vec<usize>>,
}

impl State<'_> {
    fn eval(&self, e: &Expr) -> Result<usize, usize> {
        match e {
            Expr::Lit(v) => Ok(*v),
            Expr::Table(t, args) => {
                let mut idx = 0;
                for a in args {
                    idx = idx * self.p.domain + self.eval(a)?;
                }
                match &self.p.tables[*t].fixed {
                    Some(tab) => Ok(tab[idx]),
                    None => self.values[*t][idx].ok_or(self.cell_of[*t][idx]),
                }
            }
        }
    }

    /// `Ok(Some(cell))` if blocked, `Ok(None)` if true, `Err(())` if false.
    fn check(&self, c: usize) -> Result<Option<usize>, ()> {
        let (l, r) = &self.p.constraints[c];
        match (self.eval(l), self.eval(r)) {
            (Ok(a), Ok(b)) if a == b => Ok(None),
            (Ok(_), Ok(_)) => Err(()),
            (Err(cell), _) | (_, Err(cell)) => Ok(Some(cell)),
        }
    }
}

/// Enumerate solutions in lexicographic order of the assignment order; the
/// callback returns `false` to stop. Returns whether the search ran to the end.
pub fn solve(p: &Problem, prefix: &[usize], mut on_solution: impl FnMut(&[Vec<usize>]) -> bool) -> bool {
    let order: Vec<(usize, usize)> = match &p.order {
        Some(o) => o.clone(),
        None => p
            .tables
            .iter()
            .enumerate()
            .filter(|(_, t)| t.fixed.is_none())
            .flat_map(|(i, t)| (0..tuple_count(p.domain, t.arity)).map(move |j| (i, j)))
            .collect(),
    };
    let mut cell_of = Vec::new();
    let mut values = Vec::new();
    for t in &p.tables {
        let n = tuple_count(p.domain, t.arity);
        cell_of.push(vec![usize::MAX; n]);
        values.push(vec![None; n]);
    }
    for (k, &(t, j)) in order.iter().enumerate() {
        cell_of[t][j] = k;
    }
    let mut st = State {
        p,
        values,
        cell_of,
        watch: vec![Vec::new(); order.len()],
    };
    for c in 0..p.constraints.len() {
        match st.check(c) {
            Err(()) => return true,
            Ok(Some(cell)) => st.watch[cell].push(c),
            Ok(None) => {}
        }
    }
    if p.domain == 0 && !order.is_empty() {
        return true;
    }
    let mut stop = false;
    descend(&mut st, &order, 0, prefix, &mut on_solution, &mut stop);
    !stop
}

fn descend(
    st: &mut State,
    order: &[(usize, usize)],
    k: usize,
    prefix: &[usize],
    on_solution: &mut impl FnMut(&[Vec<usize>]) -> bool,
    stop: &mut bool,
) {
    if k == order.len() {
        let tables: Vec<Vec<usize>> = st
            .p
            .tables
            .iter()
            .zip(&st.values)
            .map(|(t, v)| match &t.fixed {
                Some(f) => f.clone(),
                None => v.iter().map(|x| x.expect("complete assignment")).collect(),
            })
            .collect();
        if !on_solution(&tables) {
            *stop = true;
        }
        return;
    }
    let (t, j) = order[k];
    let choices: Vec<usize> = match prefix.get(k) {
        Some(&v) => vec![v],
        None => (0..st.p.domain).collect(),
    };
    for v in choices {
        st.values[t][j] = Some(v);
        let watchers = std::mem::take(&mut st.watch[k]);
        let mut keep = Vec::with_capacity(watchers.len());
        let mut ok = true;
        let mut moved = Vec::new();
        for (i, &c) in watchers.iter().enumerate() {
            match st.check(c) {
                Err(()) => {
                    ok = false;
                    keep.extend_from_slice(&watchers[i..]);
                    break;
                }
                Ok(None) => keep.push(c),
                Ok(Some(cell)) => {
                    st.watch[cell].push(c);
                    moved.push((cell, c));
                }
            }
        }
        st.watch[k] = keep;
        if ok {
            descend(st, order, k + 1, prefix, on_solution, stop);
        }
        // Moved watchers stay valid: their cells are still unassigned. Bring
        // them back so the next value of this cell re-checks them first.
        for (cell, c) in moved {
            if let Some(pos) = st.watch[cell].iter().rposition(|&x| x == c) {
                st.watch[cell].remove(pos);
            }
            st.watch[k].push(c);
        }
        st.values[t][j] = None;
        if *stop {
            return;
        }
    }
}
