use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::ControlFlow;

use thiserror::Error;

use super::domain::IntervalSet;
use crate::formula::{ClpLit, CmpOp};
use crate::term::{Term, Var};

/// Bound of the default domain of a variable that has no finite range.
pub const BIG: i64 = i32::MAX as i64;

/// Propagation passes per `add` before giving up on reaching a fixpoint.
const MAX_PASSES: usize = 10_000;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum StoreError {
    #[error("inconsistent constraint store")]
    Inconsistent,
    #[error("non-linear term `{0}` in constraint")]
    NonLinear(Term),
}

/// `sum(coeff * var) + constant`, coefficients non-zero, sorted by variable.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Linear {
    coeffs: Vec<(Var, i128)>,
    constant: i128,
}

impl Linear {
    fn constant(c: i128) -> Self {
        Linear { coeffs: Vec::new(), constant: c }
    }

    fn scale(mut self, k: i128) -> Self {
        if k == 0 {
            return Linear::constant(0);
        }
        for (_, a) in &mut self.coeffs {
            *a *= k;
        }
        self.constant *= k;
        self
    }

    fn add(self, other: Linear) -> Self {
        let mut map: BTreeMap<Var, i128> = self.coeffs.into_iter().collect();
        for (v, a) in other.coeffs {
            *map.entry(v).or_insert(0) += a;
        }
        Linear { coeffs: map.into_iter().filter(|(_, a)| *a != 0).collect(), constant: self.constant + other.constant }
    }

    fn of(t: &Term) -> Result<Linear, StoreError> {
        match t {
            Term::Var(v) => Ok(Linear { coeffs: vec![(v.clone(), 1)], constant: 0 }),
            Term::Int(n) => Ok(Linear::constant(*n as i128)),
            Term::Compound(f, args) if t.is_arith_op() => {
                let a = Linear::of(&args[0])?;
                if args.len() == 1 {
                    return Ok(a.scale(-1));
                }
                let b = Linear::of(&args[1])?;
                match &**f {
                    "+" => Ok(a.add(b)),
                    "-" => Ok(a.add(b.scale(-1))),
                    _ if a.coeffs.is_empty() => Ok(b.scale(a.constant)),
                    _ if b.coeffs.is_empty() => Ok(a.scale(b.constant)),
                    _ => Err(StoreError::NonLinear(t.clone())),
                }
            }
            // A symbolic term never denotes an integer.
            _ => Err(StoreError::Inconsistent),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Rel {
    Le,
    Eq,
    Ne,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Constraint {
    lin: Linear,
    rel: Rel,
}

fn constraints_of(lit: &ClpLit) -> Result<Vec<Constraint>, StoreError> {
    match lit {
        ClpLit::In { var, lo, hi } => {
            let x = Linear::of(var)?;
            let lo = Linear::of(lo)?;
            let hi = Linear::of(hi)?;
            Ok(vec![
                Constraint { lin: lo.add(x.clone().scale(-1)), rel: Rel::Le },
                Constraint { lin: x.add(hi.scale(-1)), rel: Rel::Le },
            ])
        }
        ClpLit::Cmp { lhs, op, rhs } => {
            let l = Linear::of(lhs)?;
            let r = Linear::of(rhs)?;
            let diff = l.clone().add(r.clone().scale(-1));
            Ok(vec![match op {
                CmpOp::Lt => Constraint { lin: diff.add(Linear::constant(1)), rel: Rel::Le },
                CmpOp::Le => Constraint { lin: diff, rel: Rel::Le },
                CmpOp::Gt => Constraint { lin: r.add(l.scale(-1)).add(Linear::constant(1)), rel: Rel::Le },
                CmpOp::Ge => Constraint { lin: r.add(l.scale(-1)), rel: Rel::Le },
                CmpOp::Eq => Constraint { lin: diff, rel: Rel::Eq },
                CmpOp::Ne => Constraint { lin: diff, rel: Rel::Ne },
            }])
        }
    }
}

fn div_floor(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn div_ceil(a: i128, b: i128) -> i128 {
    -div_floor(-a, b)
}

fn clamp_i64(v: i128) -> i64 {
    v.clamp(i64::MIN as i128, i64::MAX as i128) as i64
}

/// A conjunction of linear integer constraints with a domain per variable.
#[derive(Clone, Debug, Default)]
pub struct Store {
    domains: BTreeMap<Var, IntervalSet>,
    constraints: Vec<Constraint>,
    literals: Vec<ClpLit>,
}

impl Store {
    pub fn new() -> Self {
        Self::default()
    }

    /// Asserts `lit` and propagates to a fixpoint.
    pub fn add(&mut self, lit: &ClpLit) -> Result<(), StoreError> {
        let cs = constraints_of(lit)?;
        for c in &cs {
            for (v, _) in &c.lin.coeffs {
                self.domains.entry(v.clone()).or_insert_with(|| IntervalSet::range(-BIG, BIG));
            }
        }
        self.constraints.extend(cs);
        self.literals.push(lit.clone());
        self.propagate()
    }

    pub fn literals(&self) -> &[ClpLit] {
        &self.literals
    }

    pub fn contains_var(&self, v: &Var) -> bool {
        self.domains.contains_key(v)
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.domains.keys()
    }

    pub fn domain(&self, v: &Var) -> IntervalSet {
        self.domains.get(v).cloned().unwrap_or_else(|| IntervalSet::range(-BIG, BIG))
    }

    pub fn value(&self, v: &Var) -> Option<i64> {
        self.domains.get(v).and_then(IntervalSet::value)
    }

    /// Whether the domain of `v` is strictly inside the default range.
    pub fn is_bounded(&self, v: &Var) -> bool {
        match self.domains.get(v) {
            Some(d) => d.min().is_none_or(|m| m > -BIG) && d.max().is_none_or(|m| m < BIG),
            None => false,
        }
    }

    /// Whether `assignment` (over all constrained variables) satisfies every
    /// constraint and domain.
    pub fn satisfied_by(&self, assignment: &BTreeMap<Var, i64>) -> bool {
        let value = |c: &Constraint| -> Option<i128> {
            let mut sum = c.lin.constant;
            for (v, a) in &c.lin.coeffs {
                sum += a * *assignment.get(v)? as i128;
            }
            Some(sum)
        };
        self.constraints.iter().all(|c| match (value(c), c.rel) {
            (Some(s), Rel::Le) => s <= 0,
            (Some(s), Rel::Eq) => s == 0,
            (Some(s), Rel::Ne) => s != 0,
            (None, _) => false,
        })
    }

    pub fn summary(&self) -> String {
        format!("{} constraints over {} vars", self.literals.len(), self.domains.len())
    }

    fn bounds(&self, v: &Var) -> (i128, i128) {
        let d = &self.domains[v];
        (d.min().unwrap_or(0) as i128, d.max().unwrap_or(-1) as i128)
    }

    fn restrict(&mut self, v: &Var, lo: i128, hi: i128) -> Result<bool, StoreError> {
        let d = self.domains.get_mut(v).expect("registered variable");
        let changed = d.clamp(clamp_i64(lo), clamp_i64(hi));
        if d.is_empty() {
            return Err(StoreError::Inconsistent);
        }
        Ok(changed)
    }

    /// `lin <= 0`, bounds consistency.
    fn propagate_le(&mut self, lin: &Linear) -> Result<bool, StoreError> {
        let mins: Vec<i128> = lin
            .coeffs
            .iter()
            .map(|(v, a)| {
                let (lo, hi) = self.bounds(v);
                if *a > 0 {
                    a * lo
                } else {
                    a * hi
                }
            })
            .collect();
        let total: i128 = mins.iter().sum::<i128>() + lin.constant;
        if total > 0 {
            return Err(StoreError::Inconsistent);
        }
        let mut changed = false;
        for (k, (v, a)) in lin.coeffs.iter().enumerate() {
            let slack = -(total - mins[k]);
            changed |= if *a > 0 {
                self.restrict(v, i128::MIN, div_floor(slack, *a))?
            } else {
                self.restrict(v, div_ceil(slack, *a), i128::MAX)?
            };
        }
        Ok(changed)
    }

    fn propagate_ne(&mut self, lin: &Linear) -> Result<bool, StoreError> {
        let mut rest = lin.constant;
        let mut open = None;
        for (v, a) in &lin.coeffs {
            match self.domains[v].value() {
                Some(x) => rest += a * x as i128,
                None if open.is_none() => open = Some((v.clone(), *a)),
                None => return Ok(false),
            }
        }
        match open {
            None if rest == 0 => Err(StoreError::Inconsistent),
            None => Ok(false),
            Some((v, a)) => {
                if (-rest) % a != 0 {
                    return Ok(false);
                }
                let x = (-rest) / a;
                if x < i64::MIN as i128 || x > i64::MAX as i128 {
                    return Ok(false);
                }
                let d = self.domains.get_mut(&v).unwrap();
                let changed = d.remove(x as i64);
                if d.is_empty() {
                    return Err(StoreError::Inconsistent);
                }
                Ok(changed)
            }
        }
    }

    fn propagate(&mut self) -> Result<(), StoreError> {
        let constraints = std::mem::take(&mut self.constraints);
        let result = self.propagate_all(&constraints);
        self.constraints = constraints;
        result
    }

    fn propagate_all(&mut self, constraints: &[Constraint]) -> Result<(), StoreError> {
        for _ in 0..MAX_PASSES {
            let mut changed = false;
            for c in constraints {
                changed |= match c.rel {
                    Rel::Le => self.propagate_le(&c.lin)?,
                    Rel::Eq => self.propagate_le(&c.lin)? | self.propagate_le(&c.lin.clone().scale(-1))?,
                    Rel::Ne => self.propagate_ne(&c.lin)?,
                };
            }
            if !changed {
                break;
            }
        }
        Ok(())
    }

    fn fix(&self, v: &Var, x: i64) -> Option<Store> {
        let mut next = self.clone();
        next.domains.insert(v.clone(), IntervalSet::singleton(x));
        next.propagate().ok()?;
        Some(next)
    }

    /// Enumerates the ground assignments of `vars` (first-fail, ascending
    /// values) that extend to a solution of the whole store. Variables
    /// without a finite domain are left out of the assignment; constraints on
    /// unbounded variables are only checked by propagation.
    pub fn label<F>(&self, vars: &[Var], f: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&BTreeMap<Var, i64>) -> ControlFlow<()>,
    {
        let mut vars: Vec<Var> = vars.iter().filter(|v| self.is_bounded(v)).cloned().collect();
        vars.sort();
        vars.dedup();
        let others: Vec<Var> = self.domains.keys().filter(|v| self.is_bounded(v) && !vars.contains(v)).cloned().collect();
        self.label_rec(&vars, &others, f)
    }

    fn label_rec<F>(&self, vars: &[Var], others: &[Var], f: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&BTreeMap<Var, i64>) -> ControlFlow<()>,
    {
        let pick = vars.iter().filter(|v| self.domains[*v].value().is_none()).min_by_key(|v| self.domains[*v].size());
        match pick {
            Some(v) => {
                for x in self.domains[v].iter() {
                    if let Some(next) = self.fix(v, x) {
                        next.label_rec(vars, others, f)?;
                    }
                }
                ControlFlow::Continue(())
            }
            None => {
                if self.exists(others) {
                    let assignment = vars.iter().map(|v| (v.clone(), self.domains[v].value().unwrap())).collect();
                    f(&assignment)
                } else {
                    ControlFlow::Continue(())
                }
            }
        }
    }

    fn exists(&self, vars: &[Var]) -> bool {
        let pick = vars.iter().filter(|v| self.domains[*v].value().is_none()).min_by_key(|v| self.domains[*v].size());
        match pick {
            Some(v) => self.domains[v].iter().any(|x| self.fix(v, x).is_some_and(|s| s.exists(vars))),
            None => true,
        }
    }

    /// The first labeling of `vars`, if any.
    pub fn first_solution(&self, vars: &[Var]) -> Option<BTreeMap<Var, i64>> {
        let mut out = None;
        let _ = self.label(vars, &mut |a| {
            out = Some(a.clone());
            ControlFlow::Break(())
        });
        out
    }
}

impl fmt::Display for Store {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.literals.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// The complement of a constraint literal. A range complement is a
/// two-way branch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Negation {
    Single(ClpLit),
    Branch(ClpLit, ClpLit),
}

pub fn negate(c: &ClpLit) -> Negation {
    match c {
        ClpLit::Cmp { lhs, op, rhs } => Negation::Single(ClpLit::cmp(lhs.clone(), op.complement(), rhs.clone())),
        ClpLit::In { var, lo, hi } => Negation::Branch(
            ClpLit::cmp(var.clone(), CmpOp::Lt, lo.clone()),
            ClpLit::cmp(var.clone(), CmpOp::Gt, hi.clone()),
        ),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Enumeration {
    /// The variables (sorted) and every solution tuple, in ascending order.
    Finite(Vec<Var>, Vec<Vec<i64>>),
    Infinite,
}

/// The complete solution set of a conjunction of literals taken alone.
pub fn enumerate(lits: &[ClpLit]) -> Result<Enumeration, StoreError> {
    let mut vars = BTreeSet::new();
    for l in lits {
        l.collect_vars(&mut vars);
    }
    let vars: Vec<Var> = vars.into_iter().collect();
    let mut store = Store::new();
    for l in lits {
        match store.add(l) {
            Ok(()) => {}
            Err(StoreError::Inconsistent) => return Ok(Enumeration::Finite(vars, Vec::new())),
            Err(e) => return Err(e),
        }
    }
    if !vars.iter().all(|v| store.is_bounded(v)) {
        return Ok(Enumeration::Infinite);
    }
    let mut tuples = Vec::new();
    let _ = store.label(&vars, &mut |a| {
        tuples.push(vars.iter().map(|v| a[v]).collect());
        ControlFlow::Continue(())
    });
    tuples.sort();
    Ok(Enumeration::Finite(vars, tuples))
}
