//! Formulas of ID-logic rule bodies, axioms and queries.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::term::{Substitution, Symbol, Term, Var};

/// A predicate identified by name and arity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PredId {
    pub name: Symbol,
    pub arity: usize,
}

impl PredId {
    pub fn new(name: &str, arity: usize) -> Self {
        PredId { name: Arc::from(name), arity }
    }
}

impl fmt::Display for PredId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub pred: Symbol,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(pred: &str, args: Vec<Term>) -> Self {
        Atom { pred: Arc::from(pred), args }
    }

    pub fn pred_id(&self) -> PredId {
        PredId { name: self.pred.clone(), arity: self.args.len() }
    }

    pub fn apply(&self, s: &Substitution) -> Atom {
        Atom { pred: self.pred.clone(), args: self.args.iter().map(|a| a.apply(s)).collect() }
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        self.args.iter().for_each(|a| a.collect_vars(out));
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pred)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", a)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Lt,
    Le,
    Eq,
    Ne,
    Ge,
    Gt,
}

impl CmpOp {
    pub fn complement(self) -> CmpOp {
        match self {
            CmpOp::Lt => CmpOp::Ge,
            CmpOp::Le => CmpOp::Gt,
            CmpOp::Eq => CmpOp::Ne,
            CmpOp::Ne => CmpOp::Eq,
            CmpOp::Ge => CmpOp::Lt,
            CmpOp::Gt => CmpOp::Le,
        }
    }

    pub fn holds(self, a: i64, b: i64) -> bool {
        match self {
            CmpOp::Lt => a < b,
            CmpOp::Le => a <= b,
            CmpOp::Eq => a == b,
            CmpOp::Ne => a != b,
            CmpOp::Ge => a >= b,
            CmpOp::Gt => a > b,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "=<",
            CmpOp::Eq => "=",
            CmpOp::Ne => "\\=",
            CmpOp::Ge => ">=",
            CmpOp::Gt => ">",
        }
    }
}

/// A finite-domain constraint literal over integer expressions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ClpLit {
    /// `X in L..U`
    In { var: Term, lo: Term, hi: Term },
    Cmp { lhs: Term, op: CmpOp, rhs: Term },
}

impl ClpLit {
    pub fn cmp(lhs: Term, op: CmpOp, rhs: Term) -> Self {
        ClpLit::Cmp { lhs, op, rhs }
    }

    pub fn apply(&self, s: &Substitution) -> ClpLit {
        match self {
            ClpLit::In { var, lo, hi } => ClpLit::In { var: var.apply(s), lo: lo.apply(s), hi: hi.apply(s) },
            ClpLit::Cmp { lhs, op, rhs } => ClpLit::Cmp { lhs: lhs.apply(s), op: *op, rhs: rhs.apply(s) },
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            ClpLit::In { var, lo, hi } => {
                var.collect_vars(out);
                lo.collect_vars(out);
                hi.collect_vars(out);
            }
            ClpLit::Cmp { lhs, rhs, .. } => {
                lhs.collect_vars(out);
                rhs.collect_vars(out);
            }
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn terms(&self) -> Vec<&Term> {
        match self {
            ClpLit::In { var, lo, hi } => vec![var, lo, hi],
            ClpLit::Cmp { lhs, rhs, .. } => vec![lhs, rhs],
        }
    }

    /// Truth value when every term is a ground integer expression.
    pub fn eval_ground(&self) -> Option<bool> {
        match self {
            ClpLit::In { var, lo, hi } => {
                let (x, l, u) = (var.eval_int()?, lo.eval_int()?, hi.eval_int()?);
                Some(l <= x && x <= u)
            }
            ClpLit::Cmp { lhs, op, rhs } => Some(op.holds(lhs.eval_int()?, rhs.eval_int()?)),
        }
    }
}

impl fmt::Display for ClpLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClpLit::In { var, lo, hi } => write!(f, "{} in {}..{}", var, lo, hi),
            ClpLit::Cmp { lhs, op, rhs } => write!(f, "{} {} {}", lhs, op.symbol(), rhs),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Eq(Term, Term),
    Clp(ClpLit),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Exists(Vec<Var>, Box<Formula>),
    Forall(Vec<Var>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

impl Formula {
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn exists(vars: Vec<Var>, body: Formula) -> Formula {
        if vars.is_empty() {
            body
        } else {
            Formula::Exists(vars, Box::new(body))
        }
    }

    pub fn forall(vars: Vec<Var>, body: Formula) -> Formula {
        if vars.is_empty() {
            body
        } else {
            Formula::Forall(vars, Box::new(body))
        }
    }

    /// Right-nested conjunction; `true` when empty.
    pub fn conj(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut items: Vec<Formula> = items.into_iter().collect();
        let mut acc = match items.pop() {
            Some(f) => f,
            None => return Formula::True,
        };
        while let Some(f) = items.pop() {
            acc = Formula::and(f, acc);
        }
        acc
    }

    /// Right-nested disjunction; `false` when empty.
    pub fn disj(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut items: Vec<Formula> = items.into_iter().collect();
        let mut acc = match items.pop() {
            Some(f) => f,
            None => return Formula::False,
        };
        while let Some(f) = items.pop() {
            acc = Formula::or(f, acc);
        }
        acc
    }

    /// Conjunction of the equations of a solved-form substitution.
    pub fn solved_form(s: &Substitution) -> Formula {
        Formula::conj(s.solved_form().into_iter().map(|(a, b)| Formula::Eq(a, b)))
    }

    /// Flattens nested conjunctions into `out`.
    pub fn flatten_and(self, out: &mut Vec<Formula>) {
        match self {
            Formula::And(a, b) => {
                a.flatten_and(out);
                b.flatten_and(out);
            }
            Formula::True => {}
            f => out.push(f),
        }
    }

    pub fn conjuncts(self) -> Vec<Formula> {
        let mut out = Vec::new();
        self.flatten_and(&mut out);
        out
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out, &mut Vec::new());
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<Var>, bound: &mut Vec<Var>) {
        let add_term = |t: &Term, out: &mut BTreeSet<Var>| {
            let mut vs = BTreeSet::new();
            t.collect_vars(&mut vs);
            out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => a.args.iter().for_each(|t| add_term(t, out)),
            Formula::Eq(s, t) => {
                add_term(s, out);
                add_term(t, out);
            }
            Formula::Clp(c) => c.terms().into_iter().for_each(|t| add_term(t, out)),
            Formula::Not(f) => f.collect_free(out, bound),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(out, bound);
                b.collect_free(out, bound);
            }
            Formula::Exists(vs, f) | Formula::Forall(vs, f) => {
                let n = bound.len();
                bound.extend(vs.iter().cloned());
                f.collect_free(out, bound);
                bound.truncate(n);
            }
        }
    }

    /// All variables, bound or free.
    pub fn all_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => a.collect_vars(out),
            Formula::Eq(s, t) => {
                s.collect_vars(out);
                t.collect_vars(out);
            }
            Formula::Clp(c) => c.collect_vars(out),
            Formula::Not(f) => f.all_vars(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.all_vars(out);
                b.all_vars(out);
            }
            Formula::Exists(vs, f) | Formula::Forall(vs, f) => {
                out.extend(vs.iter().cloned());
                f.all_vars(out);
            }
        }
    }

    /// Applies `s` to free occurrences. Bound variables are unique, so no
    /// capture can occur as long as `s` does not mention them.
    pub fn apply(&self, s: &Substitution) -> Formula {
        if s.is_empty() {
            return self.clone();
        }
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Atom(a) => Formula::Atom(a.apply(s)),
            Formula::Eq(a, b) => Formula::Eq(a.apply(s), b.apply(s)),
            Formula::Clp(c) => Formula::Clp(c.apply(s)),
            Formula::Not(f) => Formula::not(f.apply(s)),
            Formula::And(a, b) => Formula::and(a.apply(s), b.apply(s)),
            Formula::Or(a, b) => Formula::or(a.apply(s), b.apply(s)),
            Formula::Implies(a, b) => Formula::implies(a.apply(s), b.apply(s)),
            Formula::Exists(vs, f) => {
                let inner = if vs.iter().any(|v| s.get(v).is_some()) { s.without(vs) } else { s.clone() };
                Formula::Exists(vs.clone(), Box::new(f.apply(&inner)))
            }
            Formula::Forall(vs, f) => {
                let inner = if vs.iter().any(|v| s.get(v).is_some()) { s.without(vs) } else { s.clone() };
                Formula::Forall(vs.clone(), Box::new(f.apply(&inner)))
            }
        }
    }

    /// Renames every bound variable to a globally fresh one; free variables
    /// are untouched.
    pub fn rename_fresh(&self) -> Formula {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) | Formula::Eq(..) | Formula::Clp(_) => self.clone(),
            Formula::Not(f) => Formula::not(f.rename_fresh()),
            Formula::And(a, b) => Formula::and(a.rename_fresh(), b.rename_fresh()),
            Formula::Or(a, b) => Formula::or(a.rename_fresh(), b.rename_fresh()),
            Formula::Implies(a, b) => Formula::implies(a.rename_fresh(), b.rename_fresh()),
            Formula::Exists(vs, f) | Formula::Forall(vs, f) => {
                let (fresh, s) = fresh_copies(vs);
                let body = Box::new(f.apply(&s).rename_fresh());
                if matches!(self, Formula::Exists(..)) {
                    Formula::Exists(fresh, body)
                } else {
                    Formula::Forall(fresh, body)
                }
            }
        }
    }

    /// Structural equality up to renaming of bound variables.
    pub fn alpha_eq(&self, other: &Formula) -> bool {
        alpha_eq(self, other, &mut HashMap::new())
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::True | Formula::False | Formula::Atom(_) | Formula::Eq(..) | Formula::Clp(_))
    }
}

/// Fresh copies of `vars` plus the renaming substitution.
pub fn fresh_copies(vars: &[Var]) -> (Vec<Var>, Substitution) {
    let fresh: Vec<Var> = vars.iter().map(Var::renamed).collect();
    let s = Substitution::from_bindings(vars.iter().cloned().zip(fresh.iter().cloned().map(Term::Var)));
    (fresh, s)
}

fn alpha_eq(a: &Formula, b: &Formula, map: &mut HashMap<Var, Var>) -> bool {
    let term_eq = |x: &Term, y: &Term, map: &HashMap<Var, Var>| term_alpha_eq(x, y, map);
    match (a, b) {
        (Formula::True, Formula::True) | (Formula::False, Formula::False) => true,
        (Formula::Atom(x), Formula::Atom(y)) => {
            x.pred == y.pred
                && x.args.len() == y.args.len()
                && x.args.iter().zip(&y.args).all(|(s, t)| term_eq(s, t, map))
        }
        (Formula::Eq(s1, t1), Formula::Eq(s2, t2)) => term_eq(s1, s2, map) && term_eq(t1, t2, map),
        (Formula::Clp(c1), Formula::Clp(c2)) => match (c1, c2) {
            (ClpLit::In { var: v1, lo: l1, hi: h1 }, ClpLit::In { var: v2, lo: l2, hi: h2 }) => {
                term_eq(v1, v2, map) && term_eq(l1, l2, map) && term_eq(h1, h2, map)
            }
            (ClpLit::Cmp { lhs: a1, op: o1, rhs: b1 }, ClpLit::Cmp { lhs: a2, op: o2, rhs: b2 }) => {
                o1 == o2 && term_eq(a1, a2, map) && term_eq(b1, b2, map)
            }
            _ => false,
        },
        (Formula::Not(x), Formula::Not(y)) => alpha_eq(x, y, map),
        (Formula::And(a1, b1), Formula::And(a2, b2))
        | (Formula::Or(a1, b1), Formula::Or(a2, b2))
        | (Formula::Implies(a1, b1), Formula::Implies(a2, b2)) => alpha_eq(a1, a2, map) && alpha_eq(b1, b2, map),
        (Formula::Exists(v1, f1), Formula::Exists(v2, f2)) | (Formula::Forall(v1, f1), Formula::Forall(v2, f2)) => {
            if v1.len() != v2.len() || std::mem::discriminant(a) != std::mem::discriminant(b) {
                return false;
            }
            let saved: Vec<(Var, Option<Var>)> =
                v1.iter().zip(v2).map(|(x, y)| (x.clone(), map.insert(x.clone(), y.clone()))).collect();
            let ok = alpha_eq(f1, f2, map);
            for (x, old) in saved {
                match old {
                    Some(o) => map.insert(x, o),
                    None => map.remove(&x),
                };
            }
            ok
        }
        _ => false,
    }
}

fn term_alpha_eq(x: &Term, y: &Term, map: &HashMap<Var, Var>) -> bool {
    match (x, y) {
        (Term::Var(a), Term::Var(b)) => match map.get(a) {
            Some(m) => m == b,
            None => a == b && !map.values().any(|v| v == b),
        },
        (Term::Compound(f, xs), Term::Compound(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(s, t)| term_alpha_eq(s, t, map))
        }
        _ => x == y,
    }
}

// Printing. Quantifiers extend to the right as far as possible, so they are
// parenthesized whenever they occur as an operand.
const LVL_IMPL: u8 = 1;
const LVL_OR: u8 = 2;
const LVL_AND: u8 = 3;
const LVL_UNARY: u8 = 4;

fn level(f: &Formula) -> u8 {
    match f {
        Formula::Implies(..) => LVL_IMPL,
        Formula::Or(..) => LVL_OR,
        Formula::And(..) => LVL_AND,
        Formula::Exists(..) | Formula::Forall(..) => 0,
        _ => LVL_UNARY,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, x: &Formula, min: u8) -> fmt::Result {
    if level(x) < min {
        f.write_str("(")?;
        write_formula(f, x)?;
        f.write_str(")")
    } else {
        write_formula(f, x)
    }
}

fn write_vars(f: &mut fmt::Formatter<'_>, vs: &[Var]) -> fmt::Result {
    for (i, v) in vs.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{}", v)?;
    }
    Ok(())
}

fn write_formula(f: &mut fmt::Formatter<'_>, x: &Formula) -> fmt::Result {
    match x {
        Formula::True => f.write_str("true"),
        Formula::False => f.write_str("false"),
        Formula::Atom(a) => write!(f, "{}", a),
        Formula::Eq(s, t) => write!(f, "{} = {}", s, t),
        Formula::Clp(c) => write!(f, "{}", c),
        Formula::Not(inner) => match &**inner {
            Formula::Eq(s, t) => write!(f, "{} \\= {}", s, t),
            other => {
                f.write_str("not ")?;
                write_at(f, other, LVL_UNARY)
            }
        },
        Formula::And(a, b) => {
            write_at(f, a, LVL_UNARY)?;
            f.write_str(", ")?;
            write_at(f, b, LVL_AND)
        }
        Formula::Or(a, b) => {
            write_at(f, a, LVL_AND)?;
            f.write_str("; ")?;
            write_at(f, b, LVL_OR)
        }
        Formula::Implies(a, b) => {
            write_at(f, a, LVL_OR)?;
            f.write_str(" => ")?;
            write_at(f, b, LVL_IMPL)
        }
        Formula::Exists(vs, body) | Formula::Forall(vs, body) => {
            f.write_str(if matches!(x, Formula::Exists(..)) { "exists(" } else { "forall(" })?;
            write_vars(f, vs)?;
            f.write_str(")$ ")?;
            match &**body {
                Formula::Implies(a, b) => {
                    write_at(f, a, LVL_AND)?;
                    f.write_str(" => ")?;
                    write_at(f, b, LVL_IMPL)
                }
                other => write_at(f, other, LVL_AND),
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self)
    }
}
