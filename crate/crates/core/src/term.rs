//! First-order terms, substitutions and most-general unification.
//!
//! Variables carry a process-wide unique identifier, so renaming a formula
//! apart never needs to look at the variables already in use.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::Arc;

/// Interned-ish symbol used for predicate, functor and constant names.
pub type Symbol = Arc<str>;

static NEXT_VAR: AtomicU32 = AtomicU32::new(1);

/// A logic variable. Equality, ordering and hashing use the identifier only;
/// the name is kept for printing.
#[derive(Clone)]
pub struct Var {
    id: u32,
    base: Symbol,
    display: Symbol,
}

impl Var {
    /// A variable that prints exactly as `name` (used by the parser).
    pub fn named(name: &str) -> Var {
        let name: Symbol = Arc::from(name);
        Var { id: NEXT_VAR.fetch_add(1, Ordering::Relaxed), base: name.clone(), display: name }
    }

    /// A fresh variable derived from `base`; prints as `Base_<id>`.
    pub fn fresh(base: &str) -> Var {
        let id = NEXT_VAR.fetch_add(1, Ordering::Relaxed);
        let base: Symbol = Arc::from(base);
        let display: Symbol = Arc::from(format!("{}_{}", base, id).as_str());
        Var { id, base, display }
    }

    /// A fresh variable with the same base name as `self`.
    pub fn renamed(&self) -> Var {
        Var::fresh(&self.base)
    }

    pub fn id(&self) -> u32 {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.display
    }

    pub fn base_name(&self) -> &str {
        &self.base
    }
}

impl PartialEq for Var {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}
impl Eq for Var {}
impl Hash for Var {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.id.hash(state)
    }
}
impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Var {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.id.cmp(&other.id)
    }
}
impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.display, self.id)
    }
}
impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display)
    }
}

/// A first-order term. Zero-arity symbols are always [`Term::Atom`];
/// `Compound` has at least one argument.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Var),
    Int(i64),
    Atom(Symbol),
    Compound(Symbol, Vec<Term>),
}

impl Term {
    pub fn atom(name: &str) -> Term {
        Term::Atom(Arc::from(name))
    }

    /// Builds `f(args)`, or the atom `f` when `args` is empty.
    pub fn compound(functor: &str, args: Vec<Term>) -> Term {
        if args.is_empty() {
            Term::atom(functor)
        } else {
            Term::Compound(Arc::from(functor), args)
        }
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self {
            Term::Var(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Int(_) | Term::Atom(_) => true,
            Term::Compound(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn occurs(&self, v: &Var) -> bool {
        match self {
            Term::Var(w) => w == v,
            Term::Int(_) | Term::Atom(_) => false,
            Term::Compound(_, args) => args.iter().any(|a| a.occurs(v)),
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Int(_) | Term::Atom(_) => {}
            Term::Compound(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    /// `+`, `-`, `*` compounds (binary, or unary minus).
    pub fn is_arith_op(&self) -> bool {
        match self {
            Term::Compound(f, args) => matches!((&**f, args.len()), ("+", 2) | ("-", 2) | ("*", 2) | ("-", 1)),
            _ => false,
        }
    }

    /// Reduces a ground arithmetic term to an integer, if it is one.
    pub fn eval_int(&self) -> Option<i64> {
        match self {
            Term::Int(n) => Some(*n),
            Term::Compound(f, args) if self.is_arith_op() => {
                let a = args[0].eval_int()?;
                if args.len() == 1 {
                    return a.checked_neg();
                }
                let b = args[1].eval_int()?;
                match &**f {
                    "+" => a.checked_add(b),
                    "-" => a.checked_sub(b),
                    _ => a.checked_mul(b),
                }
            }
            _ => None,
        }
    }

    /// Replaces every ground arithmetic subterm by its value.
    pub fn simplify_arith(&self) -> Term {
        match self {
            Term::Compound(f, args) => {
                if let Some(n) = self.eval_int() {
                    return Term::Int(n);
                }
                Term::Compound(f.clone(), args.iter().map(Term::simplify_arith).collect())
            }
            t => t.clone(),
        }
    }

    pub fn apply(&self, s: &Substitution) -> Term {
        if s.is_empty() {
            return self.clone();
        }
        match self {
            Term::Var(v) => match s.get(v) {
                Some(t) => t.clone(),
                None => self.clone(),
            },
            Term::Int(_) | Term::Atom(_) => self.clone(),
            Term::Compound(f, args) => {
                Term::Compound(f.clone(), args.iter().map(|a| a.apply(s)).collect())
            }
        }
    }
}

fn write_arith_operand(f: &mut fmt::Formatter<'_>, t: &Term, parent_prec: u8, right: bool) -> fmt::Result {
    let prec = arith_prec(t);
    let needs = prec != 0 && (prec < parent_prec || (right && prec == parent_prec));
    if needs {
        write!(f, "({})", t)
    } else {
        write!(f, "{}", t)
    }
}

fn arith_prec(t: &Term) -> u8 {
    match t {
        Term::Compound(op, args) if t.is_arith_op() => match (&**op, args.len()) {
            ("-", 1) => 3,
            ("*", _) => 2,
            _ => 1,
        },
        _ => 0,
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{}", v),
            Term::Int(n) => write!(f, "{}", n),
            Term::Atom(a) => f.write_str(a),
            Term::Compound(op, args) if self.is_arith_op() => {
                let prec = arith_prec(self);
                if args.len() == 1 {
                    f.write_str("-")?;
                    return write_arith_operand(f, &args[0], 4, false);
                }
                write_arith_operand(f, &args[0], prec, false)?;
                write!(f, " {} ", op)?;
                write_arith_operand(f, &args[1], prec, true)
            }
            Term::Compound(name, args) => {
                write!(f, "{}(", name)?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{}", a)?;
                }
                f.write_str(")")
            }
        }
    }
}

/// An idempotent substitution: no bound variable occurs in any binding.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    bindings: BTreeMap<Var, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(v: Var, t: Term) -> Self {
        let mut s = Self::new();
        s.bindings.insert(v, t);
        s
    }

    /// Builds a substitution from bindings, composing them in order.
    /// Panics if a binding would violate the occurs check.
    pub fn from_bindings(bindings: impl IntoIterator<Item = (Var, Term)>) -> Self {
        let mut s = Self::new();
        for (v, t) in bindings {
            let t = t.apply(&s);
            match t.as_var() {
                Some(w) if *w == v => continue,
                _ => {}
            }
            assert!(!t.occurs(&v) && s.get(&v).is_none(), "ill-formed binding for {}", v);
            s.bind(v, t);
        }
        s
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn get(&self, v: &Var) -> Option<&Term> {
        self.bindings.get(v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.bindings.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Var> {
        self.bindings.keys()
    }

    /// Adds `v ↦ t`, keeping the substitution idempotent. The caller
    /// guarantees `v` is unbound and `t` (after applying `self`) does not
    /// contain `v`.
    fn bind(&mut self, v: Var, t: Term) {
        let t = t.apply(self);
        let single = Substitution::singleton(v.clone(), t.clone());
        for rhs in self.bindings.values_mut() {
            if rhs.occurs(&v) {
                *rhs = rhs.apply(&single);
            }
        }
        self.bindings.insert(v, t);
    }

    /// Drops the bindings of the given variables.
    pub fn without<'a>(&self, vars: impl IntoIterator<Item = &'a Var>) -> Substitution {
        let mut out = self.clone();
        for v in vars {
            out.bindings.remove(v);
        }
        out
    }

    /// Splits into (bindings whose variable satisfies `pred`, the rest).
    pub fn partition(&self, pred: impl Fn(&Var) -> bool) -> (Substitution, Substitution) {
        let mut yes = Substitution::new();
        let mut no = Substitution::new();
        for (v, t) in &self.bindings {
            if pred(v) {
                yes.bindings.insert(v.clone(), t.clone());
            } else {
                no.bindings.insert(v.clone(), t.clone());
            }
        }
        (yes, no)
    }

    /// Solved form: the bindings read as equations `V = t`, in variable order.
    pub fn solved_form(&self) -> Vec<(Term, Term)> {
        self.bindings.iter().map(|(v, t)| (Term::Var(v.clone()), t.clone())).collect()
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, t)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{} -> {}", v, t)?;
        }
        f.write_str("}")
    }
}

/// Most general unifier of `s` and `t` (occurs check on).
pub fn unify(s: &Term, t: &Term) -> Option<Substitution> {
    unify_by(s, t, |_, _| true)
}

/// Unifies argument lists pairwise.
pub fn unify_all(pairs: &[(Term, Term)], prefer: impl Fn(&Var, &Var) -> bool) -> Option<Substitution> {
    let mut subst = Substitution::new();
    for (a, b) in pairs {
        unify_into(a, b, &mut subst, &prefer)?;
    }
    Some(subst)
}

/// Like [`unify`], but when two distinct variables meet, `prefer(x, y)`
/// decides whether `x` is the one bound (to `y`).
pub fn unify_by(s: &Term, t: &Term, prefer: impl Fn(&Var, &Var) -> bool) -> Option<Substitution> {
    let mut subst = Substitution::new();
    unify_into(s, t, &mut subst, &prefer)?;
    Some(subst)
}

fn unify_into(s: &Term, t: &Term, subst: &mut Substitution, prefer: &impl Fn(&Var, &Var) -> bool) -> Option<()> {
    let s = s.apply(subst);
    let t = t.apply(subst);
    match (&s, &t) {
        (Term::Var(x), Term::Var(y)) if x == y => Some(()),
        (Term::Var(x), Term::Var(y)) => {
            if prefer(x, y) {
                subst.bind(x.clone(), t.clone());
            } else {
                subst.bind(y.clone(), s.clone());
            }
            Some(())
        }
        (Term::Var(x), other) | (other, Term::Var(x)) => {
            if other.occurs(x) {
                return None;
            }
            subst.bind(x.clone(), other.clone());
            Some(())
        }
        (Term::Int(a), Term::Int(b)) => (a == b).then_some(()),
        (Term::Atom(a), Term::Atom(b)) => (a == b).then_some(()),
        (Term::Compound(f, xs), Term::Compound(g, ys)) => {
            if f != g || xs.len() != ys.len() {
                return None;
            }
            for (a, b) in xs.iter().zip(ys) {
                unify_into(a, b, subst, prefer)?;
            }
            Some(())
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(args: Vec<Term>) -> Term {
        Term::compound("f", args)
    }

    #[test]
    fn textbook_mgu() {
        let x = Var::named("X");
        let y = Var::named("Y");
        let s = f(vec![Term::Var(x.clone()), Term::atom("a")]);
        let t = f(vec![Term::atom("b"), Term::Var(y.clone())]);
        let mgu = unify(&s, &t).unwrap();
        assert_eq!(mgu.get(&x), Some(&Term::atom("b")));
        assert_eq!(mgu.get(&y), Some(&Term::atom("a")));
        assert_eq!(mgu.len(), 2);
    }

    #[test]
    fn identity_and_occurs_check() {
        let x = Var::named("X");
        assert!(unify(&Term::Var(x.clone()), &Term::Var(x.clone())).unwrap().is_empty());
        assert!(unify(&Term::Var(x.clone()), &f(vec![Term::Var(x)])).is_none());
    }

    #[test]
    fn solved_form_reads_bindings() {
        let x = Var::named("X");
        let z = Var::named("Z");
        let s = Substitution::singleton(x.clone(), f(vec![Term::Var(z)]));
        let sf = s.solved_form();
        assert_eq!(sf.len(), 1);
        assert_eq!(format!("{} = {}", sf[0].0, sf[0].1), "X = f(Z)");
        assert!(Substitution::new().solved_form().is_empty());
    }

    #[test]
    fn chained_bindings_stay_idempotent() {
        let x = Var::named("X");
        let y = Var::named("Y");
        let s = f(vec![Term::Var(x.clone()), Term::Var(y.clone())]);
        let t = f(vec![Term::Var(y.clone()), Term::atom("c")]);
        let mgu = unify(&s, &t).unwrap();
        assert_eq!(s.apply(&mgu), t.apply(&mgu));
        assert_eq!(s.apply(&mgu).apply(&mgu), s.apply(&mgu));
    }

    #[test]
    fn arithmetic_printing_and_eval() {
        let t = Term::compound(
            "-",
            vec![Term::Int(1), Term::compound("+", vec![Term::Int(2), Term::Int(3)])],
        );
        assert_eq!(t.to_string(), "1 - (2 + 3)");
        assert_eq!(t.eval_int(), Some(-4));
    }
}
