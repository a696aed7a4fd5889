//! Predicate completion, denial normal form and `ob` expansion.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::formula::{fresh_copies, Atom, ClpLit, Formula, PredId};
use crate::syntax::{Definition, ObDecl, Theory};
use crate::term::{Substitution, Term, Var};

/// `p(params) <-> body`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Completion {
    pub params: Vec<Var>,
    pub body: Formula,
}

impl Completion {
    /// The body instantiated for the given arguments, with bound variables
    /// renamed apart.
    pub fn instantiate(&self, args: &[Term]) -> Formula {
        let s = Substitution::from_bindings(self.params.iter().cloned().zip(args.iter().cloned()));
        self.body.rename_fresh().apply(&s)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CompletedDefinition {
    pub completions: BTreeMap<PredId, Completion>,
}

impl CompletedDefinition {
    pub fn get(&self, p: &PredId) -> Option<&Completion> {
        self.completions.get(p)
    }
}

impl fmt::Display for CompletedDefinition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (p, c) in &self.completions {
            let head = Atom { pred: p.name.clone(), args: c.params.iter().cloned().map(Term::Var).collect() };
            writeln!(f, "{} <- {}.", head, c.body)?;
        }
        Ok(())
    }
}

/// `forall(universals) <- body_1, ..., body_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Denial {
    pub universals: Vec<Var>,
    pub body: Vec<Formula>,
}

impl Denial {
    pub fn body_formula(&self) -> Formula {
        Formula::conj(self.body.iter().cloned())
    }

    /// The equivalent closed formula `not (exists(universals)$ body)`.
    pub fn to_formula(&self) -> Formula {
        Formula::not(Formula::exists(self.universals.clone(), self.body_formula()))
    }
}

impl fmt::Display for Denial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = Formula::not(self.body_formula());
        if self.universals.is_empty() {
            write!(f, "{}", body)
        } else {
            let vs: Vec<String> = self.universals.iter().map(|v| v.to_string()).collect();
            write!(f, "forall({})$ {}", vs.join(","), body)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Goal {
    Positive(Formula),
    Denial(Denial),
}

impl Goal {
    pub fn to_formula(&self) -> Formula {
        match self {
            Goal::Positive(f) => f.clone(),
            Goal::Denial(d) => d.to_formula(),
        }
    }
}

impl fmt::Display for Goal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Goal::Positive(g) => write!(f, "fol {}.", g),
            Goal::Denial(d) => write!(f, "fol {}.", d),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TransformError {
    #[error("ob declaration for `{0}`: the function predicate must be binary, found arity {1}")]
    NotBinary(String, usize),
    #[error("ob declaration for `{0}`: the function predicate must be open, but it has rules")]
    NotOpen(String),
}

/// Clark completion of every defined predicate.
///
/// A head argument that is a variable not seen earlier in the head is
/// substituted by the parameter; other arguments become equations.
pub fn complete(def: &Definition) -> CompletedDefinition {
    let mut completions = BTreeMap::new();
    for p in &def.defined {
        let params: Vec<Var> = (0..p.arity).map(|i| Var::fresh(&format!("X{}", i))).collect();
        let mut disjuncts = Vec::new();
        for rule in def.rules_for(p) {
            let mut sigma = Vec::new();
            let mut eqs = Vec::new();
            for (i, arg) in rule.head.args.iter().enumerate() {
                match arg {
                    Term::Var(v) if !sigma.iter().any(|(w, _): &(Var, Term)| w == v) => {
                        sigma.push((v.clone(), Term::Var(params[i].clone())));
                    }
                    _ => eqs.push((i, arg.clone())),
                }
            }
            let mut rule_vars = BTreeSet::new();
            rule.head.collect_vars(&mut rule_vars);
            rule_vars.extend(rule.body.free_vars());
            let locals: Vec<Var> = rule_vars.into_iter().filter(|v| !sigma.iter().any(|(w, _)| w == v)).collect();
            let (fresh, renaming) = fresh_copies(&locals);
            let mut bindings = sigma;
            bindings.extend(renaming.iter().map(|(v, t)| (v.clone(), t.clone())));
            let s = Substitution::from_bindings(bindings);
            let mut conj: Vec<Formula> =
                eqs.into_iter().map(|(i, t)| Formula::Eq(Term::Var(params[i].clone()), t.apply(&s))).collect();
            if rule.body != Formula::True {
                conj.push(rule.body.apply(&s));
            }
            disjuncts.push(Formula::exists(fresh, Formula::conj(conj)));
        }
        let body = normalize(&Formula::disj(disjuncts));
        completions.insert(p.clone(), Completion { params, body });
    }
    CompletedDefinition { completions }
}

/// Removes `forall` and `=>`: `forall X. G` becomes `not exists X. not G`
/// and `A => B` becomes `not (A, not B)`.
pub fn normalize(f: &Formula) -> Formula {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) | Formula::Eq(..) | Formula::Clp(_) => f.clone(),
        Formula::Not(g) => Formula::not(normalize(g)),
        Formula::And(a, b) => Formula::and(normalize(a), normalize(b)),
        Formula::Or(a, b) => Formula::or(normalize(a), normalize(b)),
        Formula::Exists(vs, g) => Formula::exists(vs.clone(), normalize(g)),
        Formula::Forall(vs, g) => Formula::not(Formula::exists(vs.clone(), neg(&normalize(g)))),
        Formula::Implies(a, b) => Formula::not(Formula::and(normalize(a), neg(&normalize(b)))),
    }
}

/// Negation of a normalized formula, pushed through `;` and comparisons.
pub fn neg(f: &Formula) -> Formula {
    match f {
        Formula::True => Formula::False,
        Formula::False => Formula::True,
        Formula::Not(g) => (**g).clone(),
        Formula::Or(a, b) => Formula::and(neg(a), neg(b)),
        Formula::Clp(ClpLit::Cmp { lhs, op, rhs }) => Formula::Clp(ClpLit::cmp(lhs.clone(), op.complement(), rhs.clone())),
        _ => Formula::not(f.clone()),
    }
}

/// Turns an axiom into goals for the initial state. An outermost universal
/// becomes a denial; everything else is a positive goal.
pub fn to_denials(axiom: &Formula) -> Vec<Goal> {
    match axiom {
        Formula::Forall(vs, g) => {
            let body = neg(&normalize(g)).conjuncts();
            vec![Goal::Denial(Denial { universals: vs.clone(), body })]
        }
        Formula::And(a, b) => {
            let mut out = to_denials(a);
            out.extend(to_denials(b));
            out
        }
        _ => vec![Goal::Positive(normalize(axiom))],
    }
}

/// The totality, functionality and injectivity axioms of `ob f :: d(_) -> r(_)`.
pub fn expand_ob(decl: &ObDecl, theory: &Theory) -> Result<Vec<Formula>, TransformError> {
    let name = decl.function.to_string();
    for p in theory.predicates() {
        if p.name == decl.function && p.arity != 2 {
            return Err(TransformError::NotBinary(name, p.arity));
        }
    }
    if theory.definition.defined.iter().any(|p| p.name == decl.function) {
        return Err(TransformError::NotOpen(name));
    }
    let f = |a: &Var, b: &Var| Formula::Atom(Atom::new(&decl.function, vec![Term::Var(a.clone()), Term::Var(b.clone())]));
    let unary = |p: &str, a: &Var| Formula::Atom(Atom::new(p, vec![Term::Var(a.clone())]));
    let eq = |a: &Var, b: &Var| Formula::Eq(Term::Var(a.clone()), Term::Var(b.clone()));

    let (q, p) = (Var::fresh("Q"), Var::fresh("P"));
    let total = Formula::forall(
        vec![q.clone()],
        Formula::implies(
            unary(&decl.domain, &q),
            Formula::exists(vec![p.clone()], Formula::and(unary(&decl.range, &p), f(&q, &p))),
        ),
    );
    let (q, p1, p2) = (Var::fresh("Q"), Var::fresh("P"), Var::fresh("P"));
    let functional = Formula::forall(
        vec![q.clone(), p1.clone(), p2.clone()],
        Formula::implies(Formula::and(f(&q, &p1), f(&q, &p2)), eq(&p1, &p2)),
    );
    let (q1, q2, p) = (Var::fresh("Q"), Var::fresh("Q"), Var::fresh("P"));
    let injective = Formula::forall(
        vec![q1.clone(), q2.clone(), p.clone()],
        Formula::implies(Formula::and(f(&q1, &p), f(&q2, &p)), eq(&q1, &q2)),
    );
    Ok(vec![total, functional, injective])
}
