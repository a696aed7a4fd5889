//! Goal selection and the rewrite rules.

use std::collections::BTreeSet;

use super::state::{Denial, Goal, State, Waiting};
use crate::cstore::{enumerate, negate, Enumeration, Negation, StoreError};
use crate::formula::{fresh_copies, ClpLit, CmpOp, Formula};
use crate::program::Program;
use crate::term::{unify_all, unify_by, Substitution, Term, Var};
use crate::transform::normalize;

#[derive(Clone, Debug)]
pub(crate) enum Action {
    PosTrue,
    PosFalse,
    PosAnd,
    PosExists,
    PosNot,
    PosUnify(Term, Term),
    PosClp(ClpLit),
    PosUnfold,
    PosOr,
    PosAbduce,
    DenEmpty,
    DenDrop(usize),
    DenDischarge,
    DenReplace(usize, Vec<Formula>),
    DenLift(usize),
    DenEliminate(usize, Var, Term),
    DenUnify(usize, Substitution),
    DenUnfold(usize),
    DenOrSplit(usize),
    DenWait(usize),
    DenResolve(usize),
    DenEnumerate(usize, ClpLit, Vec<usize>),
    DenNegBranch(usize),
    DenClpBranch(usize, ClpLit),
    DenClpNegate(ClpLit),
}

impl Action {
    pub(crate) fn name(&self) -> &'static str {
        match self {
            Action::PosTrue => "true",
            Action::PosFalse => "false",
            Action::PosAnd => "and",
            Action::PosExists => "exists",
            Action::PosNot => "not",
            Action::PosUnify(..) => "unify",
            Action::PosClp(_) => "clp-add",
            Action::PosUnfold => "unfold",
            Action::PosOr => "or",
            Action::PosAbduce => "abduce",
            Action::DenEmpty => "denial-true",
            Action::DenDrop(_) => "denial-drop",
            Action::DenDischarge => "denial-false",
            Action::DenReplace(..) => "denial-simplify",
            Action::DenLift(_) => "denial-exists",
            Action::DenEliminate(..) => "denial-eliminate",
            Action::DenUnify(..) => "denial-unify",
            Action::DenUnfold(_) => "denial-unfold",
            Action::DenOrSplit(_) => "denial-or",
            Action::DenWait(_) => "denial-abducible",
            Action::DenResolve(_) => "denial-resolve",
            Action::DenEnumerate(..) => "denial-clp-enumerate",
            Action::DenNegBranch(_) => "denial-not",
            Action::DenClpBranch(..) => "denial-clp-branch",
            Action::DenClpNegate(_) => "denial-clp-negate",
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) enum Analysis {
    Act(u8, Action),
    /// In residual form: no rule needs to touch it.
    Done,
    /// Only floundering-risky literals are left.
    Stuck(String),
}

pub(crate) enum Selection {
    Goal(usize, Action),
    Saturated,
    Stuck(String),
}

pub(crate) fn select(prog: &Program, state: &State) -> Selection {
    let mut best: Option<(u8, usize, Action)> = None;
    let mut stuck = None;
    for i in 0..state.goals.len() {
        match analyze_goal(prog, state, i) {
            Analysis::Act(p, a) => {
                if best.as_ref().is_none_or(|(q, _, _)| p < *q) {
                    best = Some((p, i, a));
                    if p == 0 {
                        break;
                    }
                }
            }
            Analysis::Done => {}
            Analysis::Stuck(m) => {
                stuck.get_or_insert(m);
            }
        }
    }
    match (best, stuck) {
        (Some((_, i, a)), _) => Selection::Goal(i, a),
        (None, Some(m)) => Selection::Stuck(m),
        (None, None) => Selection::Saturated,
    }
}

fn is_arith(t: &Term) -> bool {
    t.is_arith_op()
}

fn is_store_var(state: &State, t: &Term) -> bool {
    matches!(t, Term::Var(v) if state.store.contains_var(v))
}

fn pos_clp_like(state: &State, s: &Term, t: &Term) -> bool {
    let int_or_store = |x: &Term| matches!(x, Term::Int(_)) || is_store_var(state, x);
    is_arith(s)
        || is_arith(t)
        || (is_store_var(state, s) && int_or_store(t))
        || (is_store_var(state, t) && int_or_store(s))
}

fn den_clp_like(state: &State, s: &Term, t: &Term) -> bool {
    let var_or_int = |x: &Term| matches!(x, Term::Int(_) | Term::Var(_));
    is_arith(s)
        || is_arith(t)
        || (is_store_var(state, s) && var_or_int(t))
        || (is_store_var(state, t) && var_or_int(s))
        || (matches!(s, Term::Int(_)) && matches!(t, Term::Var(_)))
        || (matches!(s, Term::Var(_)) && matches!(t, Term::Int(_)))
}

fn var_list(vs: &BTreeSet<Var>) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

fn analyze_goal(prog: &Program, state: &State, idx: usize) -> Analysis {
    match &state.goals[idx] {
        Goal::Pos(f) => analyze_pos(prog, state, idx, f),
        Goal::Den(d) => analyze_den(prog, state, d),
    }
}

fn analyze_pos(prog: &Program, state: &State, idx: usize, f: &Formula) -> Analysis {
    use Analysis::Act;
    match f {
        Formula::True => Act(0, Action::PosTrue),
        Formula::False => Act(0, Action::PosFalse),
        Formula::And(..) => Act(0, Action::PosAnd),
        Formula::Exists(..) => Act(0, Action::PosExists),
        Formula::Forall(..) | Formula::Implies(..) => Act(0, Action::PosNot),
        Formula::Not(g) => match &**g {
            Formula::Eq(s, t) if pos_clp_like(state, s, t) => {
                Act(2, Action::PosClp(ClpLit::cmp(s.clone(), CmpOp::Ne, t.clone())))
            }
            Formula::Clp(ClpLit::Cmp { lhs, op, rhs }) => {
                Act(2, Action::PosClp(ClpLit::cmp(lhs.clone(), op.complement(), rhs.clone())))
            }
            g => match unsafe_negation(prog, state, idx, g) {
                Some(v) => Analysis::Stuck(format!(
                    "negation `{}` over an open predicate has the unbound variable {} that occurs nowhere else",
                    f, v
                )),
                None => Act(0, Action::PosNot),
            },
        },
        Formula::Eq(s, t) => {
            if pos_clp_like(state, s, t) {
                Act(2, Action::PosClp(ClpLit::cmp(s.clone(), CmpOp::Eq, t.clone())))
            } else {
                Act(0, Action::PosUnify(s.clone(), t.clone()))
            }
        }
        Formula::Clp(c) => Act(2, Action::PosClp(c.clone())),
        Formula::Atom(a) => {
            if prog.is_defined(&a.pred_id()) {
                Act(1, Action::PosUnfold)
            } else {
                Act(5, Action::PosAbduce)
            }
        }
        Formula::Or(..) => Act(4, Action::PosOr),
    }
}

/// A variable of `g` that no other part of the state mentions, when `g`
/// contains an open atom. Such a negation can never become safe.
fn unsafe_negation(prog: &Program, state: &State, idx: usize, g: &Formula) -> Option<Var> {
    let mut preds = BTreeSet::new();
    crate::syntax::collect_preds(g, &mut preds);
    if preds.iter().all(|p| prog.is_defined(p)) {
        return None;
    }
    g.free_vars().into_iter().find(|v| !state.occurs_elsewhere(v, idx))
}

fn analyze_den(prog: &Program, state: &State, d: &Denial) -> Analysis {
    if let Some(w) = &d.waiting {
        let pid = w.atom.pred_id();
        return match state.delta.iter().position(|a| a.pred_id() == pid && !w.resolved.contains(&a.args)) {
            Some(k) => Analysis::Act(3, Action::DenResolve(k)),
            None => Analysis::Done,
        };
    }
    if d.body.is_empty() {
        return Analysis::Act(0, Action::DenEmpty);
    }
    let mut best: Option<(u8, Action)> = None;
    let mut stuck = None;
    for i in 0..d.body.len() {
        match analyze_lit(prog, state, d, i) {
            Analysis::Act(p, a) => {
                if best.as_ref().is_none_or(|(q, _)| p < *q) {
                    best = Some((p, a));
                }
                if p == 0 {
                    break;
                }
            }
            Analysis::Done => return Analysis::Done,
            Analysis::Stuck(m) => {
                stuck.get_or_insert(m);
            }
        }
    }
    match (best, stuck) {
        (Some((p, a)), _) => Analysis::Act(p, a),
        (None, Some(m)) => Analysis::Stuck(m),
        (None, None) => Analysis::Done,
    }
}

fn analyze_lit(prog: &Program, state: &State, d: &Denial, i: usize) -> Analysis {
    use Analysis::Act;
    match &d.body[i] {
        Formula::True => Act(0, Action::DenDrop(i)),
        Formula::False => Act(0, Action::DenDischarge),
        f @ Formula::And(..) => Act(0, Action::DenReplace(i, f.clone().conjuncts())),
        Formula::Exists(..) => Act(0, Action::DenLift(i)),
        f @ (Formula::Forall(..) | Formula::Implies(..)) => Act(0, Action::DenReplace(i, vec![normalize(f)])),
        Formula::Or(..) => Act(3, Action::DenOrSplit(i)),
        Formula::Atom(a) => {
            if prog.is_defined(&a.pred_id()) {
                Act(1, Action::DenUnfold(i))
            } else {
                Act(3, Action::DenWait(i))
            }
        }
        Formula::Eq(s, t) => den_eq(state, d, i, s, t),
        Formula::Clp(c) => den_clp(d, i, c),
        Formula::Not(g) => match &**g {
            Formula::Not(h) => Act(0, Action::DenReplace(i, vec![(**h).clone()])),
            Formula::True => Act(0, Action::DenDischarge),
            Formula::False => Act(0, Action::DenDrop(i)),
            Formula::Clp(c @ ClpLit::Cmp { .. }) => {
                let Negation::Single(n) = negate(c) else { unreachable!("comparison negates to one literal") };
                Act(0, Action::DenReplace(i, vec![Formula::Clp(n)]))
            }
            Formula::Clp(c @ ClpLit::In { .. }) => {
                let Negation::Branch(a, b) = negate(c) else { unreachable!("range negates to a branch") };
                Act(0, Action::DenReplace(i, vec![Formula::or(Formula::Clp(a), Formula::Clp(b))]))
            }
            Formula::Eq(s, t) if den_clp_like(state, s, t) => den_clp(d, i, &ClpLit::cmp(s.clone(), CmpOp::Ne, t.clone())),
            g => {
                let mixed: BTreeSet<Var> = g.free_vars().into_iter().filter(|v| d.is_universal(v)).collect();
                if mixed.is_empty() {
                    Act(4, Action::DenNegBranch(i))
                } else {
                    Analysis::Stuck(format!(
                        "negative literal `not {}` contains the universally quantified variables {}",
                        g,
                        var_list(&mixed)
                    ))
                }
            }
        },
    }
}

fn den_eq(state: &State, d: &Denial, i: usize, s: &Term, t: &Term) -> Analysis {
    use Analysis::Act;
    if s == t {
        return Act(0, Action::DenDrop(i));
    }
    for (x, other) in [(s, t), (t, s)] {
        if let Term::Var(v) = x {
            if d.is_universal(v) && !other.occurs(v) {
                return Act(0, Action::DenEliminate(i, v.clone(), other.clone()));
            }
        }
    }
    if den_clp_like(state, s, t) {
        return den_clp(d, i, &ClpLit::cmp(s.clone(), CmpOp::Eq, t.clone()));
    }
    let prefer = |x: &Var, y: &Var| d.is_universal(x) || (!d.is_universal(y) && !state.store.contains_var(x));
    match unify_by(s, t, prefer) {
        None => Act(0, Action::DenDischarge),
        Some(theta) => {
            let binds_universal = theta.domain().any(|v| d.is_universal(v));
            let solved = theta.len() == 1
                && match (s, t) {
                    (Term::Var(y), other) | (other, Term::Var(y)) => theta.get(y) == Some(other),
                    _ => false,
                };
            if !binds_universal && solved {
                Analysis::Done
            } else {
                Act(0, Action::DenUnify(i, theta))
            }
        }
    }
}

fn den_clp(d: &Denial, i: usize, c: &ClpLit) -> Analysis {
    use Analysis::Act;
    let vars = c.vars();
    if vars.is_empty() {
        return match c.eval_ground() {
            Some(true) => Act(0, Action::DenDrop(i)),
            _ => Act(0, Action::DenDischarge),
        };
    }
    let universal: BTreeSet<Var> = vars.iter().filter(|v| d.is_universal(v)).cloned().collect();
    if universal.len() == vars.len() {
        let in_idxs = range_literals(d, i, &vars);
        let mut lits = vec![c.clone()];
        lits.extend(in_idxs.iter().map(|&j| match &d.body[j] {
            Formula::Clp(l) => l.clone(),
            _ => unreachable!(),
        }));
        return match enumerate(&lits) {
            Ok(Enumeration::Finite(..)) => Act(3, Action::DenEnumerate(i, c.clone(), in_idxs)),
            Ok(Enumeration::Infinite) => Analysis::Stuck(format!(
                "constraint `{}` over universally quantified variables {} has infinitely many solutions",
                c,
                var_list(&universal)
            )),
            Err(e) => Analysis::Stuck(format!("constraint `{}`: {}", c, e)),
        };
    }
    if universal.is_empty() {
        return if d.body.len() == 1 && d.universals.is_empty() && matches!(c, ClpLit::Cmp { .. }) {
            Act(2, Action::DenClpNegate(c.clone()))
        } else {
            Act(4, Action::DenClpBranch(i, c.clone()))
        };
    }
    let free: BTreeSet<Var> = vars.difference(&universal).cloned().collect();
    Analysis::Stuck(format!(
        "constraint `{}` mixes universally quantified variables {} with free variables {}",
        c,
        var_list(&universal),
        var_list(&free)
    ))
}

/// Indices of `X in L..U` literals (other than `i`) whose variable is in `vars`.
fn range_literals(d: &Denial, i: usize, vars: &BTreeSet<Var>) -> Vec<usize> {
    (0..d.body.len())
        .filter(|&j| j != i)
        .filter(|&j| match &d.body[j] {
            Formula::Clp(l @ ClpLit::In { var: Term::Var(x), .. }) => vars.contains(x) && l.vars().is_subset(vars),
            _ => false,
        })
        .collect()
}

pub(crate) enum StepResult {
    Next(Vec<State>),
    Flounder(String),
}

pub(crate) struct Stepper<'a> {
    pub prog: &'a Program,
    pub reuse: bool,
    pub record: bool,
    /// Goals added by the last step, printed (only when recording).
    pub added: Vec<String>,
}

impl<'a> Stepper<'a> {
    fn note(&mut self, g: &Goal) {
        if self.record {
            self.added.push(g.to_string());
        }
    }

    fn insert(&mut self, state: &mut State, at: usize, g: Goal) {
        self.note(&g);
        state.goals.insert(at, g);
    }

    fn set(&mut self, state: &mut State, at: usize, g: Goal) {
        self.note(&g);
        state.goals[at] = g;
    }

    pub(crate) fn apply(&mut self, mut state: State, idx: usize, action: Action) -> StepResult {
        use StepResult::Next;
        self.added.clear();
        let goal = state.goals[idx].clone();
        match (goal, action) {
            (_, Action::PosTrue) | (_, Action::DenDischarge) => {
                state.goals.remove(idx);
                Next(vec![state])
            }
            (_, Action::PosFalse) | (_, Action::DenEmpty) => Next(vec![]),
            (Goal::Pos(f), Action::PosAnd) => {
                state.goals.remove(idx);
                for (k, c) in f.conjuncts().into_iter().enumerate() {
                    self.insert(&mut state, idx + k, Goal::Pos(c));
                }
                Next(vec![state])
            }
            (Goal::Pos(Formula::Exists(vs, body)), Action::PosExists) => {
                let (_, s) = fresh_copies(&vs);
                self.set(&mut state, idx, Goal::Pos(body.apply(&s)));
                Next(vec![state])
            }
            (Goal::Pos(f), Action::PosNot) => {
                let g = match normalize(&f) {
                    Formula::Not(g) => *g,
                    other => {
                        self.set(&mut state, idx, Goal::Pos(other));
                        return Next(vec![state]);
                    }
                };
                self.set(&mut state, idx, Goal::Den(Denial::new(Vec::new(), g.conjuncts())));
                Next(vec![state])
            }
            (_, Action::PosUnify(s, t)) => {
                state.goals.remove(idx);
                match bind(&mut state, &[(s, t)]) {
                    Ok(true) => Next(vec![state]),
                    Ok(false) => Next(vec![]),
                    Err(m) => StepResult::Flounder(m),
                }
            }
            (_, Action::PosClp(c)) => {
                state.goals.remove(idx);
                match state.store.add(&c) {
                    Ok(()) => Next(vec![state]),
                    Err(StoreError::Inconsistent) => Next(vec![]),
                    Err(e) => StepResult::Flounder(format!("constraint `{}`: {}", c, e)),
                }
            }
            (Goal::Pos(Formula::Atom(a)), Action::PosUnfold) => {
                let body = self.prog.completed.get(&a.pred_id()).expect("defined predicate").instantiate(&a.args);
                self.set(&mut state, idx, Goal::Pos(body));
                Next(vec![state])
            }
            (Goal::Pos(Formula::Or(a, b)), Action::PosOr) => {
                let mut right = state.clone();
                self.set(&mut state, idx, Goal::Pos(*a));
                right.goals[idx] = Goal::Pos(*b);
                Next(vec![state, right])
            }
            (Goal::Pos(Formula::Atom(a)), Action::PosAbduce) => {
                state.goals.remove(idx);
                let mut out = Vec::new();
                let present = state.delta.contains(&a);
                if self.reuse || present {
                    for d in state.delta.iter().filter(|d| d.pred_id() == a.pred_id()) {
                        let mut next = state.clone();
                        let pairs: Vec<(Term, Term)> = a.args.iter().cloned().zip(d.args.iter().cloned()).collect();
                        match bind(&mut next, &pairs) {
                            Ok(true) => out.push(next),
                            Ok(false) => {}
                            Err(m) => return StepResult::Flounder(m),
                        }
                        if present && !self.reuse {
                            break;
                        }
                    }
                }
                if !present {
                    state.delta.push(a);
                    out.push(state);
                }
                Next(out)
            }
            (Goal::Den(mut d), action) => self.apply_denial(state, idx, &mut d, action),
            (g, a) => unreachable!("action {:?} does not apply to goal {}", a, g),
        }
    }

    fn apply_denial(&mut self, mut state: State, idx: usize, d: &mut Denial, action: Action) -> StepResult {
        use StepResult::Next;
        match action {
            Action::DenDrop(i) => {
                d.body.remove(i);
            }
            Action::DenReplace(i, fs) => {
                d.body.splice(i..=i, fs);
            }
            Action::DenLift(i) => {
                let Formula::Exists(vs, f) = d.body[i].clone() else { unreachable!() };
                let (fresh, s) = fresh_copies(&vs);
                d.universals.extend(fresh);
                d.body[i] = f.apply(&s);
            }
            Action::DenEliminate(i, v, t) => {
                d.body.remove(i);
                let s = Substitution::singleton(v.clone(), t);
                for f in &mut d.body {
                    *f = f.apply(&s);
                }
                d.universals.retain(|u| *u != v);
            }
            Action::DenUnify(i, theta) => {
                d.body.remove(i);
                let (univ, free) = theta.partition(|v| d.is_universal(v));
                for f in &mut d.body {
                    *f = f.apply(&univ);
                }
                let residual: Vec<Formula> =
                    free.iter().map(|(y, t)| Formula::Eq(Term::Var(y.clone()), t.apply(&univ))).collect();
                d.body.splice(i..i, residual);
                d.universals.retain(|u| univ.get(u).is_none());
            }
            Action::DenUnfold(i) => {
                let Formula::Atom(a) = &d.body[i] else { unreachable!() };
                let body = self.prog.completed.get(&a.pred_id()).expect("defined predicate").instantiate(&a.args);
                d.body[i] = body;
            }
            Action::DenOrSplit(i) => {
                let Formula::Or(a, b) = d.body[i].clone() else { unreachable!() };
                let mut other = d.clone();
                d.body[i] = *a;
                other.body[i] = *b;
                other.prune_universals();
                self.insert(&mut state, idx + 1, Goal::Den(other));
            }
            Action::DenWait(i) => {
                let Formula::Atom(a) = d.body.remove(i) else { unreachable!() };
                d.waiting = Some(Waiting { atom: a, resolved: Vec::new() });
            }
            Action::DenResolve(k) => {
                let delta = state.delta[k].clone();
                let w = d.waiting.as_mut().expect("waiting denial");
                w.resolved.push(delta.args.clone());
                let mut body: Vec<Formula> =
                    w.atom.args.iter().cloned().zip(delta.args.iter().cloned()).map(|(t, s)| Formula::Eq(t, s)).collect();
                body.extend(d.body.iter().cloned());
                let spawned = Denial::new(d.universals.clone(), body);
                self.insert(&mut state, idx + 1, Goal::Den(spawned));
            }
            Action::DenEnumerate(i, c, in_idxs) => {
                let mut lits = vec![c];
                lits.extend(in_idxs.iter().map(|&j| match &d.body[j] {
                    Formula::Clp(l) => l.clone(),
                    _ => unreachable!(),
                }));
                let Ok(Enumeration::Finite(vars, tuples)) = enumerate(&lits) else {
                    unreachable!("enumeration was checked finite")
                };
                let mut rest = d.body.clone();
                rest.remove(i);
                let universals: Vec<Var> = d.universals.iter().filter(|u| !vars.contains(u)).cloned().collect();
                state.goals.remove(idx);
                for (k, tuple) in tuples.iter().enumerate() {
                    let s = Substitution::from_bindings(vars.iter().cloned().zip(tuple.iter().map(|&n| Term::Int(n))));
                    let body = rest.iter().map(|f| f.apply(&s)).collect();
                    self.insert(&mut state, idx + k, Goal::Den(Denial::new(universals.clone(), body)));
                }
                return Next(vec![state]);
            }
            Action::DenNegBranch(i) => {
                let Formula::Not(g) = d.body[i].clone() else { unreachable!() };
                let mut right = state.clone();
                self.set(&mut state, idx, Goal::Pos((*g).clone()));
                let mut rest = d.clone();
                rest.body.remove(i);
                rest.prune_universals();
                right.goals[idx] = Goal::Den(rest);
                right.goals.insert(idx + 1, Goal::Den(Denial::new(Vec::new(), g.conjuncts())));
                return Next(vec![state, right]);
            }
            Action::DenClpBranch(i, c) => {
                let mut out = Vec::new();
                let negated = match negate(&c) {
                    Negation::Single(n) => vec![n],
                    Negation::Branch(a, b) => vec![a, b],
                };
                for n in negated {
                    let mut next = state.clone();
                    next.goals.remove(idx);
                    match next.store.add(&n) {
                        Ok(()) => out.push(next),
                        Err(StoreError::Inconsistent) => {}
                        Err(e) => return StepResult::Flounder(format!("constraint `{}`: {}", n, e)),
                    }
                }
                d.body.remove(i);
                d.prune_universals();
                match state.store.add(&c) {
                    Ok(()) => {
                        self.set(&mut state, idx, Goal::Den(d.clone()));
                        out.push(state);
                    }
                    Err(StoreError::Inconsistent) => {}
                    Err(e) => return StepResult::Flounder(format!("constraint `{}`: {}", c, e)),
                }
                return Next(out);
            }
            Action::DenClpNegate(c) => {
                state.goals.remove(idx);
                let Negation::Single(n) = negate(&c) else { unreachable!() };
                return match state.store.add(&n) {
                    Ok(()) => Next(vec![state]),
                    Err(StoreError::Inconsistent) => Next(vec![]),
                    Err(e) => StepResult::Flounder(format!("constraint `{}`: {}", n, e)),
                };
            }
            other => unreachable!("action {:?} does not apply to a denial", other),
        }
        d.prune_universals();
        self.set(&mut state, idx, Goal::Den(d.clone()));
        Next(vec![state])
    }
}

/// Unifies the pairs and applies the result to the state. Bindings of
/// constraint-store variables become store equalities.
pub(crate) fn bind(state: &mut State, pairs: &[(Term, Term)]) -> Result<bool, String> {
    let (arith, plain_pairs): (Vec<_>, Vec<_>) =
        pairs.iter().cloned().partition(|(s, t)| s.is_arith_op() || t.is_arith_op());
    let store = &state.store;
    let Some(theta) = unify_all(&plain_pairs, |x, _| !store.contains_var(x)) else {
        return Ok(false);
    };
    let (in_store, plain) = theta.partition(|v| state.store.contains_var(v));
    let bound = in_store.iter().map(|(v, t)| (Term::Var(v.clone()), t.clone()));
    let arith = arith.into_iter().map(|(s, t)| (s.apply(&theta), t.apply(&theta)));
    for (s, t) in bound.chain(arith).collect::<Vec<_>>() {
        let c = ClpLit::cmp(s, CmpOp::Eq, t);
        match state.store.add(&c) {
            Ok(()) => {}
            Err(StoreError::Inconsistent) => return Ok(false),
            Err(e) => return Err(format!("constraint `{}`: {}", c, e)),
        }
    }
    state.apply(&plain);
    Ok(true)
}

/// Whether `lit` is a solved equation `Y = t` with `Y` free, not in the
/// store, and `t` not a universal variable.
fn is_residual_eq(state: &State, d: &Denial, lit: &Formula) -> bool {
    let Formula::Eq(s, t) = lit else { return false };
    let solved = |y: &Term, other: &Term| match y {
        Term::Var(v) => {
            !d.is_universal(v)
                && !state.store.contains_var(v)
                && !other.occurs(v)
                && !matches!(other, Term::Var(u) if d.is_universal(u))
                && !den_clp_like(state, y, other)
        }
        _ => false,
    };
    solved(s, t) || solved(t, s)
}

/// The success-state characterization: every remaining goal is a denial
/// either containing a solved equation on a free variable, or waiting on an
/// abducible atom that has been resolved against every abduced atom of its
/// predicate.
pub fn success_check(state: &State) -> bool {
    state.goals.iter().all(|g| match g {
        Goal::Pos(_) => false,
        Goal::Den(d) => match &d.waiting {
            Some(w) => state
                .delta
                .iter()
                .filter(|a| a.pred_id() == w.atom.pred_id())
                .all(|a| w.resolved.contains(&a.args)),
            None => d.body.iter().any(|l| is_residual_eq(state, d, l)),
        },
    })
}
