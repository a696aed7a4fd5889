//! Ground semantics over finite universes: well-founded models by
//! alternating fixpoint, answer checking, and brute-force model
//! enumeration. Shares no code with the engine beyond the syntax tree.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::engine::Answer;
use crate::formula::{Atom, ClpLit, Formula, PredId};
use crate::program::Program;
use crate::term::{Substitution, Term, Var};
use crate::types::{herbrand_universe, BaseSort, Sort, TypedTheory, Universe};

/// Default cap on the number of candidate interpretations `enumerate_models` tries.
pub const DEFAULT_BOUND: u128 = 1 << 24;

/// Cap on the ground instances of a single rule.
const MAX_INSTANCES: u128 = 10_000_000;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("the universe of sort `{0}` is unbounded")]
    Unbounded(String),
    #[error("cannot determine the sort of variable {0}")]
    UnknownSort(String),
    #[error("{0} candidates exceed the bound of {1}")]
    TooLarge(u128, u128),
    #[error("answer is not ground: {0}")]
    NonGround(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Truth {
    True,
    False,
    Undefined,
}

/// A three-valued interpretation: atoms not listed are false.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Interpretation {
    pub true_atoms: BTreeSet<Atom>,
    pub undefined: BTreeSet<Atom>,
}

impl Interpretation {
    pub fn value(&self, a: &Atom) -> Truth {
        if self.true_atoms.contains(a) {
            Truth::True
        } else if self.undefined.contains(a) {
            Truth::Undefined
        } else {
            Truth::False
        }
    }

    pub fn is_total(&self) -> bool {
        self.undefined.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    NonTotal(Vec<Atom>),
    Violated { formula: String, instance: String },
}

impl Verdict {
    pub fn passed(&self) -> bool {
        *self == Verdict::Pass
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => write!(f, "pass"),
            Verdict::NonTotal(atoms) => {
                let atoms: Vec<String> = atoms.iter().map(|a| a.to_string()).collect();
                write!(f, "fail: the definition is not total, undefined: {}", atoms.join(", "))
            }
            Verdict::Violated { formula, instance } if instance.is_empty() => write!(f, "fail: `{}` is false", formula),
            Verdict::Violated { formula, instance } => {
                write!(f, "fail: `{}` is false for the instance `{}`", formula, instance)
            }
        }
    }
}

/// Finite universes per base sort, from the theory's constants and ranges
/// plus the ground arguments of some extra atoms.
#[derive(Clone, Debug)]
pub struct Universes {
    sets: BTreeMap<BaseSort, Option<BTreeSet<Term>>>,
}

impl Universes {
    pub fn new(typed: &TypedTheory, extra: &[Atom]) -> Self {
        let mut sorts: BTreeSet<Sort> = typed.var_sorts.values().cloned().collect();
        sorts.extend(typed.constant_sorts.values().cloned());
        for sig in typed.signatures.values() {
            sorts.extend(sig.arg_sorts.iter().cloned());
        }
        let mut sets = BTreeMap::new();
        for s in sorts {
            sets.entry(s.base.clone()).or_insert_with(|| match herbrand_universe(typed, &s) {
                Universe::Finite(ts) => Some(ts.into_iter().collect::<BTreeSet<_>>()),
                Universe::Unbounded => None,
            });
        }
        for a in extra {
            let Some(sig) = typed.signatures.get(&a.pred_id()) else { continue };
            for (t, s) in a.args.iter().zip(&sig.arg_sorts) {
                if let Some(Some(set)) = sets.get_mut(&s.base) {
                    if t.is_ground() {
                        set.insert(t.simplify_arith());
                    }
                }
            }
        }
        Universes { sets }
    }

    pub fn get(&self, sort: &Sort) -> Result<Vec<Term>, VerifyError> {
        match self.sets.get(&sort.base) {
            Some(Some(set)) => Ok(set.iter().cloned().collect()),
            _ => Err(VerifyError::Unbounded(sort.name.to_string())),
        }
    }
}

/// Sort of `v` from the type checker, or from its argument positions in `scope`.
fn sort_of(typed: &TypedTheory, v: &Var, scope: &Formula) -> Result<Sort, VerifyError> {
    if let Some(s) = typed.var_sorts.get(v) {
        return Ok(s.clone());
    }
    fn find(typed: &TypedTheory, v: &Var, f: &Formula) -> Option<Sort> {
        match f {
            Formula::Atom(a) => {
                let sig = typed.signatures.get(&a.pred_id())?;
                a.args.iter().zip(&sig.arg_sorts).find(|(t, _)| matches!(t, Term::Var(x) if x == v)).map(|(_, s)| s.clone())
            }
            Formula::Clp(c) => c.vars().contains(v).then(Sort::int),
            Formula::Eq(s, t) => ((s.is_arith_op() && s.occurs(v)) || (t.is_arith_op() && t.occurs(v))).then(Sort::int),
            Formula::Not(g) => find(typed, v, g),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                find(typed, v, a).or_else(|| find(typed, v, b))
            }
            Formula::Exists(_, g) | Formula::Forall(_, g) => find(typed, v, g),
            Formula::True | Formula::False => None,
        }
    }
    find(typed, v, scope).ok_or_else(|| VerifyError::UnknownSort(v.to_string()))
}

type Env = BTreeMap<Var, Term>;

fn ground(t: &Term, env: &Env) -> Term {
    match t {
        Term::Var(v) => env.get(v).cloned().unwrap_or_else(|| t.clone()),
        Term::Compound(f, args) => {
            Term::Compound(f.clone(), args.iter().map(|a| ground(a, env)).collect()).simplify_arith()
        }
        _ => t.clone(),
    }
}

fn ground_atom(a: &Atom, env: &Env) -> Atom {
    Atom { pred: a.pred.clone(), args: a.args.iter().map(|t| ground(t, env)).collect() }
}

fn ground_clp(c: &ClpLit, env: &Env) -> Option<bool> {
    let s = Substitution::from_bindings(env.iter().map(|(v, t)| (v.clone(), t.clone())));
    c.apply(&s).eval_ground()
}

/// Every assignment of `vars` over their universes.
fn assignments(
    typed: &TypedTheory,
    universes: &Universes,
    vars: &[Var],
    scope: &Formula,
) -> Result<Vec<Env>, VerifyError> {
    let mut domains = Vec::new();
    let mut total: u128 = 1;
    for v in vars {
        let u = universes.get(&sort_of(typed, v, scope)?)?;
        total = total.saturating_mul(u.len() as u128);
        domains.push(u);
    }
    if total > MAX_INSTANCES {
        return Err(VerifyError::TooLarge(total, MAX_INSTANCES));
    }
    let mut out = vec![Env::new()];
    for (v, dom) in vars.iter().zip(&domains) {
        out = out
            .into_iter()
            .flat_map(|env| {
                dom.iter().map(move |t| {
                    let mut e = env.clone();
                    e.insert(v.clone(), t.clone());
                    e
                })
            })
            .collect();
    }
    Ok(out)
}

/// Ground rule instances `(head, body)`.
fn ground_rules(prog: &Program, universes: &Universes) -> Result<Vec<(Atom, Formula)>, VerifyError> {
    let typed = &prog.typed;
    let mut out = Vec::new();
    for r in &typed.theory.definition.rules {
        let mut vars = BTreeSet::new();
        r.head.collect_vars(&mut vars);
        vars.extend(r.body.free_vars());
        let vars: Vec<Var> = vars.into_iter().collect();
        let scope = Formula::and(Formula::Atom(r.head.clone()), r.body.clone());
        for env in assignments(typed, universes, &vars, &scope)? {
            let s = Substitution::from_bindings(env.iter().map(|(v, t)| (v.clone(), t.clone())));
            out.push((ground_atom(&r.head, &env), r.body.apply(&s)));
        }
    }
    Ok(out)
}

/// Evaluates a ground rule body two-valued: atoms of defined predicates in
/// positive position are looked up in `pos`, in negative position in `neg`.
struct BodyEval<'a> {
    prog: &'a Program,
    universes: &'a Universes,
    open: &'a HashSet<Atom>,
}

impl BodyEval<'_> {
    fn eval(&self, f: &Formula, positive: bool, pos: &HashSet<Atom>, neg: &HashSet<Atom>) -> Result<bool, VerifyError> {
        Ok(match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(a) => {
                let a = ground_atom(a, &Env::new());
                if self.prog.is_defined(&a.pred_id()) {
                    if positive { pos.contains(&a) } else { neg.contains(&a) }
                } else {
                    self.open.contains(&a)
                }
            }
            Formula::Eq(s, t) => s.simplify_arith() == t.simplify_arith(),
            Formula::Clp(c) => c.eval_ground().unwrap_or(false),
            Formula::Not(g) => !self.eval(g, !positive, pos, neg)?,
            Formula::And(a, b) => self.eval(a, positive, pos, neg)? && self.eval(b, positive, pos, neg)?,
            Formula::Or(a, b) => self.eval(a, positive, pos, neg)? || self.eval(b, positive, pos, neg)?,
            Formula::Implies(a, b) => !self.eval(a, !positive, pos, neg)? || self.eval(b, positive, pos, neg)?,
            Formula::Exists(vs, g) | Formula::Forall(vs, g) => {
                let want = matches!(f, Formula::Exists(..));
                for env in assignments(&self.prog.typed, self.universes, vs, g)? {
                    let s = Substitution::from_bindings(env);
                    if self.eval(&g.apply(&s), positive, pos, neg)? == want {
                        return Ok(want);
                    }
                }
                !want
            }
        })
    }

    /// Least fixpoint of the rules with negative lookups fixed to `neg`.
    fn lfp(&self, rules: &[(Atom, Formula)], neg: &HashSet<Atom>) -> Result<HashSet<Atom>, VerifyError> {
        let mut k: HashSet<Atom> = HashSet::new();
        loop {
            let mut next = k.clone();
            for (head, body) in rules {
                if !next.contains(head) && self.eval(body, true, &k, neg)? {
                    next.insert(head.clone());
                }
            }
            debug_assert!(k.is_subset(&next), "inner iteration must be inflationary");
            if next.len() == k.len() {
                return Ok(k);
            }
            k = next;
        }
    }
}

/// The well-founded model of the definition with the open predicates fixed
/// by `open_facts`, by alternating fixpoint over the ground rules.
pub fn wfm(prog: &Program, open_facts: &[Atom], universes: &Universes) -> Result<Interpretation, VerifyError> {
    let rules = ground_rules(prog, universes)?;
    wfm_ground(prog, &rules, open_facts, universes)
}

fn wfm_ground(
    prog: &Program,
    rules: &[(Atom, Formula)],
    open_facts: &[Atom],
    universes: &Universes,
) -> Result<Interpretation, VerifyError> {
    let open: HashSet<Atom> = open_facts.iter().map(|a| ground_atom(a, &Env::new())).collect();
    let ev = BodyEval { prog, universes, open: &open };
    let mut under = HashSet::new();
    loop {
        let over = ev.lfp(rules, &under)?;
        let next = ev.lfp(rules, &over)?;
        if next == under {
            let mut true_atoms: BTreeSet<Atom> = under.iter().cloned().collect();
            let undefined = over.difference(&under).cloned().collect();
            true_atoms.extend(open);
            return Ok(Interpretation { true_atoms, undefined });
        }
        under = next;
    }
}

/// A total model for evaluating axioms, indexed by predicate for joins.
struct Model<'a> {
    typed: &'a TypedTheory,
    universes: &'a Universes,
    atoms: HashSet<Atom>,
    by_pred: HashMap<PredId, Vec<Atom>>,
}

impl<'a> Model<'a> {
    fn new(typed: &'a TypedTheory, universes: &'a Universes, atoms: impl IntoIterator<Item = Atom>) -> Self {
        let atoms: HashSet<Atom> = atoms.into_iter().collect();
        let mut by_pred: HashMap<PredId, Vec<Atom>> = HashMap::new();
        for a in &atoms {
            by_pred.entry(a.pred_id()).or_default().push(a.clone());
        }
        Model { typed, universes, atoms, by_pred }
    }

    fn holds(&self, f: &Formula, env: &Env) -> Result<bool, VerifyError> {
        Ok(match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(a) => self.atoms.contains(&ground_atom(a, env)),
            Formula::Eq(s, t) => ground(s, env) == ground(t, env),
            Formula::Clp(c) => ground_clp(c, env).unwrap_or(false),
            Formula::Not(g) => !self.holds(g, env)?,
            Formula::And(a, b) => self.holds(a, env)? && self.holds(b, env)?,
            Formula::Or(a, b) => self.holds(a, env)? || self.holds(b, env)?,
            Formula::Implies(a, b) => !self.holds(a, env)? || self.holds(b, env)?,
            Formula::Exists(vs, g) => self.find(vs, g.clone().conjuncts(), env, g)?.is_some(),
            Formula::Forall(vs, g) => self.find(vs, counter_conjuncts(g), env, g)?.is_none(),
        })
    }

    /// An extension of `env` over `vars` satisfying all conjuncts.
    fn find(&self, vars: &[Var], conjs: Vec<Formula>, env: &Env, scope: &Formula) -> Result<Option<Env>, VerifyError> {
        let mut rest = Vec::new();
        for c in conjs {
            if c.free_vars().iter().all(|v| env.contains_key(v) || !vars.contains(v)) {
                if !self.holds(&c, env)? {
                    return Ok(None);
                }
            } else {
                rest.push(c);
            }
        }
        if rest.is_empty() {
            return Ok(Some(env.clone()));
        }
        if let Some(k) = rest.iter().position(|c| matches!(c, Formula::Atom(a) if joinable(a, env))) {
            let Formula::Atom(pattern) = rest.remove(k) else { unreachable!() };
            for cand in self.by_pred.get(&pattern.pred_id()).map(Vec::as_slice).unwrap_or(&[]) {
                let mut next = env.clone();
                if match_args(&pattern.args, &cand.args, &mut next) {
                    if let Some(found) = self.find(vars, rest.clone(), &next, scope)? {
                        return Ok(Some(found));
                    }
                }
            }
            return Ok(None);
        }
        let pending: BTreeSet<Var> = rest.iter().flat_map(|c| c.free_vars()).collect();
        let v = vars.iter().find(|v| !env.contains_key(v) && pending.contains(v)).expect("an unbound variable").clone();
        for t in self.universes.get(&sort_of(self.typed, &v, scope)?)? {
            let mut next = env.clone();
            next.insert(v.clone(), t);
            if let Some(found) = self.find(vars, rest.clone(), &next, scope)? {
                return Ok(Some(found));
            }
        }
        Ok(None)
    }
}

/// Conjuncts whose satisfying assignments are the counterexamples of `g`.
fn counter_conjuncts(g: &Formula) -> Vec<Formula> {
    match g {
        Formula::Implies(a, b) => {
            let mut out = (**a).clone().conjuncts();
            out.push(Formula::not((**b).clone()));
            out
        }
        _ => vec![Formula::not(g.clone())],
    }
}

fn joinable(a: &Atom, env: &Env) -> bool {
    fn ok(t: &Term, env: &Env) -> bool {
        match t {
            Term::Compound(_, args) if !t.is_arith_op() => args.iter().all(|a| ok(a, env)),
            Term::Compound(..) => t.vars().iter().all(|v| env.contains_key(v)),
            _ => true,
        }
    }
    a.args.iter().all(|t| ok(t, env))
}

fn match_args(pattern: &[Term], ground_args: &[Term], env: &mut Env) -> bool {
    pattern.iter().zip(ground_args).all(|(p, g)| match_term(p, g, env))
}

fn match_term(p: &Term, g: &Term, env: &mut Env) -> bool {
    match p {
        Term::Var(v) => match env.get(v) {
            Some(t) => t == g,
            None => {
                env.insert(v.clone(), g.clone());
                true
            }
        },
        Term::Compound(f, args) if !p.is_arith_op() => match g {
            Term::Compound(h, gargs) if f == h && args.len() == gargs.len() => match_args(args, gargs, env),
            _ => false,
        },
        _ => ground(p, env) == *g,
    }
}

/// Checks a candidate Δ: totality of the well-founded model, then every
/// axiom, then the (existentially closed) query if one is given.
pub fn check_delta(prog: &Program, delta: &[Atom], query: Option<&Formula>) -> Result<Verdict, VerifyError> {
    if let Some(a) = delta.iter().find(|a| !a.is_ground()) {
        return Err(VerifyError::NonGround(a.to_string()));
    }
    let mut extra: Vec<Atom> = delta.to_vec();
    if let Some(q) = query {
        collect_atoms(q, &mut extra);
    }
    let universes = Universes::new(&prog.typed, &extra);
    let interp = wfm(prog, delta, &universes)?;
    check_in(prog, &universes, interp, query)
}

fn check_in(
    prog: &Program,
    universes: &Universes,
    interp: Interpretation,
    query: Option<&Formula>,
) -> Result<Verdict, VerifyError> {
    if !interp.is_total() {
        return Ok(Verdict::NonTotal(interp.undefined.into_iter().collect()));
    }
    let model = Model::new(&prog.typed, universes, interp.true_atoms);
    let env = Env::new();
    let mut formulas: Vec<Formula> = prog.axioms.clone();
    if let Some(q) = query {
        let free: Vec<Var> = q.free_vars().into_iter().collect();
        formulas.push(if free.is_empty() { q.clone() } else { Formula::exists(free, q.clone()) });
    }
    for f in &formulas {
        if let Formula::Forall(vs, g) = f {
            if let Some(found) = model.find(vs, counter_conjuncts(g), &env, g)? {
                let s = Substitution::from_bindings(found);
                return Ok(Verdict::Violated { formula: f.to_string(), instance: g.apply(&s).to_string() });
            }
        } else if !model.holds(f, &env)? {
            return Ok(Verdict::Violated { formula: f.to_string(), instance: String::new() });
        }
    }
    Ok(Verdict::Pass)
}

fn collect_atoms(f: &Formula, out: &mut Vec<Atom>) {
    match f {
        Formula::Atom(a) => out.push(a.clone()),
        Formula::Not(g) | Formula::Exists(_, g) | Formula::Forall(_, g) => collect_atoms(g, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            collect_atoms(a, out);
            collect_atoms(b, out);
        }
        _ => {}
    }
}

/// Checks an engine answer against the theory and the query instantiated
/// with the answer's bindings.
pub fn check_answer(prog: &Program, query: &Formula, answer: &Answer) -> Result<Verdict, VerifyError> {
    if !answer.labeled {
        return Err(VerifyError::NonGround("the constraint store was not labeled".into()));
    }
    let bindings = query.free_vars().into_iter().filter_map(|v| {
        answer.substitution.iter().find(|(name, _)| name == v.name()).map(|(_, t)| (v.clone(), t.clone()))
    });
    let q = query.apply(&Substitution::from_bindings(bindings));
    check_delta(prog, &answer.delta, Some(&q))
}

/// Every Δ over the open predicates whose well-founded model is total and
/// satisfies the axioms, as sorted atom lists. Functions declared with `ob`
/// range over injective maps instead of arbitrary relations.
pub fn enumerate_models(prog: &Program, bound: u128) -> Result<Vec<Vec<Atom>>, VerifyError> {
    let typed = &prog.typed;
    let universes = Universes::new(typed, &[]);
    let rules = ground_rules(prog, &universes)?;
    let open = prog.open_predicates();
    let depends_on_open = typed.theory.definition.rules.iter().any(|r| {
        let mut ps = BTreeSet::new();
        crate::syntax::collect_preds(&r.body, &mut ps);
        ps.iter().any(|p| open.contains(p))
    });
    let base = wfm_ground(prog, &rules, &[], &universes)?;

    let mut functions = Vec::new();
    let mut handled = BTreeSet::new();
    if !depends_on_open {
        for decl in &typed.theory.ob_decls {
            let pid = PredId::new(&decl.function, 2);
            let Some(sig) = typed.signatures.get(&pid) else { continue };
            let holds = |p: &str, t: &Term| base.value(&Atom::new(p, vec![t.clone()])) == Truth::True;
            let xs = universes.get(&sig.arg_sorts[0])?;
            let ys = universes.get(&sig.arg_sorts[1])?;
            let choices: Vec<(Term, Vec<Option<Term>>)> = xs
                .iter()
                .map(|x| {
                    let mut c: Vec<Option<Term>> = Vec::new();
                    if !holds(&decl.domain, x) {
                        c.push(None);
                    }
                    c.extend(ys.iter().filter(|y| !holds(&decl.domain, x) || holds(&decl.range, y)).cloned().map(Some));
                    (x.clone(), c)
                })
                .collect();
            functions.push((decl.function.to_string(), choices));
            handled.insert(pid);
        }
    }

    let mut free_atoms = Vec::new();
    for p in open.iter().filter(|p| !handled.contains(*p)) {
        let Some(sig) = typed.signatures.get(p) else { continue };
        let mut tuples: Vec<Vec<Term>> = vec![Vec::new()];
        for s in &sig.arg_sorts {
            let u = universes.get(s)?;
            tuples = tuples.into_iter().flat_map(|t| u.iter().map(move |x| [t.clone(), vec![x.clone()]].concat())).collect();
        }
        free_atoms.extend(tuples.into_iter().map(|args| Atom::new(&p.name, args)));
    }

    let mut size: u128 = if free_atoms.len() >= 128 { u128::MAX } else { 1u128 << free_atoms.len() };
    for (_, choices) in &functions {
        for (_, c) in choices {
            size = size.saturating_mul(c.len() as u128);
        }
    }
    if size > bound {
        return Err(VerifyError::TooLarge(size, bound));
    }

    let mut fn_tables: Vec<Vec<Atom>> = vec![Vec::new()];
    for (name, choices) in &functions {
        let mut tables = Vec::new();
        injective_maps(name, choices, 0, &mut Vec::new(), &mut BTreeSet::new(), &mut tables);
        fn_tables = fn_tables
            .into_iter()
            .flat_map(|prefix| tables.iter().map(move |t| [prefix.clone(), t.clone()].concat()))
            .collect();
    }

    let mut models = Vec::new();
    for table in &fn_tables {
        for mask in 0u128..(1u128 << free_atoms.len()) {
            let mut delta = table.clone();
            delta.extend(free_atoms.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, a)| a.clone()));
            let interp = if depends_on_open {
                wfm_ground(prog, &rules, &delta, &universes)?
            } else {
                let mut i = base.clone();
                i.true_atoms.extend(delta.iter().cloned());
                i
            };
            if check_in(prog, &universes, interp, None)?.passed() {
                delta.sort();
                models.push(delta);
            }
        }
    }
    models.sort();
    Ok(models)
}

fn injective_maps(
    name: &str,
    choices: &[(Term, Vec<Option<Term>>)],
    i: usize,
    current: &mut Vec<Atom>,
    used: &mut BTreeSet<Term>,
    out: &mut Vec<Vec<Atom>>,
) {
    if i == choices.len() {
        out.push(current.clone());
        return;
    }
    let (x, opts) = &choices[i];
    for o in opts {
        match o {
            None => injective_maps(name, choices, i + 1, current, used, out),
            Some(y) if !used.contains(y) => {
                used.insert(y.clone());
                current.push(Atom::new(name, vec![x.clone(), y.clone()]));
                injective_maps(name, choices, i + 1, current, used, out);
                current.pop();
                used.remove(y);
            }
            Some(_) => {}
        }
    }
}
