//! Many-sorted type checking and inference.
//!
//! Sorts are inferred by union-find over predicate argument positions,
//! variables, constants and function argument positions. Declared
//! signatures seed the classes; arithmetic and constraint literals force
//! integer sorts. `type_instance(a, b)` makes `a` a plain alias of `b`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::formula::{Atom, ClpLit, Formula, PredId};
use crate::syntax::{Diagnostic, Pos, Query, Theory, TypeDecl};
use crate::term::{Symbol, Term, Var};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BaseSort {
    Int,
    Symbolic(Symbol),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sort {
    pub name: Symbol,
    pub base: BaseSort,
}

impl Sort {
    pub fn int() -> Sort {
        Sort { name: Arc::from("int"), base: BaseSort::Int }
    }

    pub fn is_int(&self) -> bool {
        self.base == BaseSort::Int
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    Declared,
    Inferred,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    pub pred: PredId,
    pub arg_sorts: Vec<Sort>,
    pub origin: Origin,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pred.name)?;
        if !self.arg_sorts.is_empty() {
            let sorts: Vec<String> = self.arg_sorts.iter().map(|s| s.to_string()).collect();
            write!(f, "({})", sorts.join(","))?;
        }
        write!(f, "::pred.")
    }
}

#[derive(Clone, Debug)]
pub struct TypedTheory {
    pub theory: Theory,
    pub signatures: BTreeMap<PredId, Signature>,
    pub var_sorts: BTreeMap<Var, Sort>,
    pub constant_sorts: BTreeMap<Symbol, Sort>,
    pub warnings: Vec<Diagnostic>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Universe {
    Finite(Vec<Term>),
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Node {
    Arg(PredId, usize),
    Var(Var),
    Const(Symbol),
    /// Argument `i` of functor `f/n`; `i == n` is the result.
    Func(Symbol, usize, usize),
}

#[derive(Clone, Debug, Default)]
struct Class {
    int: bool,
    symbolic: Option<Symbol>,
    /// First declared sort name seen in the class.
    name: Option<Symbol>,
    consts: BTreeSet<Symbol>,
}

struct Checker<'a> {
    theory: &'a Theory,
    nodes: HashMap<Node, usize>,
    parent: Vec<usize>,
    classes: Vec<Class>,
    errors: Vec<Diagnostic>,
    /// Classes already reported as clashing, to avoid cascades.
    reported: BTreeSet<usize>,
    aliases: BTreeMap<Symbol, Symbol>,
}

impl<'a> Checker<'a> {
    fn new(theory: &'a Theory) -> Self {
        let mut aliases = BTreeMap::new();
        for d in &theory.type_decls {
            if let TypeDecl::Instance { alias, base, .. } = d {
                aliases.insert(alias.clone(), base.clone());
            }
        }
        Checker {
            theory,
            nodes: HashMap::new(),
            parent: Vec::new(),
            classes: Vec::new(),
            errors: Vec::new(),
            reported: BTreeSet::new(),
            aliases,
        }
    }

    fn node(&mut self, key: Node) -> usize {
        if let Some(&n) = self.nodes.get(&key) {
            return n;
        }
        let n = self.fresh();
        self.nodes.insert(key, n);
        n
    }

    fn fresh(&mut self) -> usize {
        let n = self.parent.len();
        self.parent.push(n);
        self.classes.push(Class::default());
        n
    }

    fn find(&mut self, mut n: usize) -> usize {
        while self.parent[n] != n {
            self.parent[n] = self.parent[self.parent[n]];
            n = self.parent[n];
        }
        n
    }

    fn union(&mut self, a: usize, b: usize, pos: Pos, what: &dyn Fn() -> String) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        let cb = std::mem::take(&mut self.classes[rb]);
        self.parent[rb] = ra;
        let ca = &mut self.classes[ra];
        ca.int |= cb.int;
        ca.consts.extend(cb.consts);
        if ca.name.is_none() {
            ca.name = cb.name;
        }
        let clash = match (&ca.symbolic, &cb.symbolic) {
            (Some(x), Some(y)) if x != y => Some(format!("sorts `{}` and `{}`", x, y)),
            (None, Some(y)) => {
                ca.symbolic = Some(y.clone());
                None
            }
            _ => None,
        };
        self.check(ra, pos, clash, what);
    }

    fn check(&mut self, r: usize, pos: Pos, clash: Option<String>, what: &dyn Fn() -> String) {
        let c = &self.classes[r];
        let clash = clash.or_else(|| {
            if let (true, Some(sym)) = (c.int, &c.symbolic) {
                Some(format!("sorts `int` and `{}`", sym))
            } else if c.int && !c.consts.is_empty() {
                Some(format!("sort `int` and constant `{}`", c.consts.iter().next().unwrap()))
            } else {
                None
            }
        });
        if let Some(clash) = clash {
            if self.reported.insert(r) {
                self.errors.push(Diagnostic::error(pos, format!("sort clash in {}: {}", what(), clash)));
            }
        }
    }

    fn mark_int(&mut self, n: usize, pos: Pos, what: &dyn Fn() -> String) {
        let r = self.find(n);
        self.classes[r].int = true;
        self.check(r, pos, None, what);
    }

    /// Resolves an alias chain to `(is_int, base name)`.
    fn resolve_sort(&mut self, name: &Symbol, pos: Pos) -> Option<(bool, Symbol)> {
        let mut cur = name.clone();
        let mut seen = BTreeSet::new();
        while let Some(next) = self.aliases.get(&cur) {
            if !seen.insert(cur.clone()) {
                self.errors.push(Diagnostic::error(pos, format!("cyclic type_instance chain through `{}`", name)));
                return None;
            }
            cur = next.clone();
        }
        Some((&*cur == "int", cur))
    }

    fn term(&mut self, t: &Term, pos: Pos, what: &dyn Fn() -> String) -> usize {
        match t {
            Term::Var(v) => self.node(Node::Var(v.clone())),
            Term::Int(_) => {
                let n = self.fresh();
                self.classes[n].int = true;
                n
            }
            Term::Atom(c) => {
                let n = self.node(Node::Const(c.clone()));
                let r = self.find(n);
                self.classes[r].consts.insert(c.clone());
                self.check(r, pos, None, what);
                n
            }
            Term::Compound(_, args) if t.is_arith_op() => {
                let n = self.fresh();
                self.classes[n].int = true;
                for a in args {
                    let m = self.term(a, pos, what);
                    self.union(n, m, pos, what);
                }
                n
            }
            Term::Compound(f, args) => {
                let arity = args.len();
                for (i, a) in args.iter().enumerate() {
                    let m = self.term(a, pos, what);
                    let slot = self.node(Node::Func(f.clone(), arity, i));
                    self.union(slot, m, pos, what);
                }
                self.node(Node::Func(f.clone(), arity, arity))
            }
        }
    }

    fn atom(&mut self, a: &Atom, pos: Pos) {
        let pid = a.pred_id();
        for (i, arg) in a.args.iter().enumerate() {
            let what = || format!("argument {} of {}", i + 1, pid);
            let m = self.term(arg, pos, &what);
            let slot = self.node(Node::Arg(pid.clone(), i));
            self.union(slot, m, pos, &what);
        }
    }

    fn clp(&mut self, c: &ClpLit, pos: Pos) {
        let what = || format!("constraint `{}`", c);
        let nodes: Vec<usize> = c.terms().into_iter().map(|t| self.term(t, pos, &what)).collect();
        for n in nodes {
            self.mark_int(n, pos, &what);
        }
    }

    fn formula(&mut self, f: &Formula, pos: Pos) {
        match f {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => self.atom(a, pos),
            Formula::Eq(s, t) => {
                let what = || format!("equality `{} = {}`", s, t);
                let a = self.term(s, pos, &what);
                let b = self.term(t, pos, &what);
                self.union(a, b, pos, &what);
            }
            Formula::Clp(c) => self.clp(c, pos),
            Formula::Not(g) | Formula::Exists(_, g) | Formula::Forall(_, g) => self.formula(g, pos),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                self.formula(a, pos);
                self.formula(b, pos);
            }
        }
    }

    fn declarations(&mut self) {
        let theory = self.theory;
        for d in &theory.type_decls {
            if let TypeDecl::Signature { pred, sorts, pos } = d {
                for (i, s) in sorts.iter().enumerate() {
                    let Some((is_int, base)) = self.resolve_sort(s, *pos) else { continue };
                    let n = self.node(Node::Arg(pred.clone(), i));
                    let r = self.find(n);
                    let what = || format!("signature of {}", pred);
                    if self.classes[r].name.is_none() {
                        self.classes[r].name = Some(s.clone());
                    }
                    if is_int {
                        self.mark_int(r, *pos, &what);
                    } else {
                        let m = self.fresh();
                        self.classes[m].symbolic = Some(base);
                        self.union(r, m, *pos, &what);
                    }
                }
            }
        }
        for o in &theory.ob_decls {
            let f0 = self.node(Node::Arg(PredId { name: o.function.clone(), arity: 2 }, 0));
            let f1 = self.node(Node::Arg(PredId { name: o.function.clone(), arity: 2 }, 1));
            let d = self.node(Node::Arg(PredId { name: o.domain.clone(), arity: 1 }, 0));
            let r = self.node(Node::Arg(PredId { name: o.range.clone(), arity: 1 }, 0));
            let what = || format!("ob declaration for `{}`", o.function);
            self.union(f0, d, o.pos, &what);
            self.union(f1, r, o.pos, &what);
        }
    }

    fn body(&mut self) {
        let theory = self.theory;
        for r in &theory.definition.rules {
            self.atom(&r.head, r.pos);
            self.formula(&r.body, r.pos);
        }
        for a in &theory.fol_axioms {
            self.formula(&a.formula, a.pos);
        }
    }

    fn arity_clashes(&mut self, extra: &BTreeSet<PredId>) {
        let mut by_name: BTreeMap<Symbol, BTreeSet<usize>> = BTreeMap::new();
        for p in self.theory.predicates().iter().chain(extra) {
            by_name.entry(p.name.clone()).or_default().insert(p.arity);
        }
        for (name, arities) in by_name {
            if arities.len() > 1 {
                let list: Vec<String> = arities.iter().map(|a| a.to_string()).collect();
                self.errors.push(Diagnostic::error(
                    Pos::default(),
                    format!("arity clash: `{}` is used with arities {}", name, list.join(" and ")),
                ));
            }
        }
    }
}

/// Names every class: declared name, `int`, or a generated symbolic sort.
struct Namer {
    names: BTreeMap<usize, Sort>,
    next_object: usize,
}

impl Namer {
    fn sort_of(&mut self, ck: &mut Checker<'_>, n: usize) -> Option<Sort> {
        let r = ck.find(n);
        if let Some(s) = self.names.get(&r) {
            return Some(s.clone());
        }
        let c = &ck.classes[r];
        let sort = if c.int {
            Sort { name: c.name.clone().unwrap_or_else(|| Arc::from("int")), base: BaseSort::Int }
        } else if let Some(base) = &c.symbolic {
            Sort { name: c.name.clone().unwrap_or_else(|| base.clone()), base: BaseSort::Symbolic(base.clone()) }
        } else if !c.consts.is_empty() {
            self.next_object += 1;
            let name: Symbol = if self.next_object == 1 {
                Arc::from("object")
            } else {
                Arc::from(format!("object{}", self.next_object).as_str())
            };
            Sort { name: name.clone(), base: BaseSort::Symbolic(name) }
        } else {
            return None;
        };
        self.names.insert(r, sort.clone());
        Some(sort)
    }
}

/// Checks a theory and infers a signature for every predicate.
pub fn check_and_infer(theory: &Theory) -> Result<TypedTheory, Vec<Diagnostic>> {
    let mut ck = Checker::new(theory);
    ck.declarations();
    ck.body();
    ck.arity_clashes(&BTreeSet::new());
    let declared: BTreeSet<PredId> = theory
        .type_decls
        .iter()
        .filter_map(|d| match d {
            TypeDecl::Signature { pred, .. } => Some(pred.clone()),
            _ => None,
        })
        .collect();

    let mut namer = Namer { names: BTreeMap::new(), next_object: 0 };
    let mut signatures = BTreeMap::new();
    for p in theory.predicates() {
        let mut arg_sorts = Vec::new();
        for i in 0..p.arity {
            let n = ck.node(Node::Arg(p.clone(), i));
            match namer.sort_of(&mut ck, n) {
                Some(s) => arg_sorts.push(s),
                None => ck.errors.push(Diagnostic::error(
                    Pos::default(),
                    format!("cannot infer the sort of argument {} of {}: no constraining occurrence", i + 1, p),
                )),
            }
        }
        if arg_sorts.len() == p.arity {
            let origin = if declared.contains(&p) { Origin::Declared } else { Origin::Inferred };
            signatures.insert(p.clone(), Signature { pred: p, arg_sorts, origin });
        }
    }
    if !ck.errors.is_empty() {
        let mut errors = ck.errors;
        errors.sort_by_key(|d| d.pos);
        return Err(errors);
    }

    let mut var_sorts = BTreeMap::new();
    let mut constant_sorts = BTreeMap::new();
    let keys: Vec<Node> = ck.nodes.keys().cloned().collect();
    let mut keyed: Vec<(Node, usize)> = keys.into_iter().map(|k| (k.clone(), ck.nodes[&k])).collect();
    keyed.sort_by_key(|(_, n)| *n);
    for (key, n) in keyed {
        match key {
            Node::Var(v) => {
                if let Some(s) = namer.sort_of(&mut ck, n) {
                    var_sorts.insert(v, s);
                }
            }
            Node::Const(c) => {
                if let Some(s) = namer.sort_of(&mut ck, n) {
                    constant_sorts.insert(c, s);
                }
            }
            _ => {}
        }
    }
    Ok(TypedTheory { theory: theory.clone(), signatures, var_sorts, constant_sorts, warnings: theory.warnings.clone() })
}

/// Checks a query against a typed theory: sort clashes and arity clashes.
pub fn check_query(typed: &TypedTheory, query: &Query) -> Result<(), Vec<Diagnostic>> {
    let mut ck = Checker::new(&typed.theory);
    ck.declarations();
    ck.body();
    let before = ck.errors.len();
    ck.formula(&query.formula, Pos { line: 1, col: 1 });
    let mut extra = BTreeSet::new();
    crate::syntax::collect_preds(&query.formula, &mut extra);
    ck.arity_clashes(&extra);
    let errors: Vec<Diagnostic> = ck.errors.split_off(before);
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors)
    }
}

/// The finite set of ground terms of a sort, or `Unbounded`.
///
/// Integer sorts range over the union of all `X in L..U` ranges of the
/// theory together with the integer constants used as predicate arguments.
/// A bound that is a variable is resolved through atoms of the same rule or
/// axiom whose predicate is defined by ground facts only.
pub fn herbrand_universe(typed: &TypedTheory, sort: &Sort) -> Universe {
    match &sort.base {
        BaseSort::Int => int_universe(&typed.theory),
        BaseSort::Symbolic(_) => {
            let consts: Vec<Term> = typed
                .constant_sorts
                .iter()
                .filter(|(_, s)| s.base == sort.base)
                .map(|(c, _)| Term::Atom(c.clone()))
                .collect();
            Universe::Finite(consts)
        }
    }
}

fn int_universe(theory: &Theory) -> Universe {
    let facts = ground_fact_values(theory);
    let mut values = BTreeSet::new();
    let mut any_range = false;
    let heads: Vec<Formula> = theory.definition.rules.iter().map(|r| Formula::Atom(r.head.clone())).collect();
    let mut formulas: Vec<&Formula> = theory.fol_axioms.iter().map(|a| &a.formula).collect();
    formulas.extend(theory.definition.rules.iter().map(|r| &r.body));
    formulas.extend(heads.iter());
    for f in formulas {
        let mut ranges = Vec::new();
        collect_ranges(f, &mut ranges);
        for (lo, hi) in ranges {
            any_range = true;
            let lo = resolve_bound(&lo, f, &facts, true);
            let hi = resolve_bound(&hi, f, &facts, false);
            match (lo, hi) {
                (Some(lo), Some(hi)) => values.extend(lo..=hi),
                _ => return Universe::Unbounded,
            }
        }
        collect_int_args(f, &mut values);
    }
    if !any_range {
        return Universe::Unbounded;
    }
    Universe::Finite(values.into_iter().map(Term::Int).collect())
}

fn collect_ranges(f: &Formula, out: &mut Vec<(Term, Term)>) {
    match f {
        Formula::Clp(ClpLit::In { lo, hi, .. }) => out.push((lo.clone(), hi.clone())),
        Formula::Not(g) | Formula::Exists(_, g) | Formula::Forall(_, g) => collect_ranges(g, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            collect_ranges(a, out);
            collect_ranges(b, out);
        }
        _ => {}
    }
}

fn collect_int_args(f: &Formula, out: &mut BTreeSet<i64>) {
    match f {
        Formula::Atom(a) => out.extend(a.args.iter().filter_map(|t| match t {
            Term::Int(n) => Some(*n),
            _ => None,
        })),
        Formula::Eq(s, t) => out.extend([s, t].iter().filter_map(|t| match t {
            Term::Int(n) => Some(*n),
            _ => None,
        })),
        Formula::Not(g) | Formula::Exists(_, g) | Formula::Forall(_, g) => collect_int_args(g, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            collect_int_args(a, out);
            collect_int_args(b, out);
        }
        _ => {}
    }
}

/// For predicates defined only by ground integer facts: the values at each
/// argument position.
fn ground_fact_values(theory: &Theory) -> BTreeMap<(PredId, usize), Vec<i64>> {
    let mut out: BTreeMap<(PredId, usize), Vec<i64>> = BTreeMap::new();
    for p in &theory.definition.defined {
        let rules: Vec<_> = theory.definition.rules_for(p).collect();
        let all_facts = rules.iter().all(|r| r.body == Formula::True && r.head.is_ground());
        if !all_facts {
            continue;
        }
        for i in 0..p.arity {
            let vals: Option<Vec<i64>> = rules.iter().map(|r| r.head.args[i].eval_int()).collect();
            if let Some(vals) = vals {
                out.insert((p.clone(), i), vals);
            }
        }
    }
    out
}

fn resolve_bound(
    t: &Term,
    context: &Formula,
    facts: &BTreeMap<(PredId, usize), Vec<i64>>,
    lower: bool,
) -> Option<i64> {
    if let Some(n) = t.eval_int() {
        return Some(n);
    }
    let v = t.as_var()?;
    let mut atoms = Vec::new();
    collect_atoms(context, &mut atoms);
    let mut best: Option<i64> = None;
    for a in atoms {
        for (i, arg) in a.args.iter().enumerate() {
            if arg.as_var() != Some(v) {
                continue;
            }
            if let Some(vals) = facts.get(&(a.pred_id(), i)) {
                let pick = if lower { vals.iter().min() } else { vals.iter().max() };
                if let Some(&x) = pick {
                    best = Some(match best {
                        None => x,
                        Some(b) if lower => b.min(x),
                        Some(b) => b.max(x),
                    });
                }
            }
        }
    }
    best
}

fn collect_atoms<'f>(f: &'f Formula, out: &mut Vec<&'f Atom>) {
    match f {
        Formula::Atom(a) => out.push(a),
        Formula::Not(g) | Formula::Exists(_, g) | Formula::Forall(_, g) => collect_atoms(g, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            collect_atoms(a, out);
            collect_atoms(b, out);
        }
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_query, parse_theory};

    const QUEENS: &str = "
        type_instance(pos,int).
        has_position(pos,pos)::pred.
        dom(X) <- dim(N), X in 1..N.
        dim(8) <- true.
        abducible(has_position(_,_)).
        fol forall(Q1,Q2,P1,P2)$ has_position(Q1,P1), has_position(Q2,P2), Q1 < Q2
            => P1 \\= P2, Q1 + P1 \\= Q2 + P2, Q1 - P1 \\= Q2 - P2.
    ";

    fn typed(src: &str) -> Result<TypedTheory, Vec<Diagnostic>> {
        check_and_infer(&parse_theory(src).unwrap())
    }

    #[test]
    fn infers_int_for_dom() {
        let t = typed(QUEENS).unwrap();
        let dom = &t.signatures[&PredId::new("dom", 1)];
        assert_eq!(dom.origin, Origin::Inferred);
        assert!(dom.arg_sorts[0].is_int());
        let hp = &t.signatures[&PredId::new("has_position", 2)];
        assert_eq!(hp.origin, Origin::Declared);
        assert_eq!(hp.arg_sorts[0].name.as_ref(), "pos");
        assert!(hp.arg_sorts[0].is_int());
    }

    #[test]
    fn queens_universe() {
        let t = typed(QUEENS).unwrap();
        let pos = t.signatures[&PredId::new("has_position", 2)].arg_sorts[0].clone();
        let expected: Vec<Term> = (1..=8).map(Term::Int).collect();
        assert_eq!(herbrand_universe(&t, &pos), Universe::Finite(expected));
    }

    #[test]
    fn unbounded_int() {
        let t = typed("p(int)::pred.\nabducible(p(_)).\nfol forall(X)$ p(X) => X > 0.").unwrap();
        assert_eq!(herbrand_universe(&t, &Sort::int()), Universe::Unbounded);
    }

    #[test]
    fn constants_universe() {
        let t = typed("abducible(likes(_,_)).\nfol likes(mary,bob).\nfol likes(bob,mary).").unwrap();
        let s = &t.signatures[&PredId::new("likes", 2)].arg_sorts[0];
        assert_eq!(s.name.as_ref(), "object");
        assert_eq!(herbrand_universe(&t, s), Universe::Finite(vec![Term::atom("bob"), Term::atom("mary")]));
    }

    #[test]
    fn constant_at_int_clashes() {
        let errs = typed("p(int)::pred.\np(a).").unwrap_err();
        assert!(errs[0].message.contains("sort clash"), "{:?}", errs);
    }

    #[test]
    fn symbolic_clash() {
        let errs = typed("p(person)::pred.\nq(city)::pred.\nabducible(p(_)).\nabducible(q(_)).\nfol forall(X)$ p(X) => q(X).")
            .unwrap_err();
        assert!(errs[0].message.contains("person") && errs[0].message.contains("city"));
    }

    #[test]
    fn arity_clash() {
        let errs = typed("p(a).\nq <- p(a, b).").unwrap_err();
        assert!(errs.iter().any(|e| e.message.contains("arity clash")));
    }

    #[test]
    fn unresolvable() {
        let errs = typed("abducible(p(_)).\nq <- p(X).").unwrap_err();
        assert!(errs[0].message.contains("p/1"));
    }

    #[test]
    fn idempotent_and_declarable() {
        let t = typed(QUEENS).unwrap();
        let again = check_and_infer(&t.theory).unwrap();
        assert_eq!(t.signatures, again.signatures);
        // Adding the inferred signatures as declarations still checks.
        let mut src = String::from(QUEENS);
        for s in t.signatures.values().filter(|s| s.origin == Origin::Inferred) {
            src.push_str(&format!("\n{}", s));
        }
        let declared = typed(&src).unwrap();
        assert!(declared.signatures.values().all(|s| s.origin == Origin::Declared));
    }

    #[test]
    fn query_clash() {
        let t = typed(QUEENS).unwrap();
        assert!(check_query(&t, &parse_query("has_position(1, P), P > 4").unwrap()).is_ok());
        assert!(check_query(&t, &parse_query("has_position(a, P)").unwrap()).is_err());
    }
}
