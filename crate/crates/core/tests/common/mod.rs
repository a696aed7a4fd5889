//! Helpers and property checks shared by the `properties` and `acceptance`
//! test targets. Every check returns `Err(message)` instead of panicking so
//! the acceptance harness can report it on one line.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::sync::OnceLock;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use idlogic::cstore::{enumerate, negate, Enumeration, Negation, Store};
use idlogic::engine::{solve, Answer, Outcome, SolveConfig};
use idlogic::formula::{Atom, ClpLit, CmpOp, Formula};
use idlogic::program::Program;
use idlogic::syntax::parse_query;
use idlogic::term::{unify, Substitution, Term, Var};
use idlogic::transform::to_denials;

pub type Check = Result<(), String>;

pub fn theory_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("theories").join(format!("{}.idl", name))
}

pub fn theory_source(name: &str) -> String {
    std::fs::read_to_string(theory_path(name)).unwrap_or_else(|e| panic!("{}: {}", name, e))
}

/// Replaces every line holding a numeric `name(_)` fact with `name(value).`
fn with_fact(src: &str, name: &str, value: i64) -> String {
    let prefix = format!("{}(", name);
    let out: Vec<String> = src
        .lines()
        .map(|l| {
            let numeric = l
                .trim_start()
                .strip_prefix(&prefix)
                .is_some_and(|rest| rest.starts_with(|c: char| c.is_ascii_digit()));
            if numeric {
                format!("{}({}).", name, value)
            } else {
                l.to_string()
            }
        })
        .collect();
    out.join("\n")
}

/// Sets the board size of a queens theory.
pub fn with_dim(src: &str, n: i64) -> String {
    with_fact(src, "dim", n)
}

/// Sets the horizon of a planning or scheduling theory.
pub fn with_horizon(src: &str, h: i64) -> String {
    with_fact(src, "horizon", h)
}

pub fn program(src: &str) -> Program {
    Program::from_source(src).unwrap_or_else(|d| panic!("theory rejected: {:?}", d))
}

pub fn all_solutions() -> SolveConfig {
    SolveConfig { max_solutions: usize::MAX, ..SolveConfig::default() }
}

/// Runs `true` as query and returns each answer's abduced atoms, printed.
pub fn engine_models(prog: &Program, cfg: &SolveConfig) -> (Outcome, BTreeSet<Vec<String>>, u64) {
    let q = prog.query("true").expect("query");
    let r = solve(prog, &q, cfg, None);
    let models = r.answers.iter().map(delta_strings).collect();
    (r.outcome, models, r.steps)
}

pub fn delta_strings(a: &Answer) -> Vec<String> {
    let mut v: Vec<String> = a.delta.iter().map(|x| x.to_string()).collect();
    v.sort();
    v
}

pub fn atom_strings(atoms: &[Atom]) -> Vec<String> {
    let mut v: Vec<String> = atoms.iter().map(|x| x.to_string()).collect();
    v.sort();
    v
}

/// Every placement of `n` non-attacking queens as `(column, row)` pairs,
/// found by filtering permutations.
pub fn queens_by_permutation(n: i64) -> BTreeSet<Vec<(i64, i64)>> {
    fn go(n: i64, rows: &mut Vec<i64>, out: &mut BTreeSet<Vec<(i64, i64)>>) {
        let c = rows.len() as i64;
        if c == n {
            out.insert(rows.iter().enumerate().map(|(i, &r)| (i as i64 + 1, r)).collect());
            return;
        }
        for r in 1..=n {
            let ok = rows.iter().enumerate().all(|(i, &q)| q != r && (q - r).abs() != c - i as i64);
            if ok {
                rows.push(r);
                go(n, rows, out);
                rows.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    go(n, &mut Vec::new(), &mut out);
    out
}

/// Reads `(column, row)` pairs back out of printed atoms such as `q(3,1)`
/// or `has_position(3,1)`.
pub fn placement(model: &[String]) -> Vec<(i64, i64)> {
    let mut out: Vec<(i64, i64)> = model
        .iter()
        .map(|s| {
            let inner = &s[s.find('(').expect("args") + 1..s.rfind(')').expect("args")];
            let mut it = inner.split(',').map(|x| x.trim().parse::<i64>().expect("int"));
            (it.next().expect("col"), it.next().expect("row"))
        })
        .collect();
    out.sort();
    out
}

/// A job shop instance: each job is a chain of `(machine, duration)`
/// operations.
pub type Jobs = Vec<Vec<(usize, i64)>>;

/// The operations of the `op(J,K,M,D)` facts in a job shop theory.
pub fn jobs_of(src: &str) -> Jobs {
    let mut ops: BTreeMap<(i64, i64), (usize, i64)> = BTreeMap::new();
    for line in src.lines() {
        for fact in line.split('.') {
            let fact = fact.trim();
            let Some(rest) = fact.strip_prefix("op(") else { continue };
            // Axioms mention `op(J,K,M,D)` with variables; only facts parse.
            let nums: Result<Vec<i64>, _> = rest.trim_end_matches(')').split(',').map(|x| x.trim().parse()).collect();
            if let Ok(nums) = nums {
                ops.insert((nums[0], nums[1]), (nums[2] as usize, nums[3]));
            }
        }
    }
    let mut jobs: BTreeMap<i64, Vec<(usize, i64)>> = BTreeMap::new();
    for ((j, _), op) in ops {
        jobs.entry(j).or_default().push(op);
    }
    jobs.into_values().collect()
}

/// The optimal makespan, by enumerating every machine ordering and taking
/// the longest path of the resulting precedence graph.
pub fn jobshop_optimum(jobs: &Jobs) -> i64 {
    let mut by_machine: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for (j, ops) in jobs.iter().enumerate() {
        for (k, &(m, _)) in ops.iter().enumerate() {
            by_machine.entry(m).or_default().push((j, k));
        }
    }
    let machines: Vec<Vec<(usize, usize)>> = by_machine.into_values().collect();
    let perms: Vec<Vec<Vec<(usize, usize)>>> = machines.iter().map(|ops| permutations(ops)).collect();
    let mut best = i64::MAX;
    let mut idx = vec![0usize; perms.len()];
    loop {
        let orders: Vec<&Vec<(usize, usize)>> = idx.iter().enumerate().map(|(m, &i)| &perms[m][i]).collect();
        if let Some(span) = makespan(jobs, &orders) {
            best = best.min(span);
        }
        let mut m = 0;
        loop {
            if m == idx.len() {
                return best;
            }
            idx[m] += 1;
            if idx[m] < perms[m].len() {
                break;
            }
            idx[m] = 0;
            m += 1;
        }
    }
}

fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x.clone());
            out.push(p);
        }
    }
    out
}

/// Longest path through job chains plus machine orders, or `None` on a cycle.
fn makespan(jobs: &Jobs, orders: &[&Vec<(usize, usize)>]) -> Option<i64> {
    let mut preds: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
    for (j, ops) in jobs.iter().enumerate() {
        for k in 0..ops.len() {
            let e = preds.entry((j, k)).or_default();
            if k > 0 {
                e.push((j, k - 1));
            }
        }
    }
    for order in orders {
        for w in order.windows(2) {
            preds.entry(w[1]).or_default().push(w[0]);
        }
    }
    let mut finish: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    let total = preds.len();
    while finish.len() < total {
        let ready: Vec<(usize, usize)> = preds
            .iter()
            .filter(|(n, ps)| !finish.contains_key(n) && ps.iter().all(|p| finish.contains_key(p)))
            .map(|(n, _)| *n)
            .collect();
        if ready.is_empty() {
            return None;
        }
        for n in ready {
            let start = preds[&n].iter().map(|p| finish[p]).max().unwrap_or(0);
            finish.insert(n, start + jobs[n.0][n.1].1);
        }
    }
    finish.values().copied().max()
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() })
}

fn run<T: std::fmt::Debug>(cases: u32, strategy: impl Strategy<Value = T>, test: impl Fn(T) -> Result<(), TestCaseError>) -> Check {
    runner(cases).run(&strategy, test).map_err(|e| e.to_string())
}

// Terms and unification.

fn var_pool() -> &'static [Var] {
    static POOL: OnceLock<Vec<Var>> = OnceLock::new();
    POOL.get_or_init(|| ["X", "Y", "Z"].iter().map(|n| Var::named(n)).collect())
}

fn ground_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![Just(Term::atom("a")), Just(Term::atom("b")), (0i64..3).prop_map(Term::Int)];
    leaf.prop_recursive(2, 6, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(x, y)| Term::compound("f", vec![x, y])),
            inner.prop_map(|x| Term::compound("g", vec![x])),
        ]
    })
}

fn open_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        (0usize..3).prop_map(|i| Term::Var(var_pool()[i].clone())),
        Just(Term::atom("a")),
        Just(Term::atom("b")),
        (0i64..3).prop_map(Term::Int),
    ];
    leaf.prop_recursive(3, 10, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(x, y)| Term::compound("f", vec![x, y])),
            inner.prop_map(|x| Term::compound("g", vec![x])),
        ]
    })
}

fn ground_subst() -> impl Strategy<Value = Substitution> {
    proptest::collection::vec(ground_term(), 3)
        .prop_map(|ts| Substitution::from_bindings(var_pool().iter().cloned().zip(ts)))
}

/// `unify` returns a unifier, and it is most general: every ground
/// unifier `sigma` of the pair satisfies `sigma(theta(x)) = sigma(x)`.
pub fn unify_is_mgu(cases: u32) -> Check {
    let pair = (open_term(), open_term(), ground_subst(), ground_subst(), any::<bool>());
    run(cases, pair, |(s, t, rho, sigma, instance)| {
        // Half the cases pair a term with one of its own instances, so that
        // unifiable pairs are common.
        let t = if instance { s.apply(&rho.without(&var_pool()[..1])) } else { t };
        let theta = unify(&s, &t);
        if let Some(th) = &theta {
            prop_assert_eq!(s.apply(th), t.apply(th));
        }
        if s.apply(&sigma) == t.apply(&sigma) {
            let th = theta.ok_or_else(|| TestCaseError::fail(format!("{} and {} have a unifier but unify failed", s, t)))?;
            for v in var_pool() {
                let x = Term::Var(v.clone());
                prop_assert_eq!(x.apply(&th).apply(&sigma), x.apply(&sigma));
            }
        }
        Ok(())
    })
}

// Formulas.

#[derive(Clone, Copy)]
enum Shape {
    Leaf,
    Not,
    And,
    Or,
    Implies,
    Exists,
    Forall,
}

/// A random closed formula over constants `a`, `b`, predicates `p/1`,
/// `q/1`, `r/2` and equality. Bound variables are named by depth, so no
/// quantifier shadows another.
pub fn random_formula(rng: &mut StdRng, depth: usize) -> Formula {
    fn go(rng: &mut StdRng, depth: usize, scope: &mut Vec<Var>) -> Formula {
        let shape = if depth == 0 {
            Shape::Leaf
        } else {
            match rng.gen_range(0..9) {
                0 | 1 => Shape::Leaf,
                2 => Shape::Not,
                3 => Shape::And,
                4 => Shape::Or,
                5 => Shape::Implies,
                6 | 7 => Shape::Exists,
                _ => Shape::Forall,
            }
        };
        let term = |rng: &mut StdRng, scope: &[Var]| {
            let k = rng.gen_range(0..scope.len() + 2);
            match k {
                0 => Term::atom("a"),
                1 => Term::atom("b"),
                _ => Term::Var(scope[k - 2].clone()),
            }
        };
        match shape {
            Shape::Leaf => match rng.gen_range(0..4) {
                0 => Formula::Atom(Atom::new("p", vec![term(rng, scope)])),
                1 => Formula::Atom(Atom::new("q", vec![term(rng, scope)])),
                2 => Formula::Atom(Atom::new("r", vec![term(rng, scope), term(rng, scope)])),
                _ => Formula::Eq(term(rng, scope), term(rng, scope)),
            },
            Shape::Not => Formula::not(go(rng, depth - 1, scope)),
            Shape::And => Formula::and(go(rng, depth - 1, scope), go(rng, depth - 1, scope)),
            Shape::Or => Formula::or(go(rng, depth - 1, scope), go(rng, depth - 1, scope)),
            Shape::Implies => Formula::implies(go(rng, depth - 1, scope), go(rng, depth - 1, scope)),
            Shape::Exists | Shape::Forall => {
                let v = Var::named(&format!("V{}", scope.len()));
                scope.push(v.clone());
                let body = go(rng, depth - 1, scope);
                scope.pop();
                if matches!(shape, Shape::Exists) {
                    Formula::Exists(vec![v], Box::new(body))
                } else {
                    Formula::Forall(vec![v], Box::new(body))
                }
            }
        }
    }
    go(rng, depth, &mut Vec::new())
}

const UNIVERSE: [&str; 2] = ["a", "b"];

/// The eight ground atoms over `{a,b}`, in a fixed order.
fn ground_atoms() -> Vec<Atom> {
    let c = |s: &str| Term::atom(s);
    let mut out = Vec::new();
    for x in UNIVERSE {
        out.push(Atom::new("p", vec![c(x)]));
        out.push(Atom::new("q", vec![c(x)]));
        for y in UNIVERSE {
            out.push(Atom::new("r", vec![c(x), c(y)]));
        }
    }
    out
}

/// Two-valued truth of a closed formula in the Herbrand interpretation
/// over `{a,b}` where exactly the atoms in `model` hold.
pub fn holds(f: &Formula, model: &BTreeSet<Atom>) -> bool {
    let ground = |vs: &[Var], body: &Formula, want_all: bool| {
        let mut any = false;
        let mut all = true;
        let total = UNIVERSE.len().pow(vs.len() as u32);
        for code in 0..total {
            let mut k = code;
            let s = Substitution::from_bindings(vs.iter().map(|v| {
                let t = Term::atom(UNIVERSE[k % UNIVERSE.len()]);
                k /= UNIVERSE.len();
                (v.clone(), t)
            }));
            let b = holds(&body.apply(&s), model);
            any |= b;
            all &= b;
        }
        if want_all {
            all
        } else {
            any
        }
    };
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(a) => model.contains(a),
        Formula::Eq(s, t) => {
            assert!(s.is_ground() && t.is_ground(), "open equality {} = {}", s, t);
            s == t
        }
        Formula::Clp(c) => c.eval_ground().expect("ground constraint"),
        Formula::Not(g) => !holds(g, model),
        Formula::And(a, b) => holds(a, model) && holds(b, model),
        Formula::Or(a, b) => holds(a, model) || holds(b, model),
        Formula::Implies(a, b) => !holds(a, model) || holds(b, model),
        Formula::Exists(vs, g) => ground(vs, g, false),
        Formula::Forall(vs, g) => ground(vs, g, true),
    }
}

/// For `count` seeded random closed formulas, the conjunction of the
/// formulas read back from `to_denials` has the same truth value as the
/// original in all 256 interpretations over `{a,b}`.
pub fn denials_preserve_models(count: usize, seed: u64) -> Check {
    let mut rng = StdRng::seed_from_u64(seed);
    let atoms = ground_atoms();
    for i in 0..count {
        let f = random_formula(&mut rng, 4);
        let goals = to_denials(&f);
        let back = Formula::conj(goals.iter().map(|g| g.to_formula()));
        for mask in 0u32..1 << atoms.len() {
            let model: BTreeSet<Atom> =
                atoms.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, a)| a.clone()).collect();
            if holds(&f, &model) != holds(&back, &model) {
                return Err(format!("formula {} ({}): differs from {} under interpretation {:#x}", i, f, back, mask));
            }
        }
    }
    Ok(())
}

/// Printing a formula and parsing it back yields the same printed form.
pub fn print_parse_round_trip(count: usize, seed: u64) -> Check {
    let mut rng = StdRng::seed_from_u64(seed);
    for _ in 0..count {
        let f = random_formula(&mut rng, 4);
        let printed = f.to_string();
        let q = parse_query(&printed).map_err(|d| format!("{} does not parse: {:?}", printed, d))?;
        if q.formula.to_string() != printed {
            return Err(format!("{} reprinted as {}", printed, q.formula));
        }
    }
    Ok(())
}

/// `rename_fresh` yields an alpha-equivalent formula with no bound
/// variable in common with the original.
pub fn rename_fresh_is_alpha(count: usize, seed: u64) -> Check {
    let mut rng = StdRng::seed_from_u64(seed);
    for _ in 0..count {
        let f = random_formula(&mut rng, 4);
        let g = f.rename_fresh();
        if !f.alpha_eq(&g) || !g.alpha_eq(&f) {
            return Err(format!("{} renamed to non-equivalent {}", f, g));
        }
        let mut before = BTreeSet::new();
        let mut after = BTreeSet::new();
        f.all_vars(&mut before);
        g.all_vars(&mut after);
        if !before.is_disjoint(&after) {
            return Err(format!("{} renamed to {} keeps bound variables", f, g));
        }
    }
    Ok(())
}

// Constraint store.

#[derive(Clone, Debug)]
struct StoreCase {
    bounds: Vec<(i64, i64)>,
    lits: Vec<(Vec<i64>, CmpOp, i64)>,
}

fn cmp_op() -> impl Strategy<Value = CmpOp> {
    prop_oneof![
        Just(CmpOp::Lt),
        Just(CmpOp::Le),
        Just(CmpOp::Eq),
        Just(CmpOp::Ne),
        Just(CmpOp::Ge),
        Just(CmpOp::Gt)
    ]
}

fn store_case() -> impl Strategy<Value = StoreCase> {
    (1usize..=3).prop_flat_map(|n| {
        let bounds = proptest::collection::vec((-3i64..=0, 0i64..=3), n);
        let lit = (proptest::collection::vec(-2i64..=2, n), cmp_op(), -4i64..=4);
        (bounds, proptest::collection::vec(lit, 1..=4)).prop_map(|(bounds, lits)| StoreCase { bounds, lits })
    })
}

fn case_vars(n: usize) -> Vec<Var> {
    (0..n).map(|i| Var::named(&format!("S{}", i))).collect()
}

fn linear(coeffs: &[i64], vars: &[Var]) -> Term {
    let mut t = Term::Int(0);
    for (k, v) in coeffs.iter().zip(vars) {
        if *k != 0 {
            t = Term::compound("+", vec![t, Term::compound("*", vec![Term::Int(*k), Term::Var(v.clone())])]);
        }
    }
    t
}

fn case_literals(case: &StoreCase, vars: &[Var]) -> (Vec<ClpLit>, Vec<ClpLit>) {
    let ranges = case
        .bounds
        .iter()
        .zip(vars)
        .map(|(&(lo, hi), v)| ClpLit::In { var: Term::Var(v.clone()), lo: Term::Int(lo), hi: Term::Int(hi) })
        .collect();
    let lits = case.lits.iter().map(|(ks, op, c)| ClpLit::cmp(linear(ks, vars), *op, Term::Int(*c))).collect();
    (ranges, lits)
}

/// Every assignment within `bounds`.
fn boxed(bounds: &[(i64, i64)]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &(lo, hi) in bounds {
        out = out.into_iter().flat_map(|p: Vec<i64>| (lo..=hi).map(move |x| [p.clone(), vec![x]].concat())).collect();
    }
    out
}

fn satisfies(lits: &[ClpLit], vars: &[Var], point: &[i64]) -> bool {
    let s = Substitution::from_bindings(vars.iter().cloned().zip(point.iter().map(|&x| Term::Int(x))));
    lits.iter().all(|l| l.apply(&s).eval_ground().expect("ground"))
}

/// After each `add`, every assignment satisfying the literals so far lies
/// in the store's domains; an inconsistency report means there is none.
pub fn store_add_is_sound(cases: u32) -> Check {
    run(cases, store_case(), |case| {
        let vars = case_vars(case.bounds.len());
        let (ranges, lits) = case_literals(&case, &vars);
        let mut store = Store::new();
        let mut so_far = Vec::new();
        for l in ranges.iter().chain(&lits) {
            so_far.push(l.clone());
            let sols: Vec<Vec<i64>> = boxed(&case.bounds).into_iter().filter(|p| satisfies(&so_far, &vars, p)).collect();
            match store.add(l) {
                Err(_) => {
                    prop_assert!(sols.is_empty(), "store rejected {:?} which has solutions", so_far);
                    return Ok(());
                }
                Ok(()) => {
                    for p in &sols {
                        for (v, x) in vars.iter().zip(p) {
                            prop_assert!(store.domain(v).contains(*x), "{}={} pruned from {:?}", v, x, so_far);
                        }
                    }
                }
            }
        }
        Ok(())
    })
}

/// Labeling enumerates exactly the assignments found by brute force.
pub fn label_matches_brute_force(cases: u32) -> Check {
    run(cases, store_case(), |case| {
        let vars = case_vars(case.bounds.len());
        let (ranges, lits) = case_literals(&case, &vars);
        let all: Vec<ClpLit> = ranges.into_iter().chain(lits).collect();
        let expected: BTreeSet<Vec<i64>> = boxed(&case.bounds).into_iter().filter(|p| satisfies(&all, &vars, p)).collect();
        let mut store = Store::new();
        let mut got = BTreeSet::new();
        if all.iter().all(|l| store.add(l).is_ok()) {
            let _ = store.label(&vars, &mut |a| {
                got.insert(vars.iter().map(|v| a[v]).collect::<Vec<i64>>());
                std::ops::ControlFlow::Continue(())
            });
        }
        prop_assert_eq!(&got, &expected);
        match enumerate(&all) {
            Ok(Enumeration::Finite(_, tuples)) => {
                let listed: BTreeSet<Vec<i64>> = tuples.into_iter().collect();
                prop_assert_eq!(listed, expected);
            }
            other => prop_assert!(false, "enumerate gave {:?}", other),
        }
        Ok(())
    })
}

/// Negating a comparison twice keeps its solutions, and the negation of a
/// range covers exactly the complement.
pub fn negate_is_involutive(cases: u32) -> Check {
    let strategy = ((-3i64..=0, 0i64..=3), (-3i64..=0, 0i64..=3), proptest::collection::vec(-2i64..=2, 2), cmp_op(), -4i64..=4);
    run(cases, strategy, |(bx, by, ks, op, c)| {
        let vars = case_vars(2);
        let bounds = [bx, by];
        let lit = ClpLit::cmp(linear(&ks, &vars), op, Term::Int(c));
        let once = match negate(&lit) {
            Negation::Single(n) => n,
            other => return Err(TestCaseError::fail(format!("comparison negated to {:?}", other))),
        };
        let twice = match negate(&once) {
            Negation::Single(n) => n,
            other => return Err(TestCaseError::fail(format!("comparison negated to {:?}", other))),
        };
        for p in boxed(&bounds) {
            let orig = satisfies(std::slice::from_ref(&lit), &vars, &p);
            prop_assert_eq!(satisfies(std::slice::from_ref(&once), &vars, &p), !orig);
            prop_assert_eq!(satisfies(std::slice::from_ref(&twice), &vars, &p), orig);
        }
        let range = ClpLit::In { var: Term::Var(vars[0].clone()), lo: Term::Int(bx.0), hi: Term::Int(bx.1) };
        let (l, r) = match negate(&range) {
            Negation::Branch(l, r) => (l, r),
            other => return Err(TestCaseError::fail(format!("range negated to {:?}", other))),
        };
        for x in -6..=6 {
            let p = [x, 0];
            let inside = satisfies(std::slice::from_ref(&range), &vars, &p);
            let outside = satisfies(std::slice::from_ref(&l), &vars, &p) || satisfies(std::slice::from_ref(&r), &vars, &p);
            prop_assert_eq!(inside, !outside);
        }
        Ok(())
    })
}

/// Adding constraints to a clone of a store leaves the original's
/// solutions unchanged, which is what backtracking relies on.
pub fn clone_isolates_store(cases: u32) -> Check {
    run(cases, (store_case(), store_case()), |(a, b)| {
        let n = a.bounds.len().min(b.bounds.len());
        let vars = case_vars(n);
        let trim = |c: &StoreCase| StoreCase {
            bounds: c.bounds[..n].to_vec(),
            lits: c.lits.iter().map(|(ks, op, k)| (ks[..n].to_vec(), *op, *k)).collect(),
        };
        let (a, b) = (trim(&a), trim(&b));
        let (ra, la) = case_literals(&a, &vars);
        let mut store = Store::new();
        if !ra.iter().chain(&la).all(|l| store.add(l).is_ok()) {
            return Ok(());
        }
        let solutions = |s: &Store| {
            let mut out = Vec::new();
            let _ = s.label(&vars, &mut |m| {
                out.push(vars.iter().map(|v| m[v]).collect::<Vec<i64>>());
                std::ops::ControlFlow::Continue(())
            });
            out
        };
        let before = solutions(&store);
        let mut copy = store.clone();
        let (_, lb) = case_literals(&b, &vars);
        for l in &lb {
            if copy.add(l).is_err() {
                break;
            }
        }
        prop_assert_eq!(solutions(&store), before);
        Ok(())
    })
}
