use super::*;
use crate::formula::Formula;

fn run(src: &str, q: &str, cfg: &SolveConfig) -> RunReport {
    let p = Program::from_source(src).unwrap();
    let q = p.query(q).unwrap();
    solve(&p, &q, cfg, None)
}

fn first(r: &RunReport) -> String {
    r.answers.first().map(|a| a.to_string()).unwrap_or_default()
}

const FAMILY: &str = "
male(person)::pred.
sibling(person,person)::pred.
abducible(male(_)).
abducible(sibling(_,_)).
parent(bob, tom).
uncle(X,Y) <- brother(X,Z), parent(Z,Y).
brother(X,Y) <- male(X), sibling(X,Y).
";

#[test]
fn abduces_uncle_explanation() {
    let r = run(FAMILY, "uncle(john, tom)", &SolveConfig::default());
    assert_eq!(r.outcome, Outcome::Success);
    assert_eq!(first(&r), "male(john).\nsibling(john,bob).\n");
}

#[test]
fn answer_variable_is_bound() {
    let r = run(FAMILY, "uncle(X, tom), X = john", &SolveConfig::default());
    assert_eq!(r.outcome, Outcome::Success);
    assert!(first(&r).starts_with("X = john\n"), "{}", first(&r));
}

#[test]
fn integrity_constraint_blocks_explanation() {
    let src = format!("{}fol not sibling(john, bob).", FAMILY);
    let r = run(&src, "uncle(john, tom)", &SolveConfig::default());
    assert_eq!(r.outcome, Outcome::Failure);
}

#[test]
fn unresolved_variable_is_skolemized() {
    let r = run(FAMILY, "brother(john, Y)", &SolveConfig::default());
    assert_eq!(r.outcome, Outcome::Success);
    assert_eq!(first(&r), "Y = sk1\nmale(john).\nsibling(john,sk1).\n");
}

#[test]
fn finite_domain_answers() {
    let src = "dom(X) <- X in 1..3.\nabducible(p(_)).\nfol forall(X)$ (p(X) => dom(X)).\nfol forall(X,Y)$ (p(X), p(Y) => X = Y).";
    let cfg = SolveConfig { max_solutions: 10, ..SolveConfig::default() };
    let r = run(src, "p(X), X > 1", &cfg);
    assert_eq!(r.outcome, Outcome::Success);
    let got: Vec<String> = r.answers.iter().map(|a| a.to_string()).collect();
    assert_eq!(got, ["X = 2\np(2).\n", "X = 3\np(3).\n"]);
}

#[test]
fn enumeration_spawns_one_denial_per_value() {
    let src = "abducible(sol(_)).\nfol forall(X)$ (X in 1..10 => sol(X)).";
    let p = Program::from_source(src).unwrap();
    let q = p.query("true").unwrap();
    let mut spawned = 0;
    let mut cb = |e: &TraceEvent| {
        if e.rule == "denial-clp-enumerate" {
            spawned = e.added.len();
        }
    };
    let r = solve(&p, &q, &SolveConfig::default(), Some(&mut cb));
    assert_eq!(spawned, 10);
    assert_eq!(r.outcome, Outcome::Success);
    assert_eq!(r.answers[0].delta.len(), 10);
}

#[test]
fn success_check_rejects_unresolved_waiting_denial() {
    let p = Program::from_source("a(int)::pred.\nq(int)::pred.\nabducible(a(_)).\nabducible(q(_)).").unwrap();
    let q = p.query("true").unwrap();
    let mut s = initial_state(&p, &q);
    s.goals.clear();
    let x = Var::named("X");
    s.delta = vec![Atom::new("a", vec![Term::Int(1)]), Atom::new("a", vec![Term::Int(2)])];
    let mut d = Denial::new(vec![x.clone()], vec![Formula::Atom(Atom::new("q", vec![Term::Var(x.clone())]))]);
    d.waiting = Some(Waiting { atom: Atom::new("a", vec![Term::Var(x)]), resolved: vec![vec![Term::Int(1)]] });
    s.goals.push(Goal::Den(d.clone()));
    assert!(!success_check(&s));
    if let Some(w) = &mut d.waiting {
        w.resolved.push(vec![Term::Int(2)]);
    }
    s.goals[0] = Goal::Den(d);
    assert!(success_check(&s));
}

#[test]
fn negation_over_unbound_open_atom_flounders() {
    let r = run("p(person)::pred.\nabducible(p(_)).\nq <- not p(X).", "q", &SolveConfig::default());
    assert!(matches!(r.outcome, Outcome::Floundering(_)), "{:?}", r.outcome);
}

#[test]
fn universal_constraint_without_range_flounders() {
    let r = run("abducible(p(_)).\nfol forall(X)$ (X > 3 => p(X)).", "true", &SolveConfig::default());
    assert!(matches!(r.outcome, Outcome::Floundering(_)), "{:?}", r.outcome);
}

#[test]
fn budget_is_reported() {
    let src = "p(person)::pred.\np(X) <- p(X).";
    let cfg = SolveConfig { step_budget: 500, ..SolveConfig::default() };
    let r = run(src, "p(a)", &cfg);
    assert_eq!(r.outcome, Outcome::BudgetExhausted);
    assert_eq!(r.steps, 500);
}
