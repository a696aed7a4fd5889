//! Acceptance suite. Prints one `criterion N: PASS|FAIL` line per criterion
//! and exits non-zero if any fails. Run with
//! `cargo test --release --test acceptance`.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use idlogic::engine::{solve, success_check, Denial, Goal, Outcome, SolveConfig, State, TraceEvent, Waiting};
use idlogic::formula::{Atom, Formula};
use idlogic::program::Program;
use idlogic::term::{Term, Var};
use idlogic::verifier::{check_answer, enumerate_models, wfm, Interpretation, Truth, Universes, DEFAULT_BOUND};

// Time limits, measured per criterion.
const QUEENS_FIRST_LIMIT: Duration = Duration::from_secs(10);
const QUEENS_ALL_LIMIT: Duration = Duration::from_secs(300);
const PLANNING_LIMIT: Duration = Duration::from_secs(60);

// Expected counts, checked against the independent permutation oracle
// before use.
const QUEENS_COUNTS: [(i64, usize); 3] = [(4, 2), (5, 10), (8, 92)];

type Report = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Solves `true` and checks the first answer with the verifier.
fn first_verified(prog: &Program, label: &str) -> Result<u64, String> {
    let q = prog.query("true").map_err(|d| format!("{:?}", d))?;
    let r = solve(prog, &q, &SolveConfig::default(), None);
    ensure(r.outcome == Outcome::Success, || format!("{}: outcome {}", label, r.outcome))?;
    let v = check_answer(prog, &q.formula, &r.answers[0]).map_err(|e| format!("{}: {}", label, e))?;
    ensure(v.passed(), || format!("{}: verifier says {}", label, v))?;
    Ok(r.steps)
}

fn criterion_1() -> Report {
    let mut notes = Vec::new();
    for name in ["queens", "queens_ob"] {
        let start = Instant::now();
        let prog = program(&theory_source(name));
        let steps = first_verified(&prog, name)?;
        let took = start.elapsed();
        ensure(took < QUEENS_FIRST_LIMIT, || format!("{} took {:?}", name, took))?;
        notes.push(format!("{} dim 8: {} steps, {:.2?}", name, steps, took));
    }
    Ok(notes.join("; "))
}

fn placements(models: &BTreeSet<Vec<String>>) -> BTreeSet<Vec<(i64, i64)>> {
    models.iter().map(|m| placement(m)).collect()
}

fn criterion_2() -> Report {
    let start = Instant::now();
    let mut notes = Vec::new();
    for (n, count) in QUEENS_COUNTS {
        let oracle = queens_by_permutation(n);
        ensure(oracle.len() == count, || format!("permutation oracle gives {} for dim {}", oracle.len(), n))?;
        let ob = program(&with_dim(&theory_source("queens_ob"), n));
        let brute: BTreeSet<Vec<String>> =
            enumerate_models(&ob, DEFAULT_BOUND).map_err(|e| e.to_string())?.iter().map(|m| atom_strings(m)).collect();
        let brute = placements(&brute);
        ensure(brute == oracle, || format!("verifier enumeration differs from the oracle at dim {}", n))?;
        for name in ["queens", "queens_ob"] {
            let prog = program(&with_dim(&theory_source(name), n));
            let (_, models, _) = engine_models(&prog, &all_solutions());
            let got = placements(&models);
            ensure(got == brute, || format!("{} dim {}: engine found {} models, verifier {}", name, n, got.len(), brute.len()))?;
        }
        notes.push(format!("dim {}: {}", n, count));
    }
    let took = start.elapsed();
    ensure(took < QUEENS_ALL_LIMIT, || format!("took {:?}", took))?;
    Ok(format!("{} ({:.2?})", notes.join(", "), took))
}

fn criterion_3() -> Report {
    let mut notes = Vec::new();
    for n in [4, 5] {
        let (_, sym, sym_steps) = engine_models(&program(&with_dim(&theory_source("queens_symmetric"), n)), &all_solutions());
        let (_, comb, comb_steps) = engine_models(&program(&with_dim(&theory_source("queens"), n)), &all_solutions());
        ensure(sym == comb, || format!("dim {}: model sets differ", n))?;
        ensure(comb_steps < sym_steps, || format!("dim {}: combined {} steps, symmetric {}", n, comb_steps, sym_steps))?;
        notes.push(format!("dim {}: {} models, steps {} vs {}", n, sym.len(), comb_steps, sym_steps));
    }
    Ok(notes.join("; "))
}

fn criterion_4() -> Report {
    let explicit = program(&with_dim(&theory_source("queens"), 4));
    let ob = program(&with_dim(&theory_source("queens_ob"), 4));
    let (_, e, _) = engine_models(&explicit, &all_solutions());
    let (_, o, _) = engine_models(&ob, &all_solutions());
    ensure(placements(&e) == placements(&o), || "engine model sets differ".into())?;
    let brute = |p: &Program| -> Result<BTreeSet<Vec<(i64, i64)>>, String> {
        let ms = enumerate_models(p, DEFAULT_BOUND).map_err(|e| e.to_string())?;
        Ok(placements(&ms.iter().map(|m| atom_strings(m)).collect()))
    };
    let (be, bo) = (brute(&explicit)?, brute(&ob)?);
    ensure(be == bo, || "verifier model sets differ".into())?;
    ensure(be == placements(&e), || "engine and verifier disagree".into())?;
    Ok(format!("{} models in each form", be.len()))
}

fn criterion_5() -> Report {
    let lifted = program(&theory_source("finite_sol"));
    let ground = program(&theory_source("finite_sol_ground"));
    let q = lifted.query("true").map_err(|d| format!("{:?}", d))?;
    let mut added: Vec<Vec<String>> = Vec::new();
    let mut cb = |e: &TraceEvent| {
        if e.rule == "denial-clp-enumerate" {
            added.push(e.added.clone());
        }
    };
    solve(&lifted, &q, &SolveConfig::default(), Some(&mut cb));
    ensure(added.len() == 1, || format!("{} enumeration steps", added.len()))?;
    let spawned = &added[0];
    ensure(spawned.len() == 10, || format!("{} denials spawned", spawned.len()))?;
    for k in 1..=10 {
        let needle = format!("sol({})", k);
        let hits = spawned.iter().filter(|d| d.contains(&needle)).count();
        ensure(hits == 1, || format!("{} appears in {} spawned denials", needle, hits))?;
    }
    let cfg = SolveConfig { max_solutions: 5, ..SolveConfig::default() };
    for query in ["true", "bad(3)", "sol(4)", "bad(11)", "not sol(7)"] {
        let a = solve(&lifted, &lifted.query(query).map_err(|d| format!("{:?}", d))?, &cfg, None);
        let b = solve(&ground, &ground.query(query).map_err(|d| format!("{:?}", d))?, &cfg, None);
        ensure(a.outcome == b.outcome, || format!("{}: {} vs {}", query, a.outcome, b.outcome))?;
        let da: Vec<_> = a.answers.iter().map(delta_strings).collect();
        let db: Vec<_> = b.answers.iter().map(delta_strings).collect();
        ensure(da == db, || format!("{}: answers differ", query))?;
    }
    Ok("10 denials, outcomes match on 5 queries".into())
}

fn criterion_6() -> Report {
    let x = Var::named("X");
    let mut d = Denial::new(vec![x.clone()], vec![Formula::Atom(Atom::new("q", vec![Term::Var(x.clone())]))]);
    d.waiting = Some(Waiting { atom: Atom::new("a", vec![Term::Var(x)]), resolved: vec![vec![Term::Int(1)]] });
    let mut s = State::default();
    s.delta = vec![Atom::new("a", vec![Term::Int(1)]), Atom::new("a", vec![Term::Int(2)])];
    s.goals.push(Goal::Den(d.clone()));
    ensure(!success_check(&s), || "state with unresolved a(2) accepted".into())?;
    if let Some(w) = &mut d.waiting {
        w.resolved.push(vec![Term::Int(2)]);
    }
    s.goals[0] = Goal::Den(d);
    ensure(success_check(&s), || "fully resolved state rejected".into())?;
    Ok("unresolved abduced atom rejected".into())
}

fn criterion_7() -> Report {
    let cases = [
        ("flounder_negation", "exists(Y)$ not (exists(X)$ p(X,Y))"),
        ("flounder_clp", "forall(X)$ (X < Y => q(X))"),
    ];
    for (name, query) in cases {
        let prog = program(&theory_source(name));
        let q = prog.query(query).map_err(|d| format!("{:?}", d))?;
        let r = solve(&prog, &q, &SolveConfig::default(), None);
        ensure(matches!(r.outcome, Outcome::Floundering(_)), || format!("{}: outcome {}", name, r.outcome))?;
    }
    Ok("both queries flounder".into())
}

fn wfm_of(src: &str) -> Result<Interpretation, String> {
    let prog = Program::from_source(src).map_err(|d| format!("{:?}", d))?;
    let u = Universes::new(&prog.typed, &[]);
    wfm(&prog, &[], &u).map_err(|e| e.to_string())
}

fn atom0(p: &str) -> Atom {
    Atom::new(p, vec![])
}

fn criterion_8() -> Report {
    let m = wfm_of("p <- not q.\nq <- not p.")?;
    ensure(m.value(&atom0("p")) == Truth::Undefined && m.value(&atom0("q")) == Truth::Undefined, || {
        "mutual negation not undefined".into()
    })?;
    let m = wfm_of("p <- p.")?;
    ensure(m.value(&atom0("p")) == Truth::False, || "positive loop not false".into())?;
    let m = wfm_of("num(X) <- X in 0..10.\neven(0).\neven(X) <- num(X), X > 0, odd(X - 1).\nodd(X) <- num(X), not even(X).")?;
    for n in 0..=10i64 {
        let want = if n.rem_euclid(2) == 0 { Truth::True } else { Truth::False };
        let got = m.value(&Atom::new("even", vec![Term::Int(n)]));
        ensure(got == want, || format!("even({}) is {:?}", n, got))?;
        let odd = m.value(&Atom::new("odd", vec![Term::Int(n)]));
        let want_odd = if want == Truth::True { Truth::False } else { Truth::True };
        ensure(odd == want_odd, || format!("odd({}) is {:?}", n, odd))?;
    }
    Ok("three programs match".into())
}

fn criterion_9() -> Report {
    denials_preserve_models(50, 2024)?;
    Ok("50 formulas x 256 interpretations".into())
}

fn criterion_10() -> Report {
    let src = theory_source("jobshop");
    let optimum = jobshop_optimum(&jobs_of(&src));
    let start = Instant::now();
    let at_optimum = program(&with_horizon(&src, optimum));
    first_verified(&at_optimum, "job shop")?;
    let took_js = start.elapsed();
    ensure(took_js < PLANNING_LIMIT, || format!("job shop took {:?}", took_js))?;
    let tight = program(&with_horizon(&src, optimum - 1));
    let q = tight.query("true").map_err(|d| format!("{:?}", d))?;
    let r = solve(&tight, &q, &SolveConfig::default(), None);
    ensure(r.outcome == Outcome::Failure, || format!("horizon {}: outcome {}", optimum - 1, r.outcome))?;

    let start = Instant::now();
    let blocks = program(&theory_source("blocks"));
    first_verified(&blocks, "blocks")?;
    let took_b = start.elapsed();
    ensure(took_b < PLANNING_LIMIT, || format!("blocks took {:?}", took_b))?;
    Ok(format!("job shop optimum {} ({:.2?}), blocks plan ({:.2?})", optimum, took_js, took_b))
}

fn criterion_11() -> Report {
    unify_is_mgu(2000)?;
    store_add_is_sound(10_000)?;
    negate_is_involutive(2000)?;
    label_matches_brute_force(2000)?;
    Ok("mgu, store add, negate, label".into())
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Report); 11] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
        (11, criterion_11),
    ];
    let filter: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (n, f) in criteria {
        if !filter.is_empty() && !filter.contains(&n) {
            continue;
        }
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        match result {
            Ok(note) => println!("criterion {}: PASS ({})", n, note),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL ({})", n, why);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
