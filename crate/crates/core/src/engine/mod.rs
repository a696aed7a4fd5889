//! The abductive derivation engine: depth-first search over states of
//! positive goals, denials, abduced atoms and a finite-domain store.

mod rules;
mod state;

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::ops::ControlFlow;

use serde::Serialize;

pub use rules::success_check;
pub use state::{Denial, Goal, State, Waiting};

use crate::formula::{Atom, ClpLit};
use crate::program::Program;
use crate::syntax::Query;
use crate::term::{Substitution, Term, Var};
use crate::transform::{self, normalize};
use rules::{select, Selection, StepResult, Stepper};

#[derive(Clone, Debug)]
pub struct SolveConfig {
    /// Also try unifying an abducible atom with atoms already abduced.
    pub reuse: bool,
    /// Label the store variables of an answer.
    pub label: bool,
    pub step_budget: u64,
    pub max_solutions: usize,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig { reuse: true, label: true, step_budget: 10_000_000, max_solutions: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "reason", rename_all = "snake_case")]
pub enum Outcome {
    Success,
    Failure,
    Floundering(String),
    BudgetExhausted,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Success => write!(f, "success"),
            Outcome::Failure => write!(f, "failure"),
            Outcome::Floundering(m) => write!(f, "floundering: {}", m),
            Outcome::BudgetExhausted => write!(f, "budget exhausted"),
        }
    }
}

/// One solution: query bindings, abduced atoms, and what is left of the
/// store when it was not fully labeled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Answer {
    pub substitution: Vec<(String, Term)>,
    pub delta: Vec<Atom>,
    pub labeled: bool,
    pub residual: Vec<ClpLit>,
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (v, t) in &self.substitution {
            writeln!(f, "{} = {}", v, t)?;
        }
        for a in &self.delta {
            writeln!(f, "{}.", a)?;
        }
        for c in &self.residual {
            writeln!(f, "constraint {}.", c)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceEvent {
    pub step: u64,
    pub rule: &'static str,
    pub goal: String,
    pub theta: usize,
    pub delta: usize,
    pub store: String,
    pub added: Vec<String>,
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}, {}, {}, |theta|={}, |delta|={}, {}", self.step, self.rule, self.goal, self.theta, self.delta, self.store)
    }
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub outcome: Outcome,
    pub steps: u64,
    pub answers: Vec<Answer>,
}

/// The query as a positive goal, followed by the axioms in denial form.
pub fn initial_state(prog: &Program, query: &Query) -> State {
    let mut goals = vec![Goal::Pos(normalize(&query.formula))];
    for g in &prog.goals {
        goals.push(match g {
            transform::Goal::Positive(f) => Goal::Pos(f.clone()),
            transform::Goal::Denial(d) => Goal::Den(Denial::new(d.universals.clone(), d.body.clone())),
        });
    }
    let answer = query.answer_vars.iter().map(|v| (v.clone(), Term::Var(v.clone()))).collect();
    State { goals, answer, ..State::default() }
}

pub fn solve(
    prog: &Program,
    query: &Query,
    cfg: &SolveConfig,
    mut trace: Option<&mut dyn FnMut(&TraceEvent)>,
) -> RunReport {
    let mut stepper = Stepper { prog, reuse: cfg.reuse, record: trace.is_some(), added: Vec::new() };
    let mut stack = vec![initial_state(prog, query)];
    let mut steps = 0u64;
    let mut answers = Vec::new();
    let mut seen = HashSet::new();
    let mut floundering: Option<String> = None;
    let mut exhausted = false;

    'search: while let Some(mut state) = stack.pop() {
        loop {
            if steps >= cfg.step_budget {
                exhausted = true;
                break 'search;
            }
            match select(prog, &state) {
                Selection::Goal(idx, action) => {
                    steps += 1;
                    let rule = action.name();
                    let goal = trace.as_ref().map(|_| state.goals[idx].to_string());
                    let result = stepper.apply(state, idx, action);
                    if let (Some(t), Some(goal)) = (trace.as_mut(), goal) {
                        let first = match &result {
                            StepResult::Next(v) => v.first(),
                            StepResult::Flounder(_) => None,
                        };
                        t(&TraceEvent {
                            step: steps,
                            rule,
                            goal,
                            theta: first.map_or(0, |s| s.goals.len()),
                            delta: first.map_or(0, |s| s.delta.len()),
                            store: first.map_or(String::new(), |s| s.store.summary()),
                            added: std::mem::take(&mut stepper.added),
                        });
                    }
                    match result {
                        StepResult::Flounder(m) => {
                            floundering.get_or_insert(m);
                            break;
                        }
                        StepResult::Next(mut next) => {
                            for s in &mut next {
                                s.fix_determined();
                            }
                            if next.len() == 1 {
                                state = next.pop().expect("one successor");
                                continue;
                            }
                            stack.extend(next.into_iter().rev());
                            break;
                        }
                    }
                }
                Selection::Stuck(m) => {
                    floundering.get_or_insert(m);
                    break;
                }
                Selection::Saturated => {
                    if success_check(&state) {
                        collect_answers(&state, cfg, &mut answers, &mut seen);
                    }
                    break;
                }
            }
        }
        if answers.len() >= cfg.max_solutions {
            break;
        }
    }
    answers.truncate(cfg.max_solutions);

    let outcome = if !answers.is_empty() {
        Outcome::Success
    } else if exhausted {
        Outcome::BudgetExhausted
    } else if let Some(m) = floundering {
        Outcome::Floundering(m)
    } else {
        Outcome::Failure
    };
    RunReport { outcome, steps, answers }
}

fn collect_answers(state: &State, cfg: &SolveConfig, out: &mut Vec<Answer>, seen: &mut HashSet<String>) {
    let mut vars = BTreeSet::new();
    for a in &state.delta {
        a.collect_vars(&mut vars);
    }
    for (_, t) in &state.answer {
        t.collect_vars(&mut vars);
    }
    let store_vars: Vec<Var> = vars.iter().filter(|v| state.store.contains_var(v)).cloned().collect();
    let bounded: Vec<Var> = store_vars.iter().filter(|v| state.store.is_bounded(v)).cloned().collect();
    let mut push = |s: &Substitution, labeled: bool| {
        let answer = build_answer(state, s, labeled);
        if seen.insert(answer.to_string()) {
            out.push(answer);
        }
        if out.len() >= cfg.max_solutions {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    };
    if cfg.label && !bounded.is_empty() {
        let all = bounded.len() == store_vars.len();
        let _ = state.store.label(&bounded, &mut |assign| {
            let s = Substitution::from_bindings(assign.iter().map(|(v, &n)| (v.clone(), Term::Int(n))));
            push(&s, all)
        });
    } else {
        let _ = push(&Substitution::new(), store_vars.iter().all(|v| state.store.value(v).is_some()));
    }
}

fn build_answer(state: &State, labels: &Substitution, labeled: bool) -> Answer {
    let fixed: Substitution = Substitution::from_bindings(
        state.store.vars().filter_map(|v| state.store.value(v).map(|n| (v.clone(), Term::Int(n)))),
    );
    let mut vars = BTreeSet::new();
    for a in &state.delta {
        a.collect_vars(&mut vars);
    }
    for (_, t) in &state.answer {
        t.collect_vars(&mut vars);
    }
    let skolems = vars
        .iter()
        .filter(|v| !state.store.contains_var(v))
        .enumerate()
        .map(|(k, v)| (v.clone(), Term::atom(&format!("sk{}", k + 1))));
    let mut bindings: Vec<(Var, Term)> = skolems.collect();
    bindings.extend(labels.iter().map(|(v, t)| (v.clone(), t.clone())));
    bindings.extend(fixed.iter().filter(|(v, _)| labels.get(v).is_none()).map(|(v, t)| (v.clone(), t.clone())));
    let s = Substitution::from_bindings(bindings);
    let simplify = |t: Term| t.simplify_arith();
    let mut delta: Vec<Atom> = state.delta.iter().map(|a| {
        let a = a.apply(&s);
        Atom { args: a.args.into_iter().map(simplify).collect(), ..a }
    }).collect();
    delta.sort();
    delta.dedup();
    let substitution = state.answer.iter().map(|(v, t)| (v.name().to_string(), t.apply(&s).simplify_arith())).collect();
    let residual = if labeled { Vec::new() } else { state.store.literals().to_vec() };
    Answer { substitution, delta, labeled, residual }
}

#[cfg(test)]
mod tests;
