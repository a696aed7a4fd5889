//! The `idl` command line: `solve`, `check`, `transform` and `verify`.
//!
//! Exit codes: 0 solutions found (or verification passed), 1 no model (or
//! verification failed), 2 floundering, 3 step budget exhausted, 4 usage,
//! parse or type errors.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::engine::{solve, Answer, Outcome, RunReport, SolveConfig, TraceEvent};
use crate::formula::{Atom, Formula};
use crate::program::Program;
use crate::syntax::{parse_query, Diagnostic};
use crate::term::{Substitution, Term};
use crate::verifier::{check_answer, check_delta, Verdict};

pub const EXIT_SUCCESS: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_FLOUNDERING: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_USAGE: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "idl", version, about = "Abductive model generation for ID-logic theories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Search for models of a theory that satisfy a query.
    Solve(RunConfig),
    /// Parse and type check a theory.
    Check { theory: PathBuf },
    /// Print the completed definition and the axioms in denial form.
    Transform { theory: PathBuf },
    /// Check an answer file (ground facts, one per line) against a theory.
    Verify {
        theory: PathBuf,
        answer: PathBuf,
        /// Query the answer must satisfy.
        #[arg(short, long)]
        query: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    pub theory: PathBuf,
    #[arg(long, short)]
    pub query: String,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_solutions: u64,
    #[arg(long, default_value_t = 10_000_000)]
    pub step_budget: u64,
    /// Print every rule application to stderr.
    #[arg(long)]
    pub trace: bool,
    /// Print the transformed theory before solving.
    #[arg(long)]
    pub dump_transformed: bool,
    /// Never unify a new abducible atom with one already abduced.
    #[arg(long)]
    pub no_reuse: bool,
    /// Check every solution with the ground oracle.
    #[arg(long)]
    pub verify: bool,
    /// Print the residual constraint store instead of labeling it.
    #[arg(long)]
    pub no_label: bool,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub output: OutputFormat,
}

#[derive(Serialize)]
struct JsonAnswer {
    substitution: BTreeMap<String, String>,
    delta: Vec<String>,
    labeled: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    constraints: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verified: Option<String>,
}

#[derive(Serialize)]
struct JsonReport {
    answers: Vec<JsonAnswer>,
    outcome: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
    steps: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    transformed: Option<String>,
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_SUCCESS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{}", text) } else { write!(out, "{}", text) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Solve(cfg) => run_solve(&cfg, out, err),
        Command::Check { theory } => run_check(&theory, out, err),
        Command::Transform { theory } => load(&theory, err).map(|p| {
            let _ = write!(out, "{}", p.transformed());
            EXIT_SUCCESS
        }),
        Command::Verify { theory, answer, query } => run_verify(&theory, &answer, query.as_deref(), out, err),
    };
    result.unwrap_or(EXIT_USAGE)
}

fn report(diags: &[Diagnostic], file: &str, err: &mut dyn Write) {
    for d in diags {
        let _ = writeln!(err, "{}", d.render(file));
    }
}

/// Reads, parses and type checks a theory; diagnostics go to `err`.
fn load(path: &Path, err: &mut dyn Write) -> Option<Program> {
    let name = path.display().to_string();
    let src = match std::fs::read_to_string(path) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(err, "{}: {}", name, e);
            return None;
        }
    };
    match Program::from_source(&src) {
        Ok(p) => {
            report(&p.typed.warnings, &name, err);
            Some(p)
        }
        Err(diags) => {
            report(&diags, &name, err);
            None
        }
    }
}

fn run_check(path: &Path, out: &mut dyn Write, err: &mut dyn Write) -> Option<i32> {
    let p = load(path, err)?;
    for sig in p.typed.signatures.values() {
        let _ = writeln!(out, "{}", sig);
    }
    Some(EXIT_SUCCESS)
}

fn exit_code(outcome: &Outcome) -> i32 {
    match outcome {
        Outcome::Success => EXIT_SUCCESS,
        Outcome::Failure => EXIT_FAILURE,
        Outcome::Floundering(_) => EXIT_FLOUNDERING,
        Outcome::BudgetExhausted => EXIT_BUDGET,
    }
}

fn outcome_name(outcome: &Outcome) -> &'static str {
    match outcome {
        Outcome::Success => "success",
        Outcome::Failure => "failure",
        Outcome::Floundering(_) => "floundering",
        Outcome::BudgetExhausted => "budget_exhausted",
    }
}

fn run_solve(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Option<i32> {
    let prog = load(&cfg.theory, err)?;
    let query = match prog.query(&cfg.query) {
        Ok(q) => q,
        Err(diags) => {
            report(&diags, "<query>", err);
            return None;
        }
    };
    let solve_cfg = SolveConfig {
        reuse: !cfg.no_reuse,
        label: !cfg.no_label,
        step_budget: cfg.step_budget,
        max_solutions: usize::try_from(cfg.max_solutions).unwrap_or(usize::MAX),
    };
    let json = cfg.output == OutputFormat::Json;
    if cfg.dump_transformed && !json {
        let _ = write!(out, "{}", prog.transformed());
    }
    let mut tracer = |e: &TraceEvent| {
        let _ = writeln!(err, "{}", e);
    };
    let result: RunReport = solve(&prog, &query, &solve_cfg, if cfg.trace { Some(&mut tracer) } else { None });

    let mut verdicts = Vec::new();
    let mut oracle_failed = false;
    if cfg.verify {
        for a in &result.answers {
            let v = match check_answer(&prog, &query.formula, a) {
                Ok(v) => {
                    oracle_failed |= !v.passed();
                    v.to_string()
                }
                Err(e) => {
                    let _ = writeln!(err, "warning: verification skipped: {}", e);
                    format!("skipped: {}", e)
                }
            };
            verdicts.push(v);
        }
    }

    if json {
        let doc = JsonReport {
            answers: result
                .answers
                .iter()
                .enumerate()
                .map(|(i, a)| json_answer(a, verdicts.get(i).cloned()))
                .collect(),
            outcome: outcome_name(&result.outcome).to_string(),
            reason: match &result.outcome {
                Outcome::Floundering(m) => Some(m.clone()),
                _ => None,
            },
            steps: result.steps,
            transformed: cfg.dump_transformed.then(|| prog.transformed()),
        };
        let _ = writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("serializable report"));
    } else {
        for (i, a) in result.answers.iter().enumerate() {
            let _ = writeln!(out, "% solution {}", i + 1);
            let _ = write!(out, "{}", a);
            if let Some(v) = verdicts.get(i) {
                let _ = writeln!(out, "% verifier: {}", v);
            }
        }
        let _ = writeln!(out, "% {} ({} solution(s), {} steps)", result.outcome, result.answers.len(), result.steps);
    }
    if oracle_failed {
        let _ = writeln!(err, "error: a solution failed verification");
        return Some(EXIT_FAILURE);
    }
    if let Outcome::Floundering(m) = &result.outcome {
        let _ = writeln!(err, "floundering: {}", m);
    }
    Some(exit_code(&result.outcome))
}

fn json_answer(a: &Answer, verified: Option<String>) -> JsonAnswer {
    JsonAnswer {
        substitution: a.substitution.iter().map(|(v, t)| (v.clone(), t.to_string())).collect(),
        delta: a.delta.iter().map(|d| d.to_string()).collect(),
        labeled: a.labeled,
        constraints: a.residual.iter().map(|c| c.to_string()).collect(),
        verified,
    }
}

/// Abduced atoms and query bindings read from an answer file.
pub type AnswerFile = (Vec<Atom>, Vec<(String, Term)>);

/// Parses an answer file: ground atoms, and optionally `X = t` bindings
/// for the query's variables. Lines starting with `%` are ignored.
pub fn parse_answer_file(src: &str) -> Result<AnswerFile, Diagnostic> {
    let mut atoms = Vec::new();
    let mut bindings = Vec::new();
    for line in src.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('%')) {
        let q = parse_query(line).map_err(|mut d| d.remove(0))?;
        match q.formula {
            Formula::Atom(a) => atoms.push(a),
            Formula::Eq(Term::Var(v), t) => bindings.push((v.name().to_string(), t)),
            f => {
                return Err(Diagnostic::error(Default::default(), format!("expected a ground atom, found `{}`", f)));
            }
        }
    }
    Ok((atoms, bindings))
}

fn run_verify(
    theory: &Path,
    answer: &Path,
    query: Option<&str>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Option<i32> {
    let prog = load(theory, err)?;
    let name = answer.display().to_string();
    let src = match std::fs::read_to_string(answer) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(err, "{}: {}", name, e);
            return None;
        }
    };
    let (delta, bindings) = match parse_answer_file(&src) {
        Ok(x) => x,
        Err(d) => {
            report(&[d], &name, err);
            return None;
        }
    };
    let query = match query.map(|q| prog.query(q)) {
        None => None,
        Some(Ok(q)) => Some(q),
        Some(Err(diags)) => {
            report(&diags, "<query>", err);
            return None;
        }
    };
    let formula = query.map(|q| {
        let s = q
            .answer_vars
            .iter()
            .filter_map(|v| bindings.iter().find(|(n, _)| n == v.name()).map(|(_, t)| (v.clone(), t.clone())));
        q.formula.apply(&Substitution::from_bindings(s))
    });
    match check_delta(&prog, &delta, formula.as_ref()) {
        Ok(v) => {
            let _ = writeln!(out, "{}", v);
            Some(if v == Verdict::Pass { EXIT_SUCCESS } else { EXIT_FAILURE })
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}", e);
            None
        }
    }
}
