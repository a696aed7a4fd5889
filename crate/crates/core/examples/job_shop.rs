//! Schedules the 3x3 job-shop theory and checks the schedule.
//!
//! `cargo run --release --example job_shop -- [horizon]`

use idlogic::engine::{solve, SolveConfig};
use idlogic::program::Program;
use idlogic::verifier::check_answer;

fn main() {
    let horizon: Option<i64> = std::env::args().nth(1).and_then(|a| a.parse().ok());
    let mut src = include_str!("../theories/jobshop.idl").to_string();
    if let Some(h) = horizon {
        src = src.replace("horizon(11).", &format!("horizon({}).", h));
    }
    let prog = Program::from_source(&src).expect("valid theory");
    let query = prog.query("true").expect("valid query");
    let report = solve(&prog, &query, &SolveConfig::default(), None);
    println!("{} after {} steps", report.outcome, report.steps);
    for answer in &report.answers {
        print!("{}", answer);
        match check_answer(&prog, &query.formula, answer) {
            Ok(v) => println!("verifier: {}", v),
            Err(e) => println!("verifier: {}", e),
        }
    }
}
