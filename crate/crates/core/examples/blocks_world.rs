//! Plans the reversal of a three-block tower and checks the plan.
//!
//! `cargo run --release --example blocks_world`

use idlogic::engine::{solve, SolveConfig};
use idlogic::program::Program;
use idlogic::verifier::check_answer;

fn main() {
    let prog = Program::from_source(include_str!("../theories/blocks.idl")).expect("valid theory");
    let query = prog.query("on(c, b, 4), on(b, a, 4), on(a, table, 4)").expect("valid query");
    let report = solve(&prog, &query, &SolveConfig::default(), None);
    println!("{} after {} steps", report.outcome, report.steps);
    for answer in &report.answers {
        let mut plan = answer.delta.clone();
        plan.sort_by_key(|a| a.args[2].eval_int());
        for step in plan {
            println!("{}.", step);
        }
        match check_answer(&prog, &query.formula, answer) {
            Ok(v) => println!("verifier: {}", v),
            Err(e) => println!("verifier: {}", e),
        }
    }
}
