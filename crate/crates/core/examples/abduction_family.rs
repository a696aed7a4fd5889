//! Explains family relations by abducing parent and sex facts.

use idlogic::engine::{solve, SolveConfig, TraceEvent};
use idlogic::program::Program;
use idlogic::verifier::check_answer;

fn main() {
    let prog = Program::from_source(include_str!("../theories/family.idl")).expect("valid theory");
    for q in ["aunt(mary, bob)", "uncle(U, mary)", "sister(ann, ann)"] {
        let query = prog.query(q).expect("valid query");
        let cfg = SolveConfig { max_solutions: 2, ..SolveConfig::default() };
        let report = solve(&prog, &query, &cfg, None);
        println!("?- {}  => {} ({} steps)", q, report.outcome, report.steps);
        for a in &report.answers {
            print!("{}", a);
            println!("% verifier: {}", check_answer(&prog, &query.formula, a).expect("finite universes"));
        }
    }

    // The first rule applications of a derivation.
    let query = prog.query("aunt(mary, bob)").expect("valid query");
    let mut shown = 0;
    let mut trace = |e: &TraceEvent| {
        if shown < 8 {
            println!("{}", e);
            shown += 1;
        }
    };
    solve(&prog, &query, &SolveConfig::default(), Some(&mut trace));
}
