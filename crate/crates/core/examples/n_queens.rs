//! Solves N-queens from a theory file and prints the board.
//!
//! `cargo run --release --example n_queens -- [N] [theory.idl]`

use std::time::Instant;

use idlogic::engine::{solve, SolveConfig};
use idlogic::program::Program;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let n: i64 = args.get(1).and_then(|a| a.parse().ok()).unwrap_or(8);
    let path = args.get(2).map(String::as_str).unwrap_or(concat!(env!("CARGO_MANIFEST_DIR"), "/theories/queens.idl"));
    let src = std::fs::read_to_string(path).expect("readable theory").replace("dim(8)", &format!("dim({})", n));
    let prog = Program::from_source(&src).expect("valid theory");
    let query = prog.query("true").expect("valid query");
    let all = args.iter().any(|a| a == "--all");
    let cfg = SolveConfig { max_solutions: if all { usize::MAX } else { 1 }, ..SolveConfig::default() };
    let start = Instant::now();
    let report = solve(&prog, &query, &cfg, None);
    println!("{} after {} steps, {} model(s), {:?}", report.outcome, report.steps, report.answers.len(), start.elapsed());
    if let Some(answer) = report.answers.first() {
        let mut board = vec![vec!['.'; n as usize]; n as usize];
        for atom in &answer.delta {
            if let [q, p] = atom.args.as_slice() {
                if let (Some(q), Some(p)) = (q.eval_int(), p.eval_int()) {
                    board[(p - 1) as usize][(q - 1) as usize] = 'Q';
                }
            }
        }
        for row in board {
            println!("{}", row.into_iter().collect::<String>());
        }
    }
}
