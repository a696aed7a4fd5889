//! Shows the completed definition and the denial form of the axioms.

use idlogic::program::Program;
use idlogic::transform::{normalize, to_denials};
use idlogic::syntax::parse_query;

fn main() {
    let prog = Program::from_source(include_str!("../theories/queens_ob.idl")).expect("valid theory");
    println!("completed definition:");
    print!("{}", prog.completed);
    println!("\naxioms (the last three come from the ob declaration):");
    for g in &prog.goals {
        println!("  {}", g);
    }

    let f = parse_query("forall(X)$ (p(X) => exists(Y)$ (q(X,Y), not r(Y)))").expect("valid formula").formula;
    println!("\nnormalized: {}", normalize(&f));
    for g in to_denials(&f) {
        println!("denial:     {}", g);
    }
}
