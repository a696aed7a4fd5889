//! Infers predicate signatures for a theory without type declarations.

use idlogic::syntax::parse_theory;
use idlogic::types::{check_and_infer, Origin};

const THEORY: &str = "
dom(X) <- dim(N), X in 1..N.
dim(4) <- true.
likes(ann, bob).
friend(X, Y) <- likes(X, Y), likes(Y, X).
";

fn main() {
    let theory = parse_theory(THEORY).expect("valid syntax");
    let typed = check_and_infer(&theory).expect("well typed");
    for sig in typed.signatures.values() {
        let origin = if sig.origin == Origin::Declared { "declared" } else { "inferred" };
        println!("{:<28} % {}", sig.to_string(), origin);
    }

    // A sort clash is reported with its position.
    let clash = parse_theory("p(1).\np(a).").expect("valid syntax");
    for d in check_and_infer(&clash).unwrap_err() {
        println!("{}", d.render("clash.idl"));
    }
}
