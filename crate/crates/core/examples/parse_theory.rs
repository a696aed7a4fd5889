//! Parses a theory file and prints its parts, or the diagnostics.
//!
//! `cargo run --example parse_theory -- theories/family.idl`

use idlogic::syntax::parse_theory;

fn main() {
    let path = std::env::args().nth(1).unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/theories/family.idl").into());
    let src = std::fs::read_to_string(&path).expect("readable theory");
    match parse_theory(&src) {
        Ok(t) => {
            println!("defined: {:?}", t.definition.defined.iter().map(|p| p.to_string()).collect::<Vec<_>>());
            println!("open:    {:?}", t.open_predicates().iter().map(|p| p.to_string()).collect::<Vec<_>>());
            for r in &t.definition.rules {
                println!("rule   {}", r);
            }
            for a in &t.fol_axioms {
                println!("axiom  {}", a.formula);
            }
            for w in &t.warnings {
                println!("{}", w.render(&path));
            }
        }
        Err(diags) => {
            for d in diags {
                eprintln!("{}", d.render(&path));
            }
            std::process::exit(4);
        }
    }
}
