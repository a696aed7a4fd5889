//! Computes well-founded models with the ground oracle.

use idlogic::formula::Atom;
use idlogic::program::Program;
use idlogic::term::Term;
use idlogic::verifier::{wfm, Universes};

fn show(title: &str, src: &str, open: &[Atom]) {
    let prog = Program::from_source(src).expect("valid theory");
    let universes = Universes::new(&prog.typed, open);
    let m = wfm(&prog, open, &universes).expect("finite universes");
    let t: Vec<String> = m.true_atoms.iter().map(|a| a.to_string()).collect();
    let u: Vec<String> = m.undefined.iter().map(|a| a.to_string()).collect();
    println!("{}\n  true:      {}\n  undefined: {}", title, t.join(" "), u.join(" "));
}

fn main() {
    show("mutual negation", "p <- not q.\nq <- not p.", &[]);
    show("positive loop", "p <- p.", &[]);
    show(
        "even numbers up to 6",
        "num(X) <- X in 0..6.\neven(0).\neven(X) <- num(X), X > 0, not even(X - 1).",
        &[],
    );
    show(
        "reachability over an open edge relation",
        "edge(int, int)::pred.\nabducible(edge(_,_)).\nnode(X) <- X in 1..4.\n\
         reach(X, Y) <- edge(X, Y).\nreach(X, Y) <- edge(X, Z), reach(Z, Y).",
        &[Atom::new("edge", vec![Term::Int(1), Term::Int(2)]), Atom::new("edge", vec![Term::Int(2), Term::Int(3)])],
    );
}
