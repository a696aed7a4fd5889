//! Builds a finite-domain store for 4-queens and labels it.

use std::ops::ControlFlow;

use idlogic::cstore::Store;
use idlogic::formula::{ClpLit, CmpOp};
use idlogic::term::{Term, Var};

fn main() {
    let qs: Vec<Var> = (1..=4).map(|i| Var::named(&format!("Q{}", i))).collect();
    let mut store = Store::new();
    for q in &qs {
        store.add(&ClpLit::In { var: Term::Var(q.clone()), lo: Term::Int(1), hi: Term::Int(4) }).unwrap();
    }
    for i in 0..4 {
        for j in i + 1..4 {
            let (a, b) = (Term::Var(qs[i].clone()), Term::Var(qs[j].clone()));
            let d = Term::Int((j - i) as i64);
            let plus = |t: Term, k: Term| Term::compound("+", vec![t, k]);
            store.add(&ClpLit::cmp(a.clone(), CmpOp::Ne, b.clone())).unwrap();
            store.add(&ClpLit::cmp(plus(a.clone(), d.clone()), CmpOp::Ne, b.clone())).unwrap();
            store.add(&ClpLit::cmp(a, CmpOp::Ne, plus(b, d))).unwrap();
        }
    }
    println!("after propagation:");
    for q in &qs {
        println!("  {} in {}", q, store.domain(q));
    }
    let _ = store.label(&qs, &mut |sol| {
        let row: Vec<String> = qs.iter().map(|q| sol[q].to_string()).collect();
        println!("solution: {}", row.join(" "));
        ControlFlow::Continue(())
    });

    // Adding the first column's value prunes the others.
    store.add(&ClpLit::cmp(Term::Var(qs[0].clone()), CmpOp::Eq, Term::Int(2))).unwrap();
    println!("with Q1 = 2: {}", qs.iter().map(|q| format!("{}", store.domain(q))).collect::<Vec<_>>().join(", "));
}
