use std::collections::BTreeSet;
use std::fmt;

use crate::cstore::Store;
use crate::formula::{Atom, Formula};
use crate::term::{Substitution, Term, Var};

/// An abducible atom a denial is waiting on, with the argument tuples of
/// the abduced atoms it has already been resolved against. The denial reads
/// `forall(U) <- a(args), not(args = s1), ..., not(args = sn), body`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Waiting {
    pub atom: Atom,
    pub resolved: Vec<Vec<Term>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Denial {
    pub universals: Vec<Var>,
    pub body: Vec<Formula>,
    pub waiting: Option<Waiting>,
}

impl Denial {
    pub fn new(universals: Vec<Var>, body: Vec<Formula>) -> Self {
        Denial { universals, body, waiting: None }
    }

    pub fn is_universal(&self, v: &Var) -> bool {
        self.universals.contains(v)
    }

    /// Removes universals that no longer occur.
    pub(crate) fn prune_universals(&mut self) {
        let mut used = BTreeSet::new();
        for f in &self.body {
            used.extend(f.free_vars());
        }
        if let Some(w) = &self.waiting {
            w.atom.collect_vars(&mut used);
        }
        self.universals.retain(|v| used.contains(v));
    }

    fn apply(&mut self, s: &Substitution) {
        for f in &mut self.body {
            *f = f.apply(s);
        }
        if let Some(w) = &mut self.waiting {
            w.atom = w.atom.apply(s);
            for tuple in &mut w.resolved {
                for t in tuple.iter_mut() {
                    *t = t.apply(s);
                }
            }
        }
    }

    /// The literals of the denial, with the waiting atom and its exclusions.
    pub fn literals(&self) -> Vec<Formula> {
        let mut out = Vec::new();
        if let Some(w) = &self.waiting {
            out.push(Formula::Atom(w.atom.clone()));
            for s in &w.resolved {
                let eqs = w.atom.args.iter().zip(s).map(|(a, b)| Formula::Eq(a.clone(), b.clone()));
                out.push(Formula::not(Formula::conj(eqs)));
            }
        }
        out.extend(self.body.iter().cloned());
        out
    }
}

impl fmt::Display for Denial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.universals.is_empty() {
            let vs: Vec<String> = self.universals.iter().map(|v| v.to_string()).collect();
            write!(f, "forall({})$ ", vs.join(","))?;
        }
        write!(f, "<- {}", Formula::conj(self.literals()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Goal {
    Pos(Formula),
    Den(Denial),
}

impl fmt::Display for Goal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Goal::Pos(g) => write!(f, "{}", g),
            Goal::Den(d) => write!(f, "{}", d),
        }
    }
}

/// A derivation state: pending goals, abduced atoms, constraint store and
/// the current values of the query's free variables.
#[derive(Clone, Debug, Default)]
pub struct State {
    pub goals: Vec<Goal>,
    pub delta: Vec<Atom>,
    pub store: Store,
    pub answer: Vec<(Var, Term)>,
    /// Store variables already replaced by their value.
    pub(crate) fixed: BTreeSet<Var>,
}

impl State {
    /// Applies `s` to every component.
    pub fn apply(&mut self, s: &Substitution) {
        if s.is_empty() {
            return;
        }
        for g in &mut self.goals {
            match g {
                Goal::Pos(f) => *f = f.apply(s),
                Goal::Den(d) => d.apply(s),
            }
        }
        for a in &mut self.delta {
            *a = a.apply(s);
        }
        let mut seen = BTreeSet::new();
        self.delta.retain(|a| seen.insert(a.to_string()));
        for (_, t) in &mut self.answer {
            *t = t.apply(s);
        }
    }

    /// Replaces store variables whose domain became a single value.
    pub(crate) fn fix_determined(&mut self) {
        let newly: Vec<(Var, Term)> = self
            .store
            .vars()
            .filter(|v| !self.fixed.contains(*v))
            .filter_map(|v| self.store.value(v).map(|n| (v.clone(), Term::Int(n))))
            .collect();
        if newly.is_empty() {
            return;
        }
        self.fixed.extend(newly.iter().map(|(v, _)| v.clone()));
        self.apply(&Substitution::from_bindings(newly));
    }

    /// Whether `v` occurs anywhere except in goal `skip`.
    pub fn occurs_elsewhere(&self, v: &Var, skip: usize) -> bool {
        if self.store.contains_var(v) {
            return true;
        }
        let mut vars = BTreeSet::new();
        for a in &self.delta {
            a.collect_vars(&mut vars);
        }
        for (_, t) in &self.answer {
            t.collect_vars(&mut vars);
        }
        for (i, g) in self.goals.iter().enumerate() {
            if i == skip {
                continue;
            }
            match g {
                Goal::Pos(f) => vars.extend(f.free_vars()),
                Goal::Den(d) => {
                    for l in d.literals() {
                        vars.extend(l.free_vars());
                    }
                }
            }
        }
        vars.contains(v)
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.goals {
            writeln!(f, "goal: {}", g)?;
        }
        for a in &self.delta {
            writeln!(f, "delta: {}", a)?;
        }
        writeln!(f, "store: {}", self.store)
    }
}
