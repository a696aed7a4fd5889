//! The preprocessing pipeline: parse, type check, expand `ob` declarations,
//! complete the definition and put the axioms in denial form.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::formula::{Formula, PredId};
use crate::syntax::{parse_query, parse_theory, Diagnostic, Query, Theory};
use crate::transform::{complete, expand_ob, to_denials, CompletedDefinition, Goal};
use crate::types::{check_and_infer, check_query, TypedTheory};

#[derive(Clone, Debug)]
pub struct Program {
    pub typed: TypedTheory,
    pub completed: CompletedDefinition,
    /// The FOL axioms of the theory followed by the `ob` expansions.
    pub axioms: Vec<Formula>,
    /// `axioms` in denial form.
    pub goals: Vec<Goal>,
}

impl Program {
    pub fn from_source(src: &str) -> Result<Program, Vec<Diagnostic>> {
        Program::from_theory(parse_theory(src)?)
    }

    pub fn from_theory(theory: Theory) -> Result<Program, Vec<Diagnostic>> {
        let typed = check_and_infer(&theory)?;
        let mut axioms: Vec<Formula> = theory.fol_axioms.iter().map(|a| a.formula.clone()).collect();
        let mut errors = Vec::new();
        for decl in &theory.ob_decls {
            match expand_ob(decl, &theory) {
                Ok(fs) => axioms.extend(fs),
                Err(e) => errors.push(Diagnostic::error(decl.pos, e.to_string())),
            }
        }
        if !errors.is_empty() {
            return Err(errors);
        }
        let completed = complete(&theory.definition);
        let goals = axioms.iter().flat_map(to_denials).collect();
        Ok(Program { typed, completed, axioms, goals })
    }

    pub fn theory(&self) -> &Theory {
        &self.typed.theory
    }

    pub fn is_defined(&self, p: &PredId) -> bool {
        self.completed.completions.contains_key(p)
    }

    /// Predicates without rules, including the ones only a query mentions.
    pub fn open_predicates(&self) -> BTreeSet<PredId> {
        self.theory().open_predicates()
    }

    /// Parses a query and checks it against the theory's sorts.
    pub fn query(&self, src: &str) -> Result<Query, Vec<Diagnostic>> {
        let q = parse_query(src)?;
        check_query(&self.typed, &q)?;
        Ok(q)
    }

    /// The completed definition and the denial form of the axioms, in the
    /// input syntax.
    pub fn transformed(&self) -> String {
        let mut out = String::new();
        for sig in self.typed.signatures.values() {
            let _ = writeln!(out, "{}", sig);
        }
        for p in &self.typed.theory.abducibles {
            let _ = writeln!(out, "abducible({}).", abducible_pattern(p));
        }
        out.push_str(&self.completed.to_string());
        for g in &self.goals {
            let _ = writeln!(out, "{}", g);
        }
        out
    }
}

fn abducible_pattern(p: &PredId) -> String {
    if p.arity == 0 {
        p.name.to_string()
    } else {
        format!("{}({})", p.name, vec!["_"; p.arity].join(","))
    }
}
