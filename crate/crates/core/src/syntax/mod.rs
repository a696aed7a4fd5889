//! Concrete syntax of ID-logic theories and queries.
//!
//! ```text
//! type_instance(pos,int).
//! has_position(pos,pos)::pred.
//! dom(X) <- dim(N), X in 1..N.
//! dim(8) <- true.
//! abducible(has_position(_,_)).
//! fol forall(Q1,Q2,P1,P2)$ has_position(Q1,P1), has_position(Q2,P2), Q1 < Q2
//!     => P1 \= P2, Q1 + P1 \= Q2 + P2, Q1 - P1 \= Q2 - P2.
//! ```

mod lexer;
mod parser;

use std::collections::BTreeSet;
use std::fmt;

use crate::formula::{Atom, Formula, PredId};
use crate::term::{Symbol, Var};

pub use parser::{parse_query, parse_theory};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub pos: Pos,
    pub severity: Severity,
    pub message: String,
    /// Tokens the parser would have accepted (syntax errors only).
    pub expected: Vec<String>,
}

impl Diagnostic {
    pub fn error(pos: Pos, message: impl Into<String>) -> Self {
        Diagnostic { pos, severity: Severity::Error, message: message.into(), expected: Vec::new() }
    }

    pub fn warning(pos: Pos, message: impl Into<String>) -> Self {
        Diagnostic { pos, severity: Severity::Warning, message: message.into(), expected: Vec::new() }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// `file:line:col: severity: message`
    pub fn render(&self, file: &str) -> String {
        format!("{}:{}", file, self)
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}:{}: {}: {}", self.pos.line, self.pos.col, sev, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected one of: {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub head: Atom,
    pub body: Formula,
    pub pos: Pos,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <- {}.", self.head, self.body)
    }
}

/// One merged definition: the defined predicates and all their rules.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Definition {
    pub defined: BTreeSet<PredId>,
    pub rules: Vec<Rule>,
}

impl Definition {
    pub fn rules_for<'a>(&'a self, p: &'a PredId) -> impl Iterator<Item = &'a Rule> + 'a {
        self.rules.iter().filter(move |r| r.head.pred_id() == *p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Axiom {
    pub formula: Formula,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeDecl {
    /// `type_instance(alias, base).`
    Instance { alias: Symbol, base: Symbol, pos: Pos },
    /// `p(s1,...,sn)::pred.`
    Signature { pred: PredId, sorts: Vec<Symbol>, pos: Pos },
}

/// `ob f :: d(_) -> r(_).`: `f` is a total injective function from the
/// extension of `d` into the extension of `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObDecl {
    pub function: Symbol,
    pub domain: Symbol,
    pub range: Symbol,
    pub pos: Pos,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Theory {
    pub definition: Definition,
    pub fol_axioms: Vec<Axiom>,
    pub type_decls: Vec<TypeDecl>,
    pub abducibles: Vec<PredId>,
    pub ob_decls: Vec<ObDecl>,
    /// Non-fatal parser diagnostics (e.g. shadowed quantifier variables).
    pub warnings: Vec<Diagnostic>,
}

impl Theory {
    /// Every predicate occurring anywhere in the theory.
    pub fn predicates(&self) -> BTreeSet<PredId> {
        let mut out = BTreeSet::new();
        for r in &self.definition.rules {
            out.insert(r.head.pred_id());
            collect_preds(&r.body, &mut out);
        }
        for a in &self.fol_axioms {
            collect_preds(&a.formula, &mut out);
        }
        out.extend(self.abducibles.iter().cloned());
        for d in &self.type_decls {
            if let TypeDecl::Signature { pred, .. } = d {
                out.insert(pred.clone());
            }
        }
        out
    }

    pub fn is_defined(&self, p: &PredId) -> bool {
        self.definition.defined.contains(p)
    }

    /// Open predicates: everything that is not defined. Predicates that are
    /// neither defined nor declared abducible are treated as open too.
    pub fn open_predicates(&self) -> BTreeSet<PredId> {
        self.predicates().into_iter().filter(|p| !self.is_defined(p)).collect()
    }
}

pub fn collect_preds(f: &Formula, out: &mut BTreeSet<PredId>) {
    match f {
        Formula::Atom(a) => {
            out.insert(a.pred_id());
        }
        Formula::Not(g) | Formula::Exists(_, g) | Formula::Forall(_, g) => collect_preds(g, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            collect_preds(a, out);
            collect_preds(b, out);
        }
        Formula::True | Formula::False | Formula::Eq(..) | Formula::Clp(_) => {}
    }
}

/// A parsed query; its free variables are the answer variables.
#[derive(Clone, Debug)]
pub struct Query {
    pub formula: Formula,
    pub answer_vars: Vec<Var>,
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.type_decls {
            match d {
                TypeDecl::Instance { alias, base, .. } => writeln!(f, "type_instance({},{}).", alias, base)?,
                TypeDecl::Signature { pred, sorts, .. } => {
                    write!(f, "{}", pred.name)?;
                    if !sorts.is_empty() {
                        write!(f, "({})", sorts.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(","))?;
                    }
                    writeln!(f, "::pred.")?
                }
            }
        }
        for p in &self.abducibles {
            let args = vec!["_"; p.arity].join(",");
            if p.arity == 0 {
                writeln!(f, "abducible({}).", p.name)?;
            } else {
                writeln!(f, "abducible({}({})).", p.name, args)?;
            }
        }
        for r in &self.definition.rules {
            writeln!(f, "{}", r)?;
        }
        for o in &self.ob_decls {
            writeln!(f, "ob {} :: {}(_) -> {}(_).", o.function, o.domain, o.range)?;
        }
        for a in &self.fol_axioms {
            writeln!(f, "fol {}.", a.formula)?;
        }
        Ok(())
    }
}
