use std::collections::BTreeMap;
use std::sync::Arc;

use super::lexer::{tokenize, Tok, Token};
use super::{Axiom, Diagnostic, ObDecl, Pos, Query, Rule, Theory, TypeDecl};
use crate::formula::{Atom, ClpLit, CmpOp, Formula, PredId};
use crate::term::{Term, Var};

#[derive(Debug)]
struct ParseError {
    pos: Pos,
    found: String,
    expected: Vec<String>,
}

impl ParseError {
    fn into_diagnostic(self) -> Diagnostic {
        let mut d = Diagnostic::error(self.pos, format!("syntax error: unexpected {}", self.found));
        d.expected = self.expected;
        d
    }
}

type PResult<T> = Result<T, ParseError>;

enum Stmt {
    Rule(Rule),
    Axiom(Axiom),
    Abducible(PredId, Pos),
    Type(TypeDecl),
    Ob(ObDecl),
}

struct Snapshot {
    i: usize,
    stmt_vars: usize,
    scopes: usize,
    warnings: usize,
}

struct Parser {
    toks: Vec<Token>,
    i: usize,
    /// Implicitly quantified variables of the current statement, in order
    /// of first occurrence.
    stmt_vars: Vec<(String, Var)>,
    /// Quantifier scopes, innermost last.
    scopes: Vec<Vec<(String, Var)>>,
    warnings: Vec<Diagnostic>,
}

fn is_cmp(tok: &Tok) -> bool {
    matches!(tok, Tok::Eq | Tok::Neq | Tok::Lt | Tok::Le | Tok::Gt | Tok::Ge) || *tok == Tok::Name("in".into())
}

impl Parser {
    fn new(toks: Vec<Token>) -> Self {
        Parser { toks, i: 0, stmt_vars: Vec::new(), scopes: Vec::new(), warnings: Vec::new() }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.i].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let j = (self.i + k).min(self.toks.len() - 1);
        &self.toks[j].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].pos
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].tok.clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn error<T>(&self, expected: &[&str]) -> PResult<T> {
        Err(ParseError {
            pos: self.pos(),
            found: self.peek().describe(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            let want = format!("`{}`", tok.text());
            self.error(&[want.as_str()])
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn is_name(&self, k: usize, name: &str) -> bool {
        matches!(self.peek_at(k), Tok::Name(n) if n == name)
    }

    fn expect_name(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Name(n) => {
                self.bump();
                Ok(n)
            }
            _ => self.error(&["name"]),
        }
    }

    fn snapshot(&self) -> Snapshot {
        Snapshot { i: self.i, stmt_vars: self.stmt_vars.len(), scopes: self.scopes.len(), warnings: self.warnings.len() }
    }

    fn restore(&mut self, s: &Snapshot) {
        self.i = s.i;
        self.stmt_vars.truncate(s.stmt_vars);
        self.scopes.truncate(s.scopes);
        self.warnings.truncate(s.warnings);
    }

    fn visible(&self, name: &str) -> Option<Var> {
        for scope in self.scopes.iter().rev() {
            if let Some((_, v)) = scope.iter().rev().find(|(n, _)| n == name) {
                return Some(v.clone());
            }
        }
        self.stmt_vars.iter().find(|(n, _)| n == name).map(|(_, v)| v.clone())
    }

    fn variable(&mut self, name: &str) -> Var {
        if name == "_" {
            return Var::named("_");
        }
        if let Some(v) = self.visible(name) {
            return v;
        }
        let v = Var::named(name);
        self.stmt_vars.push((name.to_string(), v.clone()));
        v
    }

    // ----- statements -----

    fn statement(&mut self) -> PResult<Stmt> {
        let pos = self.pos();
        if self.is_name(0, "fol") {
            self.bump();
            let f = self.formula()?;
            self.expect(Tok::Dot)?;
            let free: Vec<Var> = f.free_vars().into_iter().collect();
            return Ok(Stmt::Axiom(Axiom { formula: Formula::forall(free, f), pos }));
        }
        if self.is_name(0, "abducible") && *self.peek_at(1) == Tok::LParen {
            self.bump();
            self.bump();
            let name = self.expect_name()?;
            let mut arity = 0;
            if self.eat(&Tok::LParen) {
                loop {
                    match self.peek() {
                        Tok::Var(_) => {
                            self.bump();
                            arity += 1;
                        }
                        _ => return self.error(&["`_`"]),
                    }
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                self.expect(Tok::RParen)?;
            }
            self.expect(Tok::RParen)?;
            self.expect(Tok::Dot)?;
            return Ok(Stmt::Abducible(PredId::new(&name, arity), pos));
        }
        if self.is_name(0, "type_instance") && *self.peek_at(1) == Tok::LParen {
            self.bump();
            self.bump();
            let alias = self.expect_name()?;
            self.expect(Tok::Comma)?;
            let base = self.expect_name()?;
            self.expect(Tok::RParen)?;
            self.expect(Tok::Dot)?;
            return Ok(Stmt::Type(TypeDecl::Instance { alias: Arc::from(alias), base: Arc::from(base), pos }));
        }
        if self.is_name(0, "ob") && matches!(self.peek_at(1), Tok::Name(_)) {
            self.bump();
            let function = self.expect_name()?;
            self.expect(Tok::ColonColon)?;
            let domain = self.wildcard_pattern()?;
            self.expect(Tok::Arrow)?;
            let range = self.wildcard_pattern()?;
            self.expect(Tok::Dot)?;
            return Ok(Stmt::Ob(ObDecl {
                function: Arc::from(function),
                domain: Arc::from(domain),
                range: Arc::from(range),
                pos,
            }));
        }
        let head = match self.peek() {
            Tok::Name(_) => self.atom_or_term()?,
            _ => return self.error(&["name", "`fol`"]),
        };
        let (name, args) = match head {
            Term::Atom(n) => (n, Vec::new()),
            Term::Compound(n, args) => (n, args),
            _ => unreachable!("atom_or_term on a name"),
        };
        match self.peek() {
            Tok::ColonColon => {
                self.bump();
                let mut sorts = Vec::new();
                for a in &args {
                    match a {
                        Term::Atom(s) => sorts.push(s.clone()),
                        _ => {
                            return Err(ParseError {
                                pos,
                                found: format!("`{}` in signature", a),
                                expected: vec!["sort name".into()],
                            })
                        }
                    }
                }
                if !self.is_name(0, "pred") {
                    return self.error(&["`pred`"]);
                }
                self.bump();
                self.expect(Tok::Dot)?;
                Ok(Stmt::Type(TypeDecl::Signature { pred: PredId { name, arity: sorts.len() }, sorts, pos }))
            }
            Tok::If => {
                self.bump();
                let body = self.formula()?;
                self.expect(Tok::Dot)?;
                Ok(Stmt::Rule(Rule { head: Atom { pred: name, args }, body, pos }))
            }
            Tok::Dot => {
                self.bump();
                Ok(Stmt::Rule(Rule { head: Atom { pred: name, args }, body: Formula::True, pos }))
            }
            _ => self.error(&["`<-`", "`::`", "`.`"]),
        }
    }

    /// `d(_)` in an `ob` declaration.
    fn wildcard_pattern(&mut self) -> PResult<String> {
        let name = self.expect_name()?;
        self.expect(Tok::LParen)?;
        match self.peek() {
            Tok::Var(v) if v == "_" => {
                self.bump();
            }
            _ => return self.error(&["`_`"]),
        }
        self.expect(Tok::RParen)?;
        Ok(name)
    }

    // ----- formulas -----

    fn formula(&mut self) -> PResult<Formula> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Implies) {
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> PResult<Formula> {
        let mut items = vec![self.conjunction()?];
        while self.eat(&Tok::Semi) {
            items.push(self.conjunction()?);
        }
        Ok(Formula::disj(items))
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut items = vec![self.unary()?];
        while self.eat(&Tok::Comma) {
            items.push(self.unary()?);
        }
        Ok(Formula::conj(items))
    }

    /// A quantifier body runs over `,` and `=>` but stops at a `;` of the
    /// same nesting level.
    fn quantifier_body(&mut self) -> PResult<Formula> {
        let lhs = self.conjunction()?;
        if self.eat(&Tok::Implies) {
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Formula> {
        let is_quant = (self.is_name(0, "forall") || self.is_name(0, "exists")) && *self.peek_at(1) == Tok::LParen;
        if is_quant {
            let universal = self.is_name(0, "forall");
            self.bump();
            self.bump();
            let mut scope = Vec::new();
            loop {
                let pos = self.pos();
                match self.peek().clone() {
                    Tok::Var(name) => {
                        self.bump();
                        if name != "_" && (self.visible(&name).is_some() || scope.iter().any(|(n, _)| *n == name)) {
                            self.warnings.push(Diagnostic::warning(
                                pos,
                                format!("quantified variable `{}` shadows an outer variable of the same name", name),
                            ));
                        }
                        scope.push((name.clone(), Var::named(&name)));
                    }
                    _ => return self.error(&["variable"]),
                }
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(Tok::RParen)?;
            self.expect(Tok::Dollar)?;
            let vars: Vec<Var> = scope.iter().map(|(_, v)| v.clone()).collect();
            self.scopes.push(scope);
            let body = self.quantifier_body()?;
            self.scopes.pop();
            return Ok(if universal { Formula::forall(vars, body) } else { Formula::exists(vars, body) });
        }
        if self.is_name(0, "not") || *self.peek() == Tok::NotOp {
            self.bump();
            return Ok(Formula::not(self.unary()?));
        }
        if (self.is_name(0, "true") || self.is_name(0, "false")) && !matches!(self.peek_at(1), Tok::LParen) {
            let f = if self.is_name(0, "true") { Formula::True } else { Formula::False };
            self.bump();
            return Ok(f);
        }
        if *self.peek() == Tok::LParen {
            let snap = self.snapshot();
            self.bump();
            let group = self.formula().and_then(|f| self.expect(Tok::RParen).map(|_| f));
            match group {
                Ok(f) if !is_cmp(self.peek()) => return Ok(f),
                Ok(_) => {
                    self.restore(&snap);
                    return self.literal();
                }
                Err(group_err) => {
                    let after_group = self.snapshot();
                    self.restore(&snap);
                    return match self.literal() {
                        Ok(f) => Ok(f),
                        Err(lit_err) if lit_err.pos >= group_err.pos => Err(lit_err),
                        Err(_) => {
                            self.restore(&after_group);
                            Err(group_err)
                        }
                    };
                }
            }
        }
        self.literal()
    }

    fn literal(&mut self) -> PResult<Formula> {
        let pos = self.pos();
        let lhs = self.term()?;
        let op = match self.peek().clone() {
            Tok::Eq => None,
            Tok::Neq => None,
            Tok::Lt => Some(CmpOp::Lt),
            Tok::Le => Some(CmpOp::Le),
            Tok::Gt => Some(CmpOp::Gt),
            Tok::Ge => Some(CmpOp::Ge),
            Tok::Name(n) if n == "in" => {
                self.bump();
                let lo = self.term()?;
                self.expect(Tok::DotDot)?;
                let hi = self.term()?;
                return Ok(Formula::Clp(ClpLit::In { var: lhs, lo, hi }));
            }
            _ => {
                return match lhs {
                    Term::Atom(name) => Ok(Formula::Atom(Atom { pred: name, args: Vec::new() })),
                    t @ Term::Compound(..) if !t.is_arith_op() => match t {
                        Term::Compound(name, args) => Ok(Formula::Atom(Atom { pred: name, args })),
                        _ => unreachable!(),
                    },
                    _ => Err(ParseError {
                        pos,
                        found: format!("term `{}` where a formula was expected", lhs),
                        expected: vec!["`=`".into(), "`\\=`".into(), "`<`".into(), "`in`".into()],
                    }),
                };
            }
        };
        let tok = self.bump();
        let rhs = self.term()?;
        Ok(match (tok, op) {
            (Tok::Eq, _) => Formula::Eq(lhs, rhs),
            (Tok::Neq, _) => Formula::not(Formula::Eq(lhs, rhs)),
            (_, Some(op)) => Formula::Clp(ClpLit::cmp(lhs, op, rhs)),
            _ => unreachable!(),
        })
    }

    // ----- terms -----

    fn term(&mut self) -> PResult<Term> {
        let mut acc = self.product()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => "+",
                Tok::Minus => "-",
                _ => return Ok(acc),
            };
            self.bump();
            let rhs = self.product()?;
            acc = Term::compound(op, vec![acc, rhs]);
        }
    }

    fn product(&mut self) -> PResult<Term> {
        let mut acc = self.primary()?;
        while self.eat(&Tok::Star) {
            let rhs = self.primary()?;
            acc = Term::compound("*", vec![acc, rhs]);
        }
        Ok(acc)
    }

    fn primary(&mut self) -> PResult<Term> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Term::Int(n))
            }
            Tok::Minus => {
                self.bump();
                if let Tok::Int(n) = *self.peek() {
                    self.bump();
                    return Ok(Term::Int(-n));
                }
                let inner = self.primary()?;
                Ok(Term::compound("-", vec![inner]))
            }
            Tok::Var(name) => {
                self.bump();
                Ok(Term::Var(self.variable(&name)))
            }
            Tok::Name(_) => self.atom_or_term(),
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            _ => self.error(&["integer", "variable", "name", "`(`"]),
        }
    }

    fn atom_or_term(&mut self) -> PResult<Term> {
        let name = self.expect_name()?;
        if !self.eat(&Tok::LParen) {
            return Ok(Term::atom(&name));
        }
        let mut args = vec![self.term()?];
        while self.eat(&Tok::Comma) {
            args.push(self.term()?);
        }
        self.expect(Tok::RParen)?;
        Ok(Term::compound(&name, args))
    }

    fn skip_statement(&mut self) {
        while !matches!(self.peek(), Tok::Dot | Tok::Eof) {
            self.bump();
        }
        self.eat(&Tok::Dot);
    }
}

/// Parses a theory. All definition blocks are merged into one definition.
pub fn parse_theory(src: &str) -> Result<Theory, Vec<Diagnostic>> {
    let toks = tokenize(src).map_err(|d| vec![d])?;
    let mut p = Parser::new(toks);
    let mut errors = Vec::new();
    let mut theory = Theory::default();
    let mut abducible_pos = Vec::new();
    while *p.peek() != Tok::Eof {
        p.stmt_vars.clear();
        p.scopes.clear();
        match p.statement() {
            Ok(Stmt::Rule(r)) => {
                theory.definition.defined.insert(r.head.pred_id());
                theory.definition.rules.push(r);
            }
            Ok(Stmt::Axiom(a)) => theory.fol_axioms.push(a),
            Ok(Stmt::Abducible(pred, pos)) => {
                if !theory.abducibles.contains(&pred) {
                    theory.abducibles.push(pred.clone());
                    abducible_pos.push((pred, pos));
                }
            }
            Ok(Stmt::Type(t)) => theory.type_decls.push(t),
            Ok(Stmt::Ob(o)) => theory.ob_decls.push(o),
            Err(e) => {
                errors.push(e.into_diagnostic());
                p.skip_statement();
            }
        }
    }
    theory.warnings = std::mem::take(&mut p.warnings);

    for (pred, pos) in &abducible_pos {
        if theory.definition.defined.contains(pred) {
            errors.push(Diagnostic::error(*pos, format!("predicate {} is declared abducible but has rules", pred)));
        }
    }
    let mut sigs: BTreeMap<String, (Vec<Arc<str>>, Pos)> = BTreeMap::new();
    for d in &theory.type_decls {
        if let TypeDecl::Signature { pred, sorts, pos } = d {
            match sigs.get(&*pred.name) {
                Some((prev, prev_pos)) if prev != sorts => errors.push(Diagnostic::error(
                    *pos,
                    format!("conflicting signature for `{}` (previous declaration at {})", pred.name, prev_pos),
                )),
                Some(_) => {}
                None => {
                    sigs.insert(pred.name.to_string(), (sorts.clone(), *pos));
                }
            }
        }
    }
    let ob_functions: Vec<&str> = theory.ob_decls.iter().map(|o| &*o.function).collect();
    for pred in theory.open_predicates() {
        if !theory.abducibles.contains(&pred) && !ob_functions.contains(&&*pred.name) {
            theory.warnings.push(Diagnostic::warning(
                Pos::default(),
                format!("predicate {} has no rules and no abducible declaration; treated as open", pred),
            ));
        }
    }
    if errors.is_empty() {
        Ok(theory)
    } else {
        errors.sort_by_key(|d| d.pos);
        Err(errors)
    }
}

/// Parses a query formula. A trailing `.` is optional.
pub fn parse_query(src: &str) -> Result<Query, Vec<Diagnostic>> {
    let toks = tokenize(src).map_err(|d| vec![d])?;
    let mut p = Parser::new(toks);
    let formula = p.formula().map_err(|e| vec![e.into_diagnostic()])?;
    p.eat(&Tok::Dot);
    if *p.peek() != Tok::Eof {
        return Err(vec![p.error::<()>(&["end of input"]).unwrap_err().into_diagnostic()]);
    }
    let free = formula.free_vars();
    let answer_vars = p.stmt_vars.iter().map(|(_, v)| v.clone()).filter(|v| free.contains(v)).collect();
    Ok(Query { formula, answer_vars })
}
