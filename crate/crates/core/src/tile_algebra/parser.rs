//! Parser for the ASCII formula language.
//!
//! ```text
//! # comment
//! formula V "vertices" expect 8
//!   param gamma in {b0, bn, r}
//!   param tau in {t, phi}
//!   flag eps
//!   with gamma = b0 -> tau = phi
//!   body
//!     V{gamma}{tau} + B{gamma}{~tau} + 1{gamma=b0}.eps.Hy
//!   end
//! ```
//!
//! Terms are superposed with `+`; `g.X` guards `X` by a flag `g`, `~g.X` by
//! its negation and `1{cond}.X` by a condition. `mu_L(..)`, `mu_R(..)`,
//! `mu_B(..)`, `mu_T(..)` mask; `mu_{xi}(..)` and `mu_{~xi}(..)` mask on the
//! side named by a laterality. `@Name[x := v, y := z]` inlines an earlier
//! formula of the corpus with some of its variables bound to values or to
//! variables of the caller; its side conditions are carried along. Variables
//! listed by `shared` in the referenced formula stay linked to the caller's
//! variables of the same name, all others are private to the reference.
//!
//! A source without a `formula` header is a bare expression whose guard
//! flags are declared implicitly, optionally followed by `with` lines.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::formula::{Binding, CmpOp, Domain, Expr, Formula, MaskSide, Node, Part, Template, Value, VarDecl};
use super::pattern::PatternName;
use super::prototile::Side;

/// Parse or resolution failure.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unknown pattern name `{name}` at {line}:{col}")]
    UnknownPattern { name: String, line: usize, col: usize },
    #[error("unbound variable `{name}` at {line}:{col}")]
    UnboundVariable { name: String, line: usize, col: usize },
    #[error("side condition of `{formula}` uses `{name}`, which does not occur in the formula")]
    UnusedConditionVariable { formula: String, name: String },
    #[error("unknown formula `{name}` at {line}:{col}")]
    UnknownFormula { name: String, line: usize, col: usize },
    #[error("duplicate formula `{0}`")]
    DuplicateFormula(String),
    #[error("binding for `{name}` at {line}:{col} does not name a variable of `{formula}`")]
    BadBinding { formula: String, name: String, line: usize, col: usize },
    #[error("expected exactly one formula, found {0}")]
    NotSingle(usize),
}

/// An ordered set of formulas; later formulas may reference earlier ones.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Corpus {
    pub formulas: Vec<Formula>,
}

impl Corpus {
    pub fn get(&self, name: &str) -> Option<&Formula> {
        self.formulas.iter().find(|f| f.name == name)
    }

    pub fn names(&self) -> Vec<&str> {
        self.formulas.iter().map(|f| f.name.as_str()).collect()
    }
}

/// Parse a corpus of `formula ... end` blocks.
pub fn parse_corpus(text: &str) -> Result<Corpus, ParseError> {
    parse_corpus_with(text, &Corpus::default())
}

/// Parse a corpus whose formulas may also reference formulas of `base`.
pub fn parse_corpus_with(text: &str, base: &Corpus) -> Result<Corpus, ParseError> {
    let mut p = Parser::new(text, base);
    let mut out = Corpus::default();
    loop {
        p.skip_ws();
        if p.at_end() {
            break;
        }
        let f = p.formula_block(&out)?;
        if out.get(&f.name).is_some() || base.get(&f.name).is_some() {
            return Err(ParseError::DuplicateFormula(f.name));
        }
        out.formulas.push(f);
    }
    Ok(out)
}

/// Parse a single formula: either one `formula` block or a bare expression.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    parse_formula_with(text, &Corpus::default())
}

/// As [`parse_formula`], resolving references against `base`.
pub fn parse_formula_with(text: &str, base: &Corpus) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text, base);
    p.skip_ws();
    if p.peek_keyword("formula") {
        let mut c = parse_corpus_with(text, base)?;
        if c.formulas.len() != 1 {
            return Err(ParseError::NotSingle(c.formulas.len()));
        }
        return Ok(c.formulas.remove(0));
    }
    p.bare_formula()
}

struct Scope {
    vars: Vec<VarDecl>,
    side_conditions: Vec<Expr>,
    implicit_flags: bool,
}

impl Scope {
    fn get(&self, name: &str) -> Option<&VarDecl> {
        self.vars.iter().find(|v| v.name == name)
    }
    fn is_symbol(&self, s: &str) -> bool {
        self.vars.iter().any(|v| matches!(&v.domain, Domain::Symbols(xs) if xs.iter().any(|x| x == s)))
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    base: &'a Corpus,
    instances: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, base: &'a Corpus) -> Self {
        Parser { src, pos: 0, base, instances: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn line_col(&self, pos: usize) -> (usize, usize) {
        let before = &self.src[..pos.min(self.src.len())];
        let line = before.matches('\n').count() + 1;
        let col = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
        (line, col)
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let (line, col) = self.line_col(self.pos);
        Err(ParseError::Syntax { line, col, msg: msg.into() })
    }

    /// Skip spaces, newlines and comments.
    fn skip_ws(&mut self) {
        loop {
            let r = self.rest();
            let trimmed = r.trim_start();
            self.pos += r.len() - trimmed.len();
            if self.rest().starts_with('#') {
                let nl = self.rest().find('\n').unwrap_or(self.rest().len());
                self.pos += nl;
            } else {
                break;
            }
        }
    }

    /// Skip spaces and comments but not newlines.
    fn skip_inline_ws(&mut self) {
        loop {
            let r = self.rest();
            let trimmed = r.trim_start_matches([' ', '\t', '\r']);
            self.pos += r.len() - trimmed.len();
            if self.rest().starts_with('#') {
                let nl = self.rest().find('\n').unwrap_or(self.rest().len());
                self.pos += nl;
            } else {
                break;
            }
        }
    }

    fn peek_char(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn eat(&mut self, lit: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(lit) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &str) -> Result<(), ParseError> {
        if self.eat(lit) {
            Ok(())
        } else {
            self.syntax(format!("expected `{lit}`"))
        }
    }

    fn peek_keyword(&self, kw: &str) -> bool {
        let r = self.rest();
        r.starts_with(kw) && !r[kw.len()..].chars().next().is_some_and(is_ident_char)
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        if self.peek_keyword(kw) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let r = self.rest();
        if !r.chars().next().is_some_and(is_ident_start) {
            return self.syntax("expected an identifier");
        }
        let len = r.find(|c: char| !is_ident_char(c)).unwrap_or(r.len());
        self.pos += len;
        Ok(r[..len].to_string())
    }

    fn number(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let r = self.rest();
        let len = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
        if len == 0 {
            return self.syntax("expected a number");
        }
        self.pos += len;
        r[..len].parse().or_else(|_| self.syntax("number out of range"))
    }

    fn string(&mut self) -> Result<String, ParseError> {
        self.expect("\"")?;
        let r = self.rest();
        match r.find('"') {
            Some(end) => {
                self.pos += end + 1;
                Ok(r[..end].to_string())
            }
            None => self.syntax("unterminated string"),
        }
    }

    /// Rest of the current line as a condition source.
    fn formula_block(&mut self, corpus: &Corpus) -> Result<Formula, ParseError> {
        if !self.eat_keyword("formula") {
            return self.syntax("expected `formula`");
        }
        let name = self.ident()?;
        self.skip_inline_ws();
        let label = if self.peek_char() == Some('"') { self.string()? } else { name.clone() };
        self.skip_inline_ws();
        let expect = if self.eat_keyword("expect") { Some(self.number()? as u64) } else { None };
        let mut scope = Scope { vars: Vec::new(), side_conditions: Vec::new(), implicit_flags: false };
        let mut shared = Vec::new();
        let mut pending_with = Vec::new();
        loop {
            self.skip_ws();
            if self.eat_keyword("param") {
                let mut names = vec![self.ident()?];
                while self.eat_inline(",") {
                    names.push(self.ident()?);
                }
                if !self.eat_keyword("in") {
                    return self.syntax("expected `in`");
                }
                self.expect("{")?;
                let mut values = vec![self.ident_or_number()?];
                while self.eat(",") {
                    values.push(self.ident_or_number()?);
                }
                self.expect("}")?;
                for v in names {
                    scope.vars.push(VarDecl { name: v, domain: Domain::Symbols(values.clone()) });
                }
            } else if self.eat_keyword("flag") {
                loop {
                    let v = self.ident()?;
                    scope.vars.push(VarDecl { name: v, domain: Domain::Flag });
                    self.skip_inline_ws();
                    if !self.eat_inline(",") {
                        break;
                    }
                }
            } else if self.eat_keyword("shared") {
                loop {
                    shared.push(self.ident()?);
                    self.skip_inline_ws();
                    if !self.eat_inline(",") {
                        break;
                    }
                }
            } else if self.eat_keyword("with") {
                pending_with.push(self.pos);
                self.skip_line();
            } else if self.eat_keyword("body") {
                break;
            } else {
                return self.syntax("expected `param`, `flag`, `shared`, `with` or `body`");
            }
        }
        let body = self.sum(&mut scope, corpus)?;
        if !self.eat_keyword("end") {
            return self.syntax("expected `+` or `end`");
        }
        let end_pos = self.pos;
        for start in pending_with {
            self.pos = start;
            let line_end = start + self.rest().find('\n').unwrap_or(self.rest().len());
            let c = self.cond(&scope)?;
            if self.pos < line_end {
                self.skip_inline_ws();
                if self.pos < line_end {
                    return self.syntax("unexpected text after side condition");
                }
            }
            scope.side_conditions.push(c);
        }
        self.pos = end_pos;
        for s in &shared {
            if scope.get(s).is_none() {
                let (line, col) = self.line_col(end_pos);
                return Err(ParseError::UnboundVariable { name: s.clone(), line, col });
            }
        }
        self.finish(name, label, expect, scope, shared, body)
    }

    fn eat_inline(&mut self, lit: &str) -> bool {
        self.skip_inline_ws();
        if self.rest().starts_with(lit) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn skip_line(&mut self) {
        let nl = self.rest().find('\n').unwrap_or(self.rest().len());
        self.pos += nl;
    }

    fn ident_or_number(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        if self.peek_char().is_some_and(|c| c.is_ascii_digit()) {
            Ok(self.number()?.to_string())
        } else {
            self.ident()
        }
    }

    fn bare_formula(&mut self) -> Result<Formula, ParseError> {
        let mut scope = Scope { vars: Vec::new(), side_conditions: Vec::new(), implicit_flags: true };
        let empty = Corpus::default();
        let body = self.sum(&mut scope, &empty)?;
        while self.eat_keyword("with") {
            let c = self.cond(&scope)?;
            scope.side_conditions.push(c);
        }
        self.skip_ws();
        if !self.at_end() {
            return self.syntax("unexpected trailing input");
        }
        self.finish("formula".into(), String::new(), None, scope, Vec::new(), body)
    }

    fn finish(
        &self,
        name: String,
        label: String,
        expect: Option<u64>,
        scope: Scope,
        shared: Vec<String>,
        body: Node,
    ) -> Result<Formula, ParseError> {
        let f = Formula { name, label, expect, vars: scope.vars, shared, side_conditions: scope.side_conditions, body };
        let used = f.body_vars();
        for c in &f.side_conditions {
            let mut vs = BTreeSet::new();
            c.vars(&mut vs);
            if let Some(v) = vs.into_iter().find(|v| !used.contains(v)) {
                return Err(ParseError::UnusedConditionVariable { formula: f.name.clone(), name: v });
            }
        }
        Ok(f)
    }

    // ---- superposition expressions ----

    fn sum(&mut self, scope: &mut Scope, corpus: &Corpus) -> Result<Node, ParseError> {
        let mut terms = vec![self.term(scope, corpus)?];
        while self.eat("+") {
            terms.push(self.term(scope, corpus)?);
        }
        if terms.len() == 1 {
            return Ok(terms.remove(0));
        }
        Ok(Node::Superpose(fuse_choices(terms)))
    }

    fn term(&mut self, scope: &mut Scope, corpus: &Corpus) -> Result<Node, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.rest().starts_with("1{") {
            self.pos += 2;
            let c = self.cond(scope)?;
            self.expect("}")?;
            self.expect(".")?;
            let sub = self.term(scope, corpus)?;
            return Ok(Node::Guard(c, Box::new(sub)));
        }
        if self.rest().starts_with('~') {
            self.pos += 1;
            let f = self.flag_ref(scope)?;
            self.expect(".")?;
            let sub = self.term(scope, corpus)?;
            return Ok(Node::Guard(Expr::Bar(f), Box::new(sub)));
        }
        let c = match self.peek_char() {
            Some(c) => c,
            None => return self.syntax("unexpected end of input"),
        };
        if c.is_ascii_lowercase() && !self.rest().starts_with("mu_") && !self.peek_keyword("nothing") && !self.peek_keyword("p")
        {
            let f = self.flag_ref(scope)?;
            if !self.eat(".") {
                self.pos = start;
                return self.syntax("expected `.` after a guard flag");
            }
            let sub = self.term(scope, corpus)?;
            return Ok(Node::Guard(Expr::Var(f), Box::new(sub)));
        }
        self.primary(scope, corpus)
    }

    fn flag_ref(&mut self, scope: &mut Scope) -> Result<String, ParseError> {
        self.skip_ws();
        let at = self.pos;
        let f = self.ident()?;
        match scope.get(&f) {
            Some(_) => Ok(f),
            None if scope.implicit_flags => {
                scope.vars.push(VarDecl { name: f.clone(), domain: Domain::Flag });
                Ok(f)
            }
            None => {
                let (line, col) = self.line_col(at);
                Err(ParseError::UnboundVariable { name: f, line, col })
            }
        }
    }

    fn primary(&mut self, scope: &mut Scope, corpus: &Corpus) -> Result<Node, ParseError> {
        self.skip_ws();
        if self.eat("(") {
            let n = self.sum(scope, corpus)?;
            self.expect(")")?;
            return Ok(n);
        }
        if self.rest().starts_with("mu_") {
            self.pos += 3;
            let side = if self.rest().starts_with('{') {
                self.pos += 1;
                let bar = self.eat("~");
                let at = self.pos;
                let v = self.ident()?;
                if scope.get(&v).is_none() {
                    let (line, col) = self.line_col(at);
                    return Err(ParseError::UnboundVariable { name: v, line, col });
                }
                self.expect("}")?;
                MaskSide::Var { name: v, bar }
            } else {
                let s = match self.peek_char() {
                    Some('L') => Side::L,
                    Some('R') => Side::R,
                    Some('B') => Side::B,
                    Some('T') => Side::T,
                    _ => return self.syntax("expected a mask side L, R, B, T or {var}"),
                };
                self.pos += 1;
                MaskSide::Fixed(s)
            };
            self.expect("(")?;
            let n = self.sum(scope, corpus)?;
            self.expect(")")?;
            return Ok(Node::Mask(side, Box::new(n)));
        }
        if self.eat_keyword("nothing") {
            return Ok(Node::Nothing);
        }
        if self.rest().starts_with('@') {
            self.pos += 1;
            return self.reference(scope, corpus);
        }
        match self.peek_char() {
            Some(c) if c.is_ascii_uppercase() || c == 'p' || c == '{' => self.template(scope),
            _ => self.syntax("expected a term"),
        }
    }

    fn template(&mut self, scope: &Scope) -> Result<Node, ParseError> {
        let start = self.pos;
        let mut parts = Vec::new();
        let mut lit = String::new();
        loop {
            match self.peek_char() {
                Some(c) if is_ident_char(c) => {
                    lit.push(c);
                    self.pos += 1;
                }
                Some('{') => {
                    self.pos += 1;
                    if !lit.is_empty() {
                        parts.push(Part::Lit(std::mem::take(&mut lit)));
                    }
                    let bar = self.eat("~");
                    let at = self.pos;
                    let v = self.ident()?;
                    if scope.get(&v).is_none() {
                        let (line, col) = self.line_col(at);
                        return Err(ParseError::UnboundVariable { name: v, line, col });
                    }
                    self.expect("}")?;
                    parts.push(Part::Var { name: v, bar });
                }
                _ => break,
            }
        }
        if !lit.is_empty() {
            parts.push(Part::Lit(lit));
        }
        let t = Template { parts };
        self.check_template(&t, scope, start)?;
        Ok(Node::Atom(t))
    }

    /// Every valuation of the template's variables must give a pattern name.
    fn check_template(&self, t: &Template, scope: &Scope, at: usize) -> Result<(), ParseError> {
        let mut vs = BTreeSet::new();
        t.vars(&mut vs);
        let vars: Vec<&VarDecl> = vs.iter().filter_map(|v| scope.get(v)).collect();
        let mut idx = vec![0usize; vars.len()];
        loop {
            let env: BTreeMap<&str, (Value, &Domain)> = vars
                .iter()
                .zip(&idx)
                .map(|(d, &i)| (d.name.as_str(), (d.domain.values()[i].clone(), &d.domain)))
                .collect();
            let mut name = String::new();
            for p in &t.parts {
                match p {
                    Part::Lit(s) => name.push_str(s),
                    Part::Var { name: v, bar } => {
                        let (val, dom) = &env[v.as_str()];
                        let val = if *bar { dom.bar(val) } else { val.clone() };
                        name.push_str(&val.to_string());
                    }
                }
            }
            if name.parse::<PatternName>().is_err() {
                let (line, col) = self.line_col(at);
                return Err(ParseError::UnknownPattern { name, line, col });
            }
            // advance the odometer
            let mut k = 0;
            loop {
                if k == vars.len() {
                    return Ok(());
                }
                idx[k] += 1;
                if idx[k] < vars[k].domain.size() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    /// `@Name[bindings]`: instantiate a previously defined formula.
    fn reference(&mut self, scope: &mut Scope, corpus: &Corpus) -> Result<Node, ParseError> {
        let at = self.pos;
        let name = self.ident()?;
        let target = match corpus.get(&name).or_else(|| self.base.get(&name)) {
            Some(f) => f.clone(),
            None => {
                let (line, col) = self.line_col(at);
                return Err(ParseError::UnknownFormula { name, line, col });
            }
        };
        let mut bindings = Vec::new();
        if self.rest().starts_with('[') {
            self.pos += 1;
            loop {
                let bat = self.pos;
                let var = self.ident()?;
                if target.var(&var).is_none() {
                    let (line, col) = self.line_col(bat);
                    return Err(ParseError::BadBinding { formula: name, name: var, line, col });
                }
                self.expect(":=")?;
                self.skip_ws();
                let rhs = if self.peek_char().is_some_and(|c| c.is_ascii_digit()) {
                    Binding::Value(Value::Int(self.number()?))
                } else {
                    let id = self.ident()?;
                    if scope.get(&id).is_some() {
                        Binding::Var(id)
                    } else {
                        Binding::Value(Value::Sym(id))
                    }
                };
                bindings.push((var, rhs));
                if !self.eat(",") {
                    break;
                }
            }
            self.expect("]")?;
        }
        self.instances += 1;
        let suffix = format!("'{}", self.instances);
        let mut map: BTreeMap<String, Replacement> = BTreeMap::new();
        for d in &target.vars {
            let rep = match bindings.iter().find(|(v, _)| *v == d.name) {
                Some((_, Binding::Value(v))) => Replacement::Const(v.clone(), d.domain.clone()),
                Some((_, Binding::Var(o))) => Replacement::Rename(o.clone()),
                None if target.shared.contains(&d.name) => {
                    if scope.get(&d.name).is_none() {
                        scope.vars.push(d.clone());
                    }
                    Replacement::Rename(d.name.clone())
                }
                None => {
                    let fresh = format!("{}{}", d.name, suffix);
                    scope.vars.push(VarDecl { name: fresh.clone(), domain: d.domain.clone() });
                    Replacement::Rename(fresh)
                }
            };
            map.insert(d.name.clone(), rep);
        }
        let body = subst_node(&target.body, &map);
        for c in &target.side_conditions {
            scope.side_conditions.push(subst_expr(c, &map));
        }
        Ok(Node::Subst { name, bindings, body: Box::new(body) })
    }

    // ---- conditions ----

    fn cond(&mut self, scope: &Scope) -> Result<Expr, ParseError> {
        let a = self.or_expr(scope)?;
        if self.eat("->") {
            let b = self.cond(scope)?;
            return Ok(Expr::Implies(Box::new(a), Box::new(b)));
        }
        Ok(a)
    }

    fn or_expr(&mut self, scope: &Scope) -> Result<Expr, ParseError> {
        let mut a = self.and_expr(scope)?;
        while self.eat("|") {
            let b = self.and_expr(scope)?;
            a = Expr::Or(Box::new(a), Box::new(b));
        }
        Ok(a)
    }

    fn and_expr(&mut self, scope: &Scope) -> Result<Expr, ParseError> {
        let mut a = self.not_expr(scope)?;
        while self.eat("&") {
            let b = self.not_expr(scope)?;
            a = Expr::And(Box::new(a), Box::new(b));
        }
        Ok(a)
    }

    fn not_expr(&mut self, scope: &Scope) -> Result<Expr, ParseError> {
        self.skip_ws();
        if self.rest().starts_with('!') && !self.rest().starts_with("!=") {
            self.pos += 1;
            let a = self.not_expr(scope)?;
            return Ok(Expr::Not(Box::new(a)));
        }
        self.cmp_expr(scope)
    }

    fn cmp_expr(&mut self, scope: &Scope) -> Result<Expr, ParseError> {
        let a = self.add_expr(scope)?;
        self.skip_ws();
        let ops = [("!=", CmpOp::Ne), ("<=", CmpOp::Le), (">=", CmpOp::Ge), ("=", CmpOp::Eq), ("<", CmpOp::Lt), (">", CmpOp::Gt)];
        for (lit, op) in ops {
            if self.rest().starts_with(lit) {
                self.pos += lit.len();
                let b = self.add_expr(scope)?;
                return Ok(Expr::Cmp(op, Box::new(a), Box::new(b)));
            }
        }
        Ok(a)
    }

    fn add_expr(&mut self, scope: &Scope) -> Result<Expr, ParseError> {
        let mut a = self.mul_expr(scope)?;
        loop {
            self.skip_ws();
            if self.rest().starts_with('+') {
                self.pos += 1;
                let b = self.mul_expr(scope)?;
                a = Expr::Add(Box::new(a), Box::new(b));
            } else {
                return Ok(a);
            }
        }
    }

    fn mul_expr(&mut self, scope: &Scope) -> Result<Expr, ParseError> {
        let mut a = self.atom_expr(scope)?;
        while self.eat("*") {
            let b = self.atom_expr(scope)?;
            a = Expr::Mul(Box::new(a), Box::new(b));
        }
        Ok(a)
    }

    fn atom_expr(&mut self, scope: &Scope) -> Result<Expr, ParseError> {
        self.skip_ws();
        if self.eat("(") {
            let e = self.cond(scope)?;
            self.expect(")")?;
            return Ok(e);
        }
        if self.peek_char().is_some_and(|c| c.is_ascii_digit()) {
            // `1{` never occurs inside a condition; a digit starts a number
            // unless it is a symbol such as `b0` (which starts with a letter).
            return Ok(Expr::Const(Value::Int(self.number()?)));
        }
        let bar = self.eat("~");
        self.skip_ws();
        let at = self.pos;
        let id = self.ident()?;
        if scope.get(&id).is_some() {
            return Ok(if bar { Expr::Bar(id) } else { Expr::Var(id) });
        }
        if !bar && scope.is_symbol(&id) {
            return Ok(Expr::Const(Value::Sym(id)));
        }
        let (line, col) = self.line_col(at);
        Err(ParseError::UnboundVariable { name: id, line, col })
    }
}

/// Fuse adjacent `f.A + ~f.B` into a choice node.
fn fuse_choices(terms: Vec<Node>) -> Vec<Node> {
    let mut out: Vec<Node> = Vec::with_capacity(terms.len());
    for t in terms {
        let fused = match (out.last(), &t) {
            (Some(Node::Guard(Expr::Var(f), _)), Node::Guard(Expr::Bar(g), _)) if f == g => true,
            _ => false,
        };
        if fused {
            let prev = out.pop().expect("checked above");
            if let (Node::Guard(Expr::Var(f), a), Node::Guard(_, b)) = (prev, t) {
                out.push(Node::Choice(f, a, b));
            }
        } else {
            out.push(t);
        }
    }
    out
}

#[derive(Clone, Debug)]
enum Replacement {
    Const(Value, Domain),
    Rename(String),
}

fn side_of(v: &Value) -> Option<Side> {
    match v {
        Value::Sym(s) if s == "l" => Some(Side::L),
        Value::Sym(s) if s == "r" => Some(Side::R),
        _ => None,
    }
}

fn subst_value(rep: &Replacement, bar: bool) -> Option<Value> {
    match rep {
        Replacement::Const(v, d) => Some(if bar { d.bar(v) } else { v.clone() }),
        Replacement::Rename(_) => None,
    }
}

fn subst_node(n: &Node, map: &BTreeMap<String, Replacement>) -> Node {
    match n {
        Node::Atom(t) => Node::Atom(Template {
            parts: t
                .parts
                .iter()
                .map(|p| match p {
                    Part::Var { name, bar } => match map.get(name) {
                        Some(Replacement::Rename(r)) => Part::Var { name: r.clone(), bar: *bar },
                        Some(rep) => Part::Lit(subst_value(rep, *bar).expect("constant").to_string()),
                        None => p.clone(),
                    },
                    lit => lit.clone(),
                })
                .collect(),
        }),
        Node::Nothing => Node::Nothing,
        Node::Superpose(xs) => Node::Superpose(xs.iter().map(|x| subst_node(x, map)).collect()),
        Node::Mask(side, sub) => {
            let side = match side {
                MaskSide::Var { name, bar } => match map.get(name) {
                    Some(Replacement::Rename(r)) => MaskSide::Var { name: r.clone(), bar: *bar },
                    Some(rep) => match subst_value(rep, *bar).as_ref().and_then(side_of) {
                        Some(s) => MaskSide::Fixed(s),
                        None => side.clone(),
                    },
                    None => side.clone(),
                },
                fixed => fixed.clone(),
            };
            Node::Mask(side, Box::new(subst_node(sub, map)))
        }
        Node::Guard(c, sub) => Node::Guard(subst_expr(c, map), Box::new(subst_node(sub, map))),
        Node::Choice(f, a, b) => match map.get(f) {
            Some(Replacement::Rename(r)) => Node::Choice(r.clone(), Box::new(subst_node(a, map)), Box::new(subst_node(b, map))),
            Some(Replacement::Const(Value::Int(0), _)) => subst_node(b, map),
            Some(Replacement::Const(_, _)) => subst_node(a, map),
            None => Node::Choice(f.clone(), Box::new(subst_node(a, map)), Box::new(subst_node(b, map))),
        },
        Node::Subst { name, bindings, body } => Node::Subst {
            name: name.clone(),
            bindings: bindings
                .iter()
                .map(|(k, v)| {
                    let v = match v {
                        Binding::Var(o) => match map.get(o) {
                            Some(Replacement::Rename(r)) => Binding::Var(r.clone()),
                            Some(rep) => Binding::Value(subst_value(rep, false).expect("constant")),
                            None => v.clone(),
                        },
                        other => other.clone(),
                    };
                    (k.clone(), v)
                })
                .collect(),
            body: Box::new(subst_node(body, map)),
        },
    }
}

fn subst_expr(e: &Expr, map: &BTreeMap<String, Replacement>) -> Expr {
    let bx = |x: &Expr| Box::new(subst_expr(x, map));
    match e {
        Expr::Const(_) => e.clone(),
        Expr::Var(v) | Expr::Bar(v) => {
            let bar = matches!(e, Expr::Bar(_));
            match map.get(v) {
                Some(Replacement::Rename(r)) => {
                    if bar {
                        Expr::Bar(r.clone())
                    } else {
                        Expr::Var(r.clone())
                    }
                }
                Some(rep) => Expr::Const(subst_value(rep, bar).expect("constant")),
                None => e.clone(),
            }
        }
        Expr::Not(a) => Expr::Not(bx(a)),
        Expr::And(a, b) => Expr::And(bx(a), bx(b)),
        Expr::Or(a, b) => Expr::Or(bx(a), bx(b)),
        Expr::Implies(a, b) => Expr::Implies(bx(a), bx(b)),
        Expr::Cmp(op, a, b) => Expr::Cmp(*op, bx(a), bx(b)),
        Expr::Add(a, b) => Expr::Add(bx(a), bx(b)),
        Expr::Mul(a, b) => Expr::Mul(bx(a), bx(b)),
    }
}
