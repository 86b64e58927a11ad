//! Formula syntax tree.
//!
//! A formula superposes guarded, masked and substituted pattern templates.
//! Templates such as `L{gamma}tu{xi}` become pattern names once their
//! variables are valued; `{~gamma}` denotes the complementary value.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::prototile::Side;

/// A value taken by a variable: flags are integers, parameters are symbols.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Value {
    Int(i64),
    Sym(String),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(i) => write!(f, "{i}"),
            Value::Sym(s) => f.write_str(s),
        }
    }
}

/// Domain of a variable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Domain {
    /// `{0, 1}`
    Flag,
    /// A finite list of symbols.
    Symbols(Vec<String>),
}

impl Domain {
    pub fn values(&self) -> Vec<Value> {
        match self {
            Domain::Flag => vec![Value::Int(0), Value::Int(1)],
            Domain::Symbols(s) => s.iter().cloned().map(Value::Sym).collect(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Domain::Flag => 2,
            Domain::Symbols(s) => s.len(),
        }
    }

    /// Complementary value `x̄`. Flags and two-valued domains swap; colours
    /// map both blues to red and red to simple blue.
    pub fn bar(&self, v: &Value) -> Value {
        match (self, v) {
            (Domain::Flag, Value::Int(i)) => Value::Int(i64::from(*i == 0)),
            (Domain::Symbols(s), Value::Sym(x)) if s.len() == 2 => {
                Value::Sym(if *x == s[0] { s[1].clone() } else { s[0].clone() })
            }
            (_, Value::Sym(x)) => Value::Sym(complement_symbol(x).to_string()),
            (_, other) => other.clone(),
        }
    }
}

/// Complement of a symbol independently of any domain.
pub fn complement_symbol(x: &str) -> &str {
    match x {
        "b0" | "bn" | "b" => "r",
        "r" => "bn",
        "t" => "phi",
        "phi" => "t",
        "u" => "l",
        "l" => "r",
        "w" => "b",
        other => other,
    }
}

/// A declared variable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VarDecl {
    pub name: String,
    pub domain: Domain,
}

/// Comparison operators.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl fmt::Display for CmpOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        })
    }
}

/// Condition and arithmetic expressions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Expr {
    Const(Value),
    Var(String),
    /// Complement of a variable's value.
    Bar(String),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Implies(Box<Expr>, Box<Expr>),
    Cmp(CmpOp, Box<Expr>, Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Const(_) => {}
            Expr::Var(v) | Expr::Bar(v) => {
                out.insert(v.clone());
            }
            Expr::Not(a) => a.vars(out),
            Expr::And(a, b)
            | Expr::Or(a, b)
            | Expr::Implies(a, b)
            | Expr::Cmp(_, a, b)
            | Expr::Add(a, b)
            | Expr::Mul(a, b) => {
                a.vars(out);
                b.vars(out);
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(v) => write!(f, "{v}"),
            Expr::Var(v) => f.write_str(v),
            Expr::Bar(v) => write!(f, "~{v}"),
            Expr::Not(a) => write!(f, "!({a})"),
            Expr::And(a, b) => write!(f, "({a} & {b})"),
            Expr::Or(a, b) => write!(f, "({a} | {b})"),
            Expr::Implies(a, b) => write!(f, "({a} -> {b})"),
            Expr::Cmp(op, a, b) => write!(f, "{a} {op} {b}"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
        }
    }
}

/// Piece of a pattern-name template.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Part {
    Lit(String),
    Var { name: String, bar: bool },
}

/// A pattern-name template such as `H{~gamma}{xi1}u`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Template {
    pub parts: Vec<Part>,
}

impl Template {
    pub fn vars(&self, out: &mut BTreeSet<String>) {
        for p in &self.parts {
            if let Part::Var { name, .. } = p {
                out.insert(name.clone());
            }
        }
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.parts {
            match p {
                Part::Lit(s) => f.write_str(s)?,
                Part::Var { name, bar: false } => write!(f, "{{{name}}}")?,
                Part::Var { name, bar: true } => write!(f, "{{~{name}}}")?,
            }
        }
        Ok(())
    }
}

/// Side of a masking operator, fixed or given by a laterality variable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum MaskSide {
    Fixed(Side),
    Var { name: String, bar: bool },
}

impl fmt::Display for MaskSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MaskSide::Fixed(s) => write!(f, "{s}"),
            MaskSide::Var { name, bar: false } => write!(f, "{{{name}}}"),
            MaskSide::Var { name, bar: true } => write!(f, "{{~{name}}}"),
        }
    }
}

/// Right-hand side of a substitution binding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Binding {
    Value(Value),
    Var(String),
}

impl fmt::Display for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Binding::Value(v) => write!(f, "{v}"),
            Binding::Var(v) => f.write_str(v),
        }
    }
}

/// Formula syntax tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Node {
    Atom(Template),
    /// The empty superposition.
    Nothing,
    Superpose(Vec<Node>),
    Mask(MaskSide, Box<Node>),
    Guard(Expr, Box<Node>),
    /// `f.A + ~f.B`
    Choice(String, Box<Node>, Box<Node>),
    /// An instantiated reference to another formula; `body` is the referenced
    /// formula with the bindings applied and its private variables renamed.
    Subst { name: String, bindings: Vec<(String, Binding)>, body: Box<Node> },
}

impl Node {
    /// Every variable occurring in the tree.
    pub fn vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Node::Atom(t) => t.vars(out),
            Node::Nothing => {}
            Node::Superpose(xs) => xs.iter().for_each(|x| x.vars(out)),
            Node::Mask(side, sub) => {
                if let MaskSide::Var { name, .. } = side {
                    out.insert(name.clone());
                }
                sub.vars(out);
            }
            Node::Guard(c, sub) => {
                c.vars(out);
                sub.vars(out);
            }
            Node::Choice(f, a, b) => {
                out.insert(f.clone());
                a.vars(out);
                b.vars(out);
            }
            Node::Subst { body, .. } => body.vars(out),
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Atom(t) => write!(f, "{t}"),
            Node::Nothing => f.write_str("nothing"),
            Node::Superpose(xs) => {
                f.write_str("(")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" + ")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str(")")
            }
            Node::Mask(MaskSide::Fixed(s), sub) => write!(f, "mu_{s}({sub})"),
            Node::Mask(side, sub) => write!(f, "mu_{side}({sub})"),
            Node::Guard(Expr::Var(v), sub) => write!(f, "{v}.{sub}"),
            Node::Guard(Expr::Bar(v), sub) => write!(f, "~{v}.{sub}"),
            Node::Guard(c, sub) => write!(f, "1{{{c}}}.{sub}"),
            Node::Choice(v, a, b) => write!(f, "({v}.{a} + ~{v}.{b})"),
            Node::Subst { name, bindings, .. } => {
                write!(f, "@{name}")?;
                if !bindings.is_empty() {
                    let bs: Vec<String> = bindings.iter().map(|(k, v)| format!("{k} := {v}")).collect();
                    write!(f, "[{}]", bs.join(", "))?;
                }
                Ok(())
            }
        }
    }
}

/// A parsed formula with its declarations and side conditions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Formula {
    pub name: String,
    pub label: String,
    /// Count printed alongside the formula, when there is one.
    pub expect: Option<u64>,
    pub vars: Vec<VarDecl>,
    /// Variables of a referenced formula that stay linked to the caller's
    /// variables of the same name; all others are private to each reference.
    pub shared: Vec<String>,
    pub side_conditions: Vec<Expr>,
    pub body: Node,
}

impl Formula {
    pub fn var(&self, name: &str) -> Option<&VarDecl> {
        self.vars.iter().find(|v| v.name == name)
    }

    /// Names of the flag variables occurring in the body.
    pub fn flags(&self) -> BTreeSet<String> {
        let mut used = BTreeSet::new();
        self.body.vars(&mut used);
        used.into_iter().filter(|n| matches!(self.var(n).map(|d| &d.domain), Some(Domain::Flag))).collect()
    }

    /// Names of all variables occurring in the body.
    pub fn body_vars(&self) -> BTreeSet<String> {
        let mut used = BTreeSet::new();
        self.body.vars(&mut used);
        used
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.name, self.body)?;
        for c in &self.side_conditions {
            write!(f, "\n  with {c}")?;
        }
        Ok(())
    }
}
