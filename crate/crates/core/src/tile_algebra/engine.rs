//! Expansion of formulas into prototiles and the arithmetic counting rule.
//!
//! Expansion walks the tree with a stack of pending terms and values a
//! variable only when a guard, template or mask needs it, so variables of
//! inactive branches are never enumerated. A completed superposition is
//! kept when its side conditions can be met by some valuation of the
//! variables still free.

use std::collections::{BTreeMap, BTreeSet};

use super::formula::{CmpOp, Domain, Expr, Formula, MaskSide, Node, Part, Value};
use super::pattern::PatternName;
use super::prototile::{Prototile, Side, Slot};

type Env = Vec<Option<Value>>;

/// A formula with its variables resolved to indices.
struct Compiled<'f> {
    index: BTreeMap<&'f str, usize>,
    domains: Vec<&'f Domain>,
    conditions: Vec<(&'f Expr, Vec<usize>)>,
}

/// Evaluation needs the value of a variable that is not valued yet.
struct Missing(usize);

impl<'f> Compiled<'f> {
    fn new(formula: &'f Formula) -> Self {
        let index: BTreeMap<&str, usize> = formula.vars.iter().enumerate().map(|(i, v)| (v.name.as_str(), i)).collect();
        let domains = formula.vars.iter().map(|v| &v.domain).collect();
        let conditions = formula
            .side_conditions
            .iter()
            .map(|c| {
                let mut vs = BTreeSet::new();
                c.vars(&mut vs);
                (c, vs.iter().map(|v| index[v.as_str()]).collect())
            })
            .collect();
        Compiled { index, domains, conditions }
    }

    fn var(&self, name: &str) -> usize {
        self.index[name]
    }

    fn value(&self, env: &Env, name: &str, bar: bool) -> Result<Value, Missing> {
        let i = self.var(name);
        match &env[i] {
            Some(v) if bar => Ok(self.domains[i].bar(v)),
            Some(v) => Ok(v.clone()),
            None => Err(Missing(i)),
        }
    }

    fn eval(&self, e: &Expr, env: &Env) -> Result<Value, Missing> {
        fn truth(v: &Value) -> bool {
            match v {
                Value::Int(i) => *i != 0,
                Value::Sym(_) => true,
            }
        }
        fn int(v: &Value) -> i64 {
            match v {
                Value::Int(i) => *i,
                Value::Sym(_) => 0,
            }
        }
        let b = |x: bool| Value::Int(i64::from(x));
        Ok(match e {
            Expr::Const(v) => v.clone(),
            Expr::Var(v) => self.value(env, v, false)?,
            Expr::Bar(v) => self.value(env, v, true)?,
            Expr::Not(a) => b(!truth(&self.eval(a, env)?)),
            // Short-circuit both ways so that a known operand can decide
            // the result while the other is still free.
            Expr::And(x, y) => match (self.eval(x, env), self.eval(y, env)) {
                (Ok(p), _) if !truth(&p) => b(false),
                (_, Ok(q)) if !truth(&q) => b(false),
                (Ok(_), Ok(_)) => b(true),
                (Err(m), _) | (_, Err(m)) => return Err(m),
            },
            Expr::Or(x, y) => match (self.eval(x, env), self.eval(y, env)) {
                (Ok(p), _) if truth(&p) => b(true),
                (_, Ok(q)) if truth(&q) => b(true),
                (Ok(_), Ok(_)) => b(false),
                (Err(m), _) | (_, Err(m)) => return Err(m),
            },
            Expr::Implies(x, y) => match (self.eval(x, env), self.eval(y, env)) {
                (Ok(p), _) if !truth(&p) => b(true),
                (_, Ok(q)) if truth(&q) => b(true),
                (Ok(_), Ok(_)) => b(false),
                (Err(m), _) | (_, Err(m)) => return Err(m),
            },
            Expr::Cmp(op, x, y) => {
                let (p, q) = (self.eval(x, env)?, self.eval(y, env)?);
                b(match op {
                    CmpOp::Eq => p == q,
                    CmpOp::Ne => p != q,
                    CmpOp::Lt => int(&p) < int(&q),
                    CmpOp::Le => int(&p) <= int(&q),
                    CmpOp::Gt => int(&p) > int(&q),
                    CmpOp::Ge => int(&p) >= int(&q),
                })
            }
            Expr::Add(x, y) => Value::Int(int(&self.eval(x, env)?) + int(&self.eval(y, env)?)),
            Expr::Mul(x, y) => Value::Int(int(&self.eval(x, env)?) * int(&self.eval(y, env)?)),
        })
    }

    fn holds(&self, e: &Expr, env: &Env) -> Result<bool, Missing> {
        Ok(match self.eval(e, env)? {
            Value::Int(i) => i != 0,
            Value::Sym(_) => true,
        })
    }

    fn render(&self, parts: &[Part], env: &Env) -> Result<PatternName, Missing> {
        let mut s = String::new();
        for p in parts {
            match p {
                Part::Lit(l) => s.push_str(l),
                Part::Var { name, bar } => s.push_str(&self.value(env, name, *bar)?.to_string()),
            }
        }
        Ok(s.parse().unwrap_or_else(|_| panic!("templates are checked when parsed, got `{s}`")))
    }

    fn side(&self, side: &MaskSide, env: &Env) -> Result<Side, Missing> {
        match side {
            MaskSide::Fixed(s) => Ok(*s),
            MaskSide::Var { name, bar } => Ok(match self.value(env, name, *bar)? {
                Value::Sym(s) if s == "r" => Side::R,
                _ => Side::L,
            }),
        }
    }

    // ---- side conditions ----

    /// Whether the side conditions can all hold for some valuation of the
    /// free variables. Conditions are split into groups linked by shared free
    /// variables; each group is searched on its own.
    fn satisfiable(&self, env: &mut Env) -> bool {
        let mut pending: Vec<usize> = Vec::new();
        for (k, (c, _)) in self.conditions.iter().enumerate() {
            match self.holds(c, env) {
                Ok(true) => {}
                Ok(false) => return false,
                Err(_) => pending.push(k),
            }
        }
        // Group the undecided conditions by shared free variables.
        let mut groups: Vec<(BTreeSet<usize>, Vec<usize>)> = Vec::new();
        for k in pending {
            let free: BTreeSet<usize> = self.conditions[k].1.iter().copied().filter(|&v| env[v].is_none()).collect();
            let mut merged = (free, vec![k]);
            let mut rest = Vec::new();
            for g in groups.drain(..) {
                if g.0.is_disjoint(&merged.0) {
                    rest.push(g);
                } else {
                    merged.0.extend(g.0);
                    merged.1.extend(g.1);
                }
            }
            rest.push(merged);
            groups = rest;
        }
        groups.iter().all(|(_, ks)| self.search(ks, env))
    }

    fn search(&self, ks: &[usize], env: &mut Env) -> bool {
        for &k in ks {
            match self.holds(self.conditions[k].0, env) {
                Ok(true) => {}
                Ok(false) => return false,
                Err(Missing(v)) => {
                    for val in self.domains[v].values() {
                        env[v] = Some(val);
                        if self.search(ks, env) {
                            env[v] = None;
                            return true;
                        }
                    }
                    env[v] = None;
                    return false;
                }
            }
        }
        true
    }

    // ---- expansion ----

    fn expand(&self, env: &mut Env, acc: Prototile, mut stack: Vec<(&'f Node, Slot)>, out: &mut BTreeSet<Prototile>) {
        let mut acc = acc;
        while let Some((node, slot)) = stack.pop() {
            let need = match node {
                Node::Atom(t) => match self.render(&t.parts, env) {
                    Ok(name) => {
                        acc.insert(name, slot);
                        continue;
                    }
                    Err(m) => m,
                },
                Node::Nothing => continue,
                Node::Superpose(xs) => {
                    stack.extend(xs.iter().rev().map(|x| (x, slot)));
                    continue;
                }
                Node::Mask(side, sub) => match self.side(side, env) {
                    Ok(s) => {
                        stack.push((sub, slot.intersect(s.slot())));
                        continue;
                    }
                    Err(m) => m,
                },
                Node::Guard(c, sub) => match self.holds(c, env) {
                    Ok(true) => {
                        stack.push((sub, slot));
                        continue;
                    }
                    Ok(false) => continue,
                    Err(m) => m,
                },
                Node::Choice(f, a, b) => match self.value(env, f, false) {
                    Ok(Value::Int(0)) => {
                        stack.push((b, slot));
                        continue;
                    }
                    Ok(_) => {
                        stack.push((a, slot));
                        continue;
                    }
                    Err(m) => m,
                },
                Node::Subst { body, .. } => {
                    stack.push((body, slot));
                    continue;
                }
            };
            // Branch on the missing variable and retry this node.
            let Missing(v) = need;
            stack.push((node, slot));
            for val in self.domains[v].values() {
                env[v] = Some(val);
                self.expand(env, acc.clone(), stack.clone(), out);
            }
            env[v] = None;
            return;
        }
        if self.satisfiable(env) {
            out.insert(acc);
        }
    }

    fn initial_env(&self, bindings: &[(&str, Value)]) -> Env {
        let mut env: Env = vec![None; self.domains.len()];
        for (name, v) in bindings {
            if let Some(&i) = self.index.get(name) {
                env[i] = Some(v.clone());
            }
        }
        env
    }

    // ---- counting rule ----

    /// Number of valuations distinguished by the counting rule.
    fn rule(&self, node: &'f Node, env: &mut Env) -> u128 {
        match node {
            Node::Atom(t) => {
                let mut vs = BTreeSet::new();
                t.vars(&mut vs);
                vs.iter()
                    .map(|v| self.var(v))
                    .filter(|&i| env[i].is_none())
                    .map(|i| self.domains[i].size() as u128)
                    .product()
            }
            Node::Nothing => 1,
            Node::Mask(side, sub) => match side {
                MaskSide::Var { name, .. } if env[self.var(name)].is_none() => {
                    let i = self.var(name);
                    let mut total = 0;
                    for val in self.domains[i].values() {
                        env[i] = Some(val);
                        total += self.rule(sub, env);
                    }
                    env[i] = None;
                    total
                }
                _ => self.rule(sub, env),
            },
            Node::Subst { body, .. } => self.rule(body, env),
            Node::Superpose(xs) => self.rule_sum(xs.iter().collect(), env),
            Node::Guard(..) | Node::Choice(..) => self.rule_sum(vec![node], env),
        }
    }

    /// The rule for a superposition: for each valuation of the variables in
    /// the guards (and of those shared between terms), the active terms
    /// multiply their own counts; valuations giving the same active terms
    /// with the same values in those terms are counted once, and valuations
    /// with no active term contribute nothing.
    fn rule_sum(&self, terms: Vec<&'f Node>, env: &mut Env) -> u128 {
        // Flatten guard chains and choices into (conditions, body).
        let mut chains: Vec<(Vec<Expr>, &'f Node)> = Vec::new();
        fn strip<'n>(n: &'n Node, conds: Vec<Expr>, out: &mut Vec<(Vec<Expr>, &'n Node)>) {
            match n {
                Node::Guard(c, sub) => {
                    let mut cs = conds;
                    cs.push(c.clone());
                    strip(sub, cs, out);
                }
                Node::Choice(f, a, b) => {
                    let mut ca = conds.clone();
                    ca.push(Expr::Var(f.clone()));
                    strip(a, ca, out);
                    let mut cb = conds;
                    cb.push(Expr::Bar(f.clone()));
                    strip(b, cb, out);
                }
                other => out.push((conds, other)),
            }
        }
        for t in terms {
            strip(t, Vec::new(), &mut chains);
        }
        let free = |vs: &BTreeSet<String>, env: &Env| -> BTreeSet<usize> {
            vs.iter().map(|v| self.var(v)).filter(|&i| env[i].is_none()).collect()
        };
        let body_vars: Vec<BTreeSet<usize>> = chains
            .iter()
            .map(|(_, b)| {
                let mut vs = BTreeSet::new();
                b.vars(&mut vs);
                free(&vs, env)
            })
            .collect();
        let mut enumerate: BTreeSet<usize> = BTreeSet::new();
        for (cs, _) in &chains {
            let mut vs = BTreeSet::new();
            cs.iter().for_each(|c| c.vars(&mut vs));
            enumerate.extend(free(&vs, env));
        }
        for (i, a) in body_vars.iter().enumerate() {
            for b in &body_vars[i + 1..] {
                enumerate.extend(a.intersection(b));
            }
        }
        let order: Vec<usize> = enumerate.into_iter().collect();
        let mut seen: BTreeSet<(Vec<usize>, Vec<Option<Value>>)> = BTreeSet::new();
        let mut total = 0u128;
        let mut idx = vec![0usize; order.len()];
        loop {
            for (k, &v) in order.iter().enumerate() {
                env[v] = Some(self.domains[v].values()[idx[k]].clone());
            }
            let active: Vec<usize> = chains
                .iter()
                .enumerate()
                .filter(|(_, (cs, _))| cs.iter().all(|c| matches!(self.holds(c, env), Ok(true))))
                .map(|(i, _)| i)
                .collect();
            if !active.is_empty() {
                let used: BTreeSet<usize> = active.iter().flat_map(|&i| body_vars[i].iter().copied()).collect();
                let sig: Vec<Option<Value>> =
                    order.iter().map(|&v| if used.contains(&v) { env[v].clone() } else { None }).collect();
                if seen.insert((active.clone(), sig)) {
                    let mut prod = 1u128;
                    for &i in &active {
                        prod *= self.rule(chains[i].1, env);
                    }
                    total += prod;
                }
            }
            let mut k = 0;
            loop {
                if k == order.len() {
                    for &v in &order {
                        env[v] = None;
                    }
                    return total;
                }
                idx[k] += 1;
                if idx[k] < self.domains[order[k]].size() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }
}

/// All distinct prototiles of a formula.
pub fn expand_formula(f: &Formula) -> BTreeSet<Prototile> {
    expand_formula_with(f, &[])
}

/// Expansion with some variables fixed beforehand (unknown names ignored).
pub fn expand_formula_with(f: &Formula, bindings: &[(&str, Value)]) -> BTreeSet<Prototile> {
    let c = Compiled::new(f);
    let mut env = c.initial_env(bindings);
    let mut out = BTreeSet::new();
    c.expand(&mut env, Prototile::empty(), vec![(&f.body, Slot::FULL)], &mut out);
    out
}

/// Number of distinct prototiles of a formula.
pub fn count_formula(f: &Formula) -> usize {
    expand_formula(f).len()
}

/// Number of distinct prototiles with some variables fixed.
pub fn count_formula_with(f: &Formula, bindings: &[(&str, Value)]) -> usize {
    expand_formula_with(f, bindings).len()
}

/// The arithmetic counting rule, ignoring side conditions.
pub fn rule_count(f: &Formula) -> u128 {
    rule_count_with(f, &[])
}

/// The arithmetic counting rule with some variables fixed.
pub fn rule_count_with(f: &Formula, bindings: &[(&str, Value)]) -> u128 {
    let c = Compiled::new(f);
    let mut env = c.initial_env(bindings);
    c.rule(&f.body, &mut env)
}
