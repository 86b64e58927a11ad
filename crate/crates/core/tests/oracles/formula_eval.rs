//! Brute-force formula evaluator: enumerates every valuation of every
//! declared variable, evaluates the tree directly and keeps the results
//! whose side conditions hold. Shares nothing with the lazy engine but the
//! syntax tree and the prototile type.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use interwoven::tile_algebra::formula::{CmpOp, MaskSide, Part};
use interwoven::tile_algebra::{Domain, Expr, Formula, Node, PatternName, Prototile, Side, Value};

type Env = BTreeMap<String, (Value, Domain)>;

fn bar(v: &Value, d: &Domain) -> Value {
    d.bar(v)
}

fn get(env: &Env, name: &str, negate: bool) -> Value {
    let (v, d) = &env[name];
    if negate {
        bar(v, d)
    } else {
        v.clone()
    }
}

fn num(v: &Value) -> i64 {
    match v {
        Value::Int(i) => *i,
        Value::Sym(_) => 1,
    }
}

pub fn eval(e: &Expr, env: &Env) -> Value {
    let b = |x: bool| Value::Int(x as i64);
    match e {
        Expr::Const(v) => v.clone(),
        Expr::Var(n) => get(env, n, false),
        Expr::Bar(n) => get(env, n, true),
        Expr::Not(a) => b(num(&eval(a, env)) == 0),
        Expr::And(x, y) => b(num(&eval(x, env)) != 0 && num(&eval(y, env)) != 0),
        Expr::Or(x, y) => b(num(&eval(x, env)) != 0 || num(&eval(y, env)) != 0),
        Expr::Implies(x, y) => b(num(&eval(x, env)) == 0 || num(&eval(y, env)) != 0),
        Expr::Cmp(op, x, y) => {
            let (p, q) = (eval(x, env), eval(y, env));
            b(match op {
                CmpOp::Eq => p == q,
                CmpOp::Ne => p != q,
                CmpOp::Lt => num(&p) < num(&q),
                CmpOp::Le => num(&p) <= num(&q),
                CmpOp::Gt => num(&p) > num(&q),
                CmpOp::Ge => num(&p) >= num(&q),
            })
        }
        Expr::Add(x, y) => Value::Int(num(&eval(x, env)) + num(&eval(y, env))),
        Expr::Mul(x, y) => Value::Int(num(&eval(x, env)) * num(&eval(y, env))),
    }
}

fn side(s: &MaskSide, env: &Env) -> Side {
    match s {
        MaskSide::Fixed(s) => *s,
        MaskSide::Var { name, bar } => match get(env, name, *bar) {
            Value::Sym(x) if x == "l" => Side::L,
            _ => Side::R,
        },
    }
}

pub fn value(n: &Node, env: &Env) -> Prototile {
    match n {
        Node::Atom(t) => {
            let mut s = String::new();
            for p in &t.parts {
                match p {
                    Part::Lit(l) => s.push_str(l),
                    Part::Var { name, bar } => s.push_str(&get(env, name, *bar).to_string()),
                }
            }
            Prototile::atom(s.parse::<PatternName>().expect("valid pattern"))
        }
        Node::Nothing => Prototile::empty(),
        Node::Superpose(xs) => xs.iter().fold(Prototile::empty(), |acc, x| acc.superpose(&value(x, env))),
        Node::Mask(s, sub) => value(sub, env).mask(side(s, env)),
        Node::Guard(c, sub) => {
            if num(&eval(c, env)) != 0 {
                value(sub, env)
            } else {
                Prototile::empty()
            }
        }
        Node::Choice(f, a, b) => {
            if num(&get(env, f, false)) != 0 {
                value(a, env)
            } else {
                value(b, env)
            }
        }
        Node::Subst { body, .. } => value(body, env),
    }
}

/// All prototiles of `f` by exhaustive valuation (only variables that
/// occur somewhere are enumerated).
pub fn brute_expand(f: &Formula) -> BTreeSet<Prototile> {
    let mut used = f.body_vars();
    for c in &f.side_conditions {
        c.vars(&mut used);
    }
    let vars: Vec<_> = f.vars.iter().filter(|v| used.contains(&v.name)).collect();
    let mut out = BTreeSet::new();
    let mut idx = vec![0usize; vars.len()];
    loop {
        let env: Env = vars
            .iter()
            .zip(&idx)
            .map(|(d, &i)| (d.name.clone(), (d.domain.values()[i].clone(), d.domain.clone())))
            .collect();
        if f.side_conditions.iter().all(|c| num(&eval(c, &env)) != 0) {
            out.insert(value(&f.body, &env));
        }
        let mut k = 0;
        loop {
            if k == vars.len() {
                return out;
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
