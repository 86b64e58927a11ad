//! Formula parsing, expansion, counting and the prototile algebra.

mod oracles;

use std::collections::BTreeSet;

use interwoven::tile_algebra::*;
use oracles::formula_eval::brute_expand;
use proptest::prelude::*;

fn p(s: &str) -> PatternName {
    s.parse().unwrap()
}

#[test]
fn euclidean_family_counts() {
    let c = euclid_corpus();
    let expected = [("B", 14), ("V", 8), ("M", 36), ("C", 20), ("Lut", 28), ("Luphi", 32), ("Ll", 22), ("Lp", 24)];
    for (name, n) in expected {
        let f = c.get(name).unwrap();
        assert_eq!(count_formula(f), n, "{name}");
        assert_eq!(f.expect, Some(n as u64));
    }
}

#[test]
fn euclidean_catalog_sizes() {
    assert_eq!(euclid_families().len(), 184);
    assert_eq!(euclid_catalog().len(), 190);
}

#[test]
fn lazy_expansion_equals_brute_force_on_euclidean_corpus() {
    for f in &euclid_corpus().formulas {
        assert_eq!(expand_formula(f), brute_expand(f), "{}", f.name);
    }
}

#[test]
fn lazy_expansion_equals_brute_force_on_small_hyperbolic_formulas() {
    let c = hyper_corpus();
    for name in ["Bb0", "Bbnr", "V", "M", "C", "Lpz", "Spz", "W"] {
        let f = c.get(name).unwrap();
        assert_eq!(expand_formula(f), brute_expand(f), "{name}");
    }
}

#[test]
fn counting_rule_agrees_without_side_conditions() {
    for f in euclid_corpus().formulas.iter().filter(|f| f.side_conditions.is_empty()) {
        assert_eq!(rule_count(f), count_formula(f) as u128, "{}", f.name);
    }
}

#[test]
fn counting_rule_overcounts_when_conditions_interact() {
    // (B) carries a side condition; the bare rule cannot see it.
    let c = euclid_corpus();
    let b = c.get("B").unwrap();
    assert!(rule_count(b) > count_formula(b) as u128);
}

#[test]
fn vertex_definition_expands_to_bottom_quadrants() {
    let f = parse_formula("mu_B(mu_L(L{gamma}{tau}ul) + mu_R(L{gamma}{tau}ur))");
    // Template variables must be declared: use a block.
    assert!(f.is_err());
    let f = parse_formula(
        "formula Vdef\n param gamma in {r}\n param tau in {t}\n body\n  mu_B(mu_L(L{gamma}{tau}ul) + mu_R(L{gamma}{tau}ur))\n end\n",
    )
    .unwrap();
    let tiles: Vec<Prototile> = expand_formula(&f).into_iter().collect();
    assert_eq!(tiles.len(), 1);
    let t = &tiles[0];
    assert_eq!(t.slot_of(&p("Lrtul")), Some(Slot::BOTTOM_LEFT));
    assert_eq!(t.slot_of(&p("Lrtur")), Some(Slot::BOTTOM_RIGHT));
    assert_eq!(t.len(), 2);
}

#[test]
fn blank_atom() {
    let f = parse_formula("W").unwrap();
    assert_eq!(f.body, Node::Atom(formula::Template { parts: vec![formula::Part::Lit("W".into())] }));
    let e = expand_formula(&f);
    assert_eq!(e.len(), 1);
    assert_eq!(e.into_iter().next().unwrap(), Prototile::atom(PatternName::W));
}

#[test]
fn optional_distinct_atom_gives_two() {
    assert_eq!(count_formula(&parse_formula("Hg + e.Hy").unwrap()), 2);
    assert_eq!(count_formula(&parse_formula("Hg + e.Hy + ~e.nothing").unwrap()), 2);
}

#[test]
fn corner_expansion_is_pairwise_distinct() {
    let c = euclid_corpus();
    let tiles: Vec<String> = expand_formula(c.get("C").unwrap()).iter().map(|t| t.to_string()).collect();
    assert_eq!(tiles.len(), 20);
    for i in 0..tiles.len() {
        for j in i + 1..tiles.len() {
            assert_ne!(tiles[i], tiles[j]);
        }
    }
}

#[test]
fn mid_point_formula_variables() {
    let c = euclid_corpus();
    let vars = c.get("M").unwrap().body_vars();
    let expected: BTreeSet<String> = ["gamma", "gamma1", "tau", "tau1", "xi"].iter().map(|s| s.to_string()).collect();
    assert_eq!(vars, expected);
}

#[test]
fn parse_errors() {
    assert!(matches!(parse_formula("Hg + (Hy"), Err(ParseError::Syntax { .. })));
    assert!(matches!(parse_formula("Hg + Lxx"), Err(ParseError::UnknownPattern { .. })));
    assert!(matches!(parse_formula("Hg + a.Hy with a -> zz"), Err(ParseError::UnboundVariable { .. })));
    let err = parse_formula("formula X\n flag a\n with b\n body\n  Hg + a.Hy\n end\n").unwrap_err();
    assert!(matches!(err, ParseError::UnboundVariable { ref name, line: 3, .. } if name == "b"), "{err:?}");
    let err = parse_formula("formula X\n flag a, b\n with b\n body\n  Hg + a.Hy\n end\n").unwrap_err();
    assert!(matches!(err, ParseError::UnusedConditionVariable { .. }), "{err:?}");
}

#[test]
fn substitution_binds_before_enumeration() {
    let src = "formula Base\n flag e, f\n body\n  Hg + e.Hy + f.Hrl\n end\n\
               formula Use\n body\n  Z + @Base[e := 0]\n end\n";
    let c = parse_corpus(src).unwrap();
    assert_eq!(count_formula(c.get("Base").unwrap()), 4);
    assert_eq!(count_formula(c.get("Use").unwrap()), 2);
}

#[test]
fn substitution_carries_side_conditions() {
    let src = "formula Base\n flag e, f\n with !(e & f)\n body\n  Hg + e.Hy + f.Hrl\n end\n\
               formula Use\n body\n  Z + @Base[f := 1]\n end\n";
    let c = parse_corpus(src).unwrap();
    let tiles = expand_formula(c.get("Use").unwrap());
    assert_eq!(tiles.len(), 1);
    assert!(!tiles.iter().next().unwrap().contains(&p("Hy")));
}

#[test]
fn shipped_hyperbolic_corpus_parses_completely() {
    let c = hyper_corpus();
    assert_eq!(c.names(), vec!["Bb0", "Bbnr", "V", "M", "Luphi", "Lut", "Ll", "C", "Lpz", "Spz", "W"]);
}

#[test]
fn hyperbolic_report_rows() {
    let r = hyper_count_report();
    let v = r.rows.iter().find(|r| r.label == "(V)").unwrap();
    let pats: Vec<u64> = v.colours.iter().map(|c| c.computed_patterns).collect();
    assert_eq!(pats, vec![24, 4, 4]);
    assert_eq!(v.computed_prototiles, 36);
    let w = r.rows.iter().find(|r| r.label == "(W)").unwrap();
    assert_eq!((w.colours[0].computed_patterns, w.computed_prototiles), (1, 544));
    // Summation of the printed column, done here independently.
    let printed = [2534u64, 6012, 36, 576, 1038, 318, 648, 180, 1152, 144, 544];
    assert_eq!(r.printed_column_sum, printed.iter().sum::<u64>());
    assert_eq!(r.stated_prototiles, 13_132);
    assert!(r.flags.iter().any(|f| f.contains(&r.printed_column_sum.to_string()) && f.contains("13132")));
    let text = r.to_text();
    assert!(text.contains("13132") && text.contains(&r.computed_prototiles.to_string()));
}

// ---- properties ----

fn atom_name() -> impl Strategy<Value = PatternName> {
    prop::sample::select(vec!["Hg", "Hy", "Hrl", "Hrr", "Z", "W", "p", "Bb0t", "Lrtul", "Mbnphil"]).prop_map(p)
}

fn slot() -> impl Strategy<Value = Slot> {
    (1u8..16).prop_map(Slot::from_bits)
}

fn prototile() -> impl Strategy<Value = Prototile> {
    prop::collection::vec((atom_name(), slot()), 0..5)
        .prop_map(|xs| xs.into_iter().fold(Prototile::empty(), |t, (n, s)| t.with(n, s)))
}

fn side() -> impl Strategy<Value = Side> {
    prop::sample::select(vec![Side::L, Side::R, Side::B, Side::T])
}

/// Random bare formulas over three flags.
fn formula_src() -> impl Strategy<Value = String> {
    let leaf = prop::sample::select(vec!["Hg", "Hy", "Hrl", "Hrr", "Z", "W", "p", "nothing"]).prop_map(String::from);
    let tree = leaf.prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(|xs| format!("({})", xs.join(" + "))),
            (prop::sample::select(vec!["a", "b", "c", "~a", "~b", "~c", "1{a + b >= 1}"]), inner.clone())
                .prop_map(|(g, x)| format!("{g}.{x}")),
            (prop::sample::select(vec!["L", "R", "T", "B"]), inner).prop_map(|(s, x)| format!("mu_{s}({x})")),
        ]
    });
    let cond = prop::option::of(prop::sample::select(vec!["a -> b", "!(a & c)", "a + b + c <= 1", "(a + b) * (b + c) > 0"]));
    // Mention every flag so that side conditions always refer to used flags.
    (tree, cond).prop_map(|(t, c)| {
        let base = format!("Z + a.Hg + b.Hy + c.Hrl + {t}");
        match c {
            Some(c) => format!("{base} with {c}"),
            None => base,
        }
    })
}

/// Base atom plus flag-guarded distinct atoms and choices between distinct
/// atoms: every condition is independent of the others.
fn independent_src() -> impl Strategy<Value = String> {
    (0usize..4, 0usize..3).prop_map(|(k, m)| {
        let atoms = ["Hg", "Hy", "Hrl", "Hrr", "W", "p", "Lrtul", "Lrtur", "Bb0t", "Bbnt", "Brt"];
        let mut terms = vec!["Z".to_string()];
        let mut next = 0;
        for i in 0..k {
            terms.push(format!("f{i}.{}", atoms[next]));
            next += 1;
        }
        for j in 0..m {
            terms.push(format!("g{j}.{} + ~g{j}.{}", atoms[next], atoms[next + 1]));
            next += 2;
        }
        terms.join(" + ")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn superposition_is_commutative_associative_idempotent(a in prototile(), b in prototile(), c in prototile()) {
        prop_assert_eq!(a.superpose(&b), b.superpose(&a));
        prop_assert_eq!(a.superpose(&b).superpose(&c), a.superpose(&b.superpose(&c)));
        prop_assert_eq!(a.superpose(&a), a.clone());
    }

    #[test]
    fn masking_is_idempotent_and_halves_recompose(a in prototile(), s in side()) {
        prop_assert_eq!(a.mask(s).mask(s), a.mask(s));
        prop_assert_eq!(a.mask(Side::L).superpose(&a.mask(Side::R)), a.clone());
        prop_assert_eq!(a.mask(Side::T).superpose(&a.mask(Side::B)), a.clone());
    }

    #[test]
    fn expansion_equals_brute_force(src in formula_src()) {
        let f = parse_formula(&src).unwrap();
        let e = expand_formula(&f);
        prop_assert_eq!(count_formula(&f), e.len());
        prop_assert_eq!(e, brute_expand(&f));
    }

    #[test]
    fn rule_agrees_on_independent_conditions(src in independent_src()) {
        let f = parse_formula(&src).unwrap();
        prop_assert_eq!(rule_count(&f), count_formula(&f) as u128);
    }

    #[test]
    fn display_round_trips_through_the_parser(src in formula_src()) {
        let f = parse_formula(&src).unwrap();
        let printed = f.body.to_string();
        let mut again = parse_formula(&printed).unwrap();
        again.side_conditions = f.side_conditions.clone();
        prop_assert_eq!(expand_formula(&again), brute_expand(&f));
    }
}
