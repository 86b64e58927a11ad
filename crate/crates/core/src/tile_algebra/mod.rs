//! Tile-formula algebra: elementary pattern names, masked superpositions,
//! a small formula language, expansion into canonical prototiles and the
//! arithmetic counting rule.

pub mod engine;
pub mod formula;
pub mod parser;
pub mod pattern;
pub mod prototile;
pub mod report;

use std::collections::BTreeSet;

pub use engine::{count_formula, count_formula_with, expand_formula, expand_formula_with, rule_count, rule_count_with};
pub use formula::{Domain, Expr, Formula, Node, Value};
pub use parser::{parse_corpus, parse_corpus_with, parse_formula, parse_formula_with, Corpus, ParseError};
pub use pattern::{Gamma, Hue, Kappa, Nu, PatternName, Pi, Sigma, Tau, Xi};
pub use prototile::{Prototile, PrototileParseError, Side, Slot};
pub use report::{hyper_corpus, hyper_count_report, HyperReport};

/// Source of the Euclidean formulas.
pub const EUCLID_SOURCE: &str = include_str!("corpus/euclid.tf");

/// Names of the Euclidean formulas whose union is the catalog of active and
/// passive tiles (the information tiles excluded).
pub const EUCLID_FAMILIES: [&str; 8] = ["B", "V", "M", "C", "Lut", "Luphi", "Ll", "Lp"];

/// The parsed Euclidean corpus.
pub fn euclid_corpus() -> Corpus {
    parse_corpus(EUCLID_SOURCE).expect("the shipped Euclidean corpus parses")
}

/// Union of the expansions of the eight tile families.
pub fn euclid_families() -> BTreeSet<Prototile> {
    let c = euclid_corpus();
    EUCLID_FAMILIES.iter().flat_map(|n| expand_formula(c.get(n).expect("family present"))).collect()
}

/// The Euclidean catalog: the eight families plus the information tiles.
pub fn euclid_catalog() -> BTreeSet<Prototile> {
    let c = euclid_corpus();
    let mut all = euclid_families();
    all.extend(expand_formula(c.get("info").expect("info tiles present")));
    all
}
