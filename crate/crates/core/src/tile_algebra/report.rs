//! Counting report for the hyperbolic prototiles.
//!
//! Each row expands one formula of the hyperbolic corpus, splits the
//! patterns by colour, and multiplies by the number of isoclines a pattern
//! may sit on and by the number of mantilla tiles that can carry it. The
//! printed figures are kept next to the computed ones; every disagreement,
//! including inconsistencies of the printed table itself, is flagged.

use std::fmt::Write as _;

use serde::Serialize;

use super::engine::count_formula_with;
use super::formula::Value;
use super::parser::{parse_corpus, Corpus};

/// Source of the hyperbolic formulas.
pub const HYPER_SOURCE: &str = include_str!("corpus/hyper.tf");

/// The parsed hyperbolic corpus.
pub fn hyper_corpus() -> Corpus {
    parse_corpus(HYPER_SOURCE).expect("the shipped hyperbolic corpus parses")
}

/// Printed total of the prototile column.
pub const STATED_PROTOTILE_TOTAL: u64 = 13_132;
/// Printed total of the pattern column.
pub const STATED_PATTERN_TOTAL: u64 = 997;

struct ColourSpec {
    colour: &'static str,
    value: Option<&'static str>,
    printed_patterns: u64,
    isoclines: &'static str,
    isocline_factor: u64,
}

struct RowSpec {
    label: &'static str,
    formula: &'static str,
    split: Option<&'static str>,
    fixed: &'static [(&'static str, &'static str)],
    colours: Vec<ColourSpec>,
    mantilla: u64,
    printed_prototiles: u64,
}

const fn col(
    colour: &'static str,
    value: Option<&'static str>,
    printed_patterns: u64,
    isoclines: &'static str,
    isocline_factor: u64,
) -> ColourSpec {
    ColourSpec { colour, value, printed_patterns, isoclines, isocline_factor }
}

/// The printed counting table. Patterns of blue-0 trilaterals lie on
/// isocline 0 (phantoms) or 10 (triangles), one isocline per pattern; red
/// ones on isoclines 5 and 15; simple blue ones on 15. Leg rows are split by
/// the colour of the crossed basis.
fn table() -> Vec<RowSpec> {
    let three = |p: [u64; 3], b0_iso: &'static str| {
        vec![
            col("blue-0", Some("b0"), p[0], b0_iso, 1),
            col("simple blue", Some("bn"), p[1], "15", 1),
            col("red", Some("r"), p[2], "5, 15", 2),
        ]
    };
    let passive = "1-4, 6-9, 11-14, 16-19";
    vec![
        RowSpec {
            label: "(B_b0)",
            formula: "Bb0",
            split: None,
            fixed: &[],
            colours: vec![col("blue-0", None, 86, "phantoms: 0, triangles: 10", 1)],
            mantilla: 34,
            printed_prototiles: 2534,
        },
        RowSpec {
            label: "(B_bn,r)",
            formula: "Bbnr",
            split: Some("gamma1"),
            fixed: &[],
            colours: vec![col("simple blue", Some("bn"), 62, "15", 1), col("red", Some("r"), 62, "5, 15", 2)],
            mantilla: 34,
            printed_prototiles: 6012,
        },
        RowSpec {
            label: "(V)",
            formula: "V",
            split: Some("gamma"),
            fixed: &[],
            colours: three([24, 4, 4], "0, 10"),
            mantilla: 1,
            printed_prototiles: 36,
        },
        RowSpec {
            label: "(M)",
            formula: "M",
            split: Some("gamma"),
            fixed: &[],
            colours: three([48, 48, 48], "0, 10"),
            mantilla: 3,
            printed_prototiles: 576,
        },
        RowSpec {
            label: "(L_uphi)",
            formula: "Luphi",
            split: Some("gamma1"),
            fixed: &[],
            colours: three([154, 64, 648], "0, 10"),
            mantilla: 3,
            printed_prototiles: 1038,
        },
        RowSpec {
            label: "(L_ut)",
            formula: "Lut",
            split: Some("gamma1"),
            fixed: &[],
            colours: three([46, 20, 20], "10"),
            mantilla: 3,
            printed_prototiles: 318,
        },
        RowSpec {
            label: "(L_l)",
            formula: "Ll",
            split: Some("gamma1"),
            fixed: &[],
            colours: three([72, 48, 48], "10"),
            mantilla: 3,
            printed_prototiles: 648,
        },
        RowSpec {
            label: "(C)",
            formula: "C",
            split: Some("gamma"),
            fixed: &[],
            colours: three([24, 12, 12], "10"),
            mantilla: 3,
            printed_prototiles: 180,
        },
        RowSpec {
            label: "(L_pz)",
            formula: "Lpz",
            split: None,
            fixed: &[],
            colours: vec![col("any", None, 24, passive, 16)],
            mantilla: 3,
            printed_prototiles: 1152,
        },
        RowSpec {
            label: "(S_pz)",
            formula: "Spz",
            split: None,
            fixed: &[("i", "1")],
            colours: vec![col("any", None, 2, "1-4", 4)],
            mantilla: 34,
            printed_prototiles: 144,
        },
        RowSpec {
            label: "(W)",
            formula: "W",
            split: None,
            fixed: &[],
            colours: vec![col("any", None, 1, passive, 16)],
            mantilla: 34,
            printed_prototiles: 544,
        },
    ]
}

/// One colour of a report row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColourCount {
    pub colour: String,
    pub computed_patterns: u64,
    pub printed_patterns: u64,
    pub isoclines: String,
    pub isocline_factor: u64,
}

/// One row of the counting report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportRow {
    pub label: String,
    pub formula: String,
    pub colours: Vec<ColourCount>,
    pub mantilla: u64,
    /// Σ computed patterns × isocline factor × mantilla factor.
    pub computed_prototiles: u64,
    /// The same product applied to the printed pattern counts.
    pub recomputed_from_printed: u64,
    pub printed_prototiles: u64,
    pub flags: Vec<String>,
}

/// The full counting report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HyperReport {
    pub rows: Vec<ReportRow>,
    pub computed_patterns: u64,
    pub printed_patterns: u64,
    pub stated_patterns: u64,
    pub computed_prototiles: u64,
    /// Sum of the printed prototile column.
    pub printed_column_sum: u64,
    pub stated_prototiles: u64,
    pub flags: Vec<String>,
}

/// Build the counting report from the hyperbolic corpus.
pub fn hyper_count_report() -> HyperReport {
    let corpus = hyper_corpus();
    let mut rows = Vec::new();
    for spec in table() {
        let f = corpus.get(spec.formula).expect("every counted formula is in the corpus");
        let mut colours = Vec::new();
        let mut flags = Vec::new();
        let (mut computed, mut recomputed) = (0, 0);
        for c in &spec.colours {
            let mut bindings: Vec<(&str, Value)> = spec.fixed.iter().map(|(k, v)| (*k, Value::Sym(v.to_string()))).collect();
            if let (Some(var), Some(v)) = (spec.split, c.value) {
                bindings.push((var, Value::Sym(v.to_string())));
            }
            let n = count_formula_with(f, &bindings) as u64;
            if n != c.printed_patterns {
                flags.push(format!("{} patterns: computed {n}, printed {}", c.colour, c.printed_patterns));
            }
            computed += n * c.isocline_factor * spec.mantilla;
            recomputed += c.printed_patterns * c.isocline_factor * spec.mantilla;
            colours.push(ColourCount {
                colour: c.colour.to_string(),
                computed_patterns: n,
                printed_patterns: c.printed_patterns,
                isoclines: c.isoclines.to_string(),
                isocline_factor: c.isocline_factor,
            });
        }
        if recomputed != spec.printed_prototiles {
            flags.push(format!(
                "printed prototiles {} differ from the printed patterns recomputed ({recomputed})",
                spec.printed_prototiles
            ));
        }
        if computed != spec.printed_prototiles {
            flags.push(format!("prototiles: computed {computed}, printed {}", spec.printed_prototiles));
        }
        rows.push(ReportRow {
            label: spec.label.to_string(),
            formula: spec.formula.to_string(),
            colours,
            mantilla: spec.mantilla,
            computed_prototiles: computed,
            recomputed_from_printed: recomputed,
            printed_prototiles: spec.printed_prototiles,
            flags,
        });
    }
    let sum = |f: &dyn Fn(&ColourCount) -> u64| rows.iter().flat_map(|r| r.colours.iter()).map(f).sum::<u64>();
    let computed_patterns = sum(&|c| c.computed_patterns);
    let printed_patterns = sum(&|c| c.printed_patterns);
    let computed_prototiles = rows.iter().map(|r| r.computed_prototiles).sum();
    let printed_column_sum: u64 = rows.iter().map(|r| r.printed_prototiles).sum();
    let mut flags = Vec::new();
    if printed_column_sum != STATED_PROTOTILE_TOTAL {
        flags.push(format!(
            "the printed prototile column sums to {printed_column_sum}, not to the stated total {STATED_PROTOTILE_TOTAL}"
        ));
    }
    if printed_patterns != STATED_PATTERN_TOTAL {
        flags.push(format!(
            "the printed pattern column sums to {printed_patterns}, not to the stated total {STATED_PATTERN_TOTAL}"
        ));
    }
    if computed_prototiles != STATED_PROTOTILE_TOTAL {
        flags.push(format!("computed total {computed_prototiles} differs from the stated total {STATED_PROTOTILE_TOTAL}"));
    }
    HyperReport {
        rows,
        computed_patterns,
        printed_patterns,
        stated_patterns: STATED_PATTERN_TOTAL,
        computed_prototiles,
        printed_column_sum,
        stated_prototiles: STATED_PROTOTILE_TOTAL,
        flags,
    }
}

impl HyperReport {
    /// Aligned-column text rendering.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<10} {:<12} {:>9} {:>8} {:<27} {:>4} {:>9} {:>9} {:>9}",
            "formula", "colour", "patterns", "printed", "isoclines", "mant", "computed", "recomp.", "printed"
        );
        for r in &self.rows {
            for (i, c) in r.colours.iter().enumerate() {
                let first = i == 0;
                let _ = writeln!(
                    s,
                    "{:<10} {:<12} {:>9} {:>8} {:<27} {:>4} {:>9} {:>9} {:>9}",
                    if first { r.label.as_str() } else { "" },
                    c.colour,
                    c.computed_patterns,
                    c.printed_patterns,
                    format!("{} (x{})", c.isoclines, c.isocline_factor),
                    if first { r.mantilla.to_string() } else { String::new() },
                    if first { r.computed_prototiles.to_string() } else { String::new() },
                    if first { r.recomputed_from_printed.to_string() } else { String::new() },
                    if first { r.printed_prototiles.to_string() } else { String::new() },
                );
            }
            for f in &r.flags {
                let _ = writeln!(s, "    ! {f}");
            }
        }
        let _ = writeln!(
            s,
            "total patterns: computed {}, printed column {}, stated {}",
            self.computed_patterns, self.printed_patterns, self.stated_patterns
        );
        let _ = writeln!(
            s,
            "total prototiles: computed {}, printed column {}, stated {}",
            self.computed_prototiles, self.printed_column_sum, self.stated_prototiles
        );
        for f in &self.flags {
            let _ = writeln!(s, "! {f}");
        }
        s
    }
}
