//! Trilateral checks against the letter-level oracle and a cell-geometry
//! oracle: each figure is drawn as explicit cell sets (legs, basis, area)
//! and intersections are found by set operations, independently of the
//! library's projection-based classification.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use interwoven::brackets::{PhaseChoices, Window};
use interwoven::trilaterals::{crossing_kind, generate, CrossKind, Status, TriColour, Trilateral};

use super::bracket_checks::{test_models, Check};
use super::brackets::OracleRows;

type Cells = BTreeSet<(i64, i64)>;

/// Explicit drawing of a trilateral on its axis.
pub struct Drawing {
    pub legs: Cells,
    pub basis: Cells,
    /// Row → closed column range.
    pub area: BTreeMap<i64, (i64, i64)>,
}

fn area_subset(a: &BTreeMap<i64, (i64, i64)>, b: &BTreeMap<i64, (i64, i64)>) -> bool {
    a.iter().all(|(r, &(lo, hi))| b.get(r).is_some_and(|&(l, h)| l <= lo && hi <= h))
}

fn area_overlap(a: &BTreeMap<i64, (i64, i64)>, b: &BTreeMap<i64, (i64, i64)>) -> i64 {
    a.iter()
        .filter_map(|(r, &(lo, hi))| b.get(r).map(|&(l, h)| (hi.min(h) - lo.max(l) + 1).max(0)))
        .sum()
}

pub fn draw(t: &Trilateral) -> Drawing {
    let (v, u) = (t.vertex_row, t.basis_row);
    let mut legs = Cells::new();
    let mut area = BTreeMap::new();
    for r in v..=u {
        let d = r - v;
        legs.insert((r, t.axis - d));
        legs.insert((r, t.axis + d));
        area.insert(r, (t.axis - d, t.axis + d));
    }
    let h = u - v;
    let basis = (-h..=h).map(|c| (u, t.axis + c)).collect();
    Drawing { legs, basis, area }
}

/// Geometric classification of a pair, from the drawings.
pub fn geometric_kind(a: &Trilateral, b: &Trilateral) -> CrossKind {
    let (da, db) = (draw(a), draw(b));
    if area_subset(&db.area, &da.area) {
        return CrossKind::Contains;
    }
    if area_subset(&da.area, &db.area) {
        return CrossKind::ContainedIn;
    }
    if area_overlap(&da.area, &db.area) <= 1 {
        return CrossKind::Disjoint;
    }
    // Otherwise exactly one basis meets the other's legs.
    let ab: Vec<_> = da.basis.intersection(&db.legs).collect();
    let ba: Vec<_> = db.basis.intersection(&da.legs).collect();
    match (ab.first(), ba.first()) {
        (Some(&&(row, _)), None) => CrossKind::BasisCutsLegs { basis_of_first: true, row },
        (None, Some(&&(row, _))) => CrossKind::BasisCutsLegs { basis_of_first: false, row },
        _ => panic!("overlapping figures {a:?} / {b:?} without a single basis crossing"),
    }
}

fn trilaterals(c: &PhaseChoices, g: u32, half: i64) -> Vec<Trilateral> {
    generate(c, g, Window::new(-half, half)).expect("window large enough")
}

/// Triangle spans are the active intervals and phantom spans the silent
/// ones, generation by generation.
pub fn check_projection(c: &PhaseChoices, g: u32, half: i64) -> Check {
    let ts = trilaterals(c, g, half);
    let o = OracleRows::cancel(c.phase, &c.bits, -half, half);
    for k in 0..=g {
        for (status, want) in [(Status::Triangle, o.actives(k as usize)), (Status::Phantom, o.silents(k as usize))] {
            let got: Vec<_> = ts
                .iter()
                .filter(|t| t.generation == k && t.status == status && t.vertex_row >= -half && t.basis_row < half)
                .map(|t| (t.vertex_row, t.mid_row, t.basis_row))
                .collect();
            if got != want {
                return Err(format!("{c:?} generation {k} {status:?}: {got:?} vs oracle {want:?}"));
            }
        }
    }
    for t in &ts {
        if t.colour != TriColour::of_generation(t.generation) || t.half_width != t.height() {
            return Err(format!("bad colour or width on {t:?}"));
        }
    }
    Ok(())
}

/// All pairs whose latitudes meet, with both classifications.
fn crossing_pairs(ts: &[Trilateral]) -> Vec<(&Trilateral, &Trilateral, CrossKind)> {
    let mut out = Vec::new();
    for (i, a) in ts.iter().enumerate() {
        for b in &ts[i + 1..] {
            if a.basis_row >= b.vertex_row && b.basis_row >= a.vertex_row {
                out.push((a, b, crossing_kind(a, b)));
            }
        }
    }
    out
}

/// The library's classification equals the geometric one.
pub fn check_kinds(c: &PhaseChoices, g: u32, half: i64) -> Check {
    let ts = trilaterals(c, g, half);
    for (a, b, k) in crossing_pairs(&ts) {
        let want = geometric_kind(a, b);
        if k != want {
            return Err(format!("{a:?} / {b:?}: library {k:?}, geometry {want:?}"));
        }
        let back = crossing_kind(b, a);
        let mirrored = match k {
            CrossKind::Contains => CrossKind::ContainedIn,
            CrossKind::ContainedIn => CrossKind::Contains,
            CrossKind::BasisCutsLegs { basis_of_first, row } => {
                CrossKind::BasisCutsLegs { basis_of_first: !basis_of_first, row }
            }
            CrossKind::Disjoint => CrossKind::Disjoint,
        };
        if back != mirrored {
            return Err(format!("classification not symmetric on {a:?} / {b:?}"));
        }
    }
    Ok(())
}

/// Crossings: (basis figure, cut figure, row).
fn crossings(ts: &[Trilateral]) -> Vec<(&Trilateral, &Trilateral, i64)> {
    crossing_pairs(ts)
        .into_iter()
        .filter_map(|(a, b, k)| match k {
            CrossKind::BasisCutsLegs { basis_of_first: true, row } => Some((a, b, row)),
            CrossKind::BasisCutsLegs { basis_of_first: false, row } => Some((b, a, row)),
            _ => None,
        })
        .collect()
}

/// No triangle of generation `n + 2` crosses a triangle of generation `n`.
pub fn check_no_skip_crossing(c: &PhaseChoices, g: u32, half: i64) -> Check {
    let ts = trilaterals(c, g, half);
    for (a, b, _) in crossings(&ts) {
        let tri = a.status == Status::Triangle && b.status == Status::Triangle;
        if tri && a.generation.abs_diff(b.generation) == 2 {
            return Err(format!("{a:?} crosses {b:?}"));
        }
    }
    Ok(())
}

/// Crossings pair legs with a basis, never leg/leg or basis/basis, and the
/// basis passes strictly through the legs.
pub fn check_legs_vs_basis(c: &PhaseChoices, g: u32, half: i64) -> Check {
    let ts = trilaterals(c, g, half);
    for (a, b, row) in crossings(&ts) {
        let (da, db) = (draw(a), draw(b));
        if da.legs.intersection(&db.legs).next().is_some() {
            return Err(format!("legs of {a:?} and {b:?} meet"));
        }
        if da.basis.intersection(&db.basis).next().is_some() {
            return Err(format!("bases of {a:?} and {b:?} meet"));
        }
        let d = row - b.vertex_row;
        if !(b.vertex_row < row && row < b.basis_row && d < a.half_width) {
            return Err(format!("basis of {a:?} does not cut through the legs of {b:?}"));
        }
    }
    Ok(())
}

/// No crossing row lies strictly between the cut figure's mid-point row and
/// its basis.
pub fn check_upper_half_cuts(c: &PhaseChoices, g: u32, half: i64) -> Check {
    let ts = trilaterals(c, g, half);
    for (a, b, row) in crossings(&ts) {
        if b.mid_row < row && row < b.basis_row {
            return Err(format!("basis of {a:?} cuts {b:?} at row {row}, in the lower half"));
        }
    }
    Ok(())
}

/// Crossing rows: a basis cuts legs at half the smaller of the two heights
/// below the cut figure's vertex. Hence triangle bases cut triangle legs at
/// the leg mid-row or halfway between the vertex and it, and a phantom basis
/// lower than the cut figure cuts within its first quarter.
pub fn check_crossing_rows(c: &PhaseChoices, g: u32, half: i64) -> Check {
    let ts = trilaterals(c, g, half);
    for (a, b, row) in crossings(&ts) {
        let (d, h) = (row - b.vertex_row, b.height());
        let mut ok = d == a.height().min(h) / 2;
        if a.status == Status::Triangle && b.status == Status::Triangle {
            ok &= d == h / 2 || d == h / 4;
        }
        if a.status == Status::Phantom && a.height() < h {
            ok &= 0 < d && d <= h / 4;
        }
        if !ok {
            return Err(format!("basis of {a:?} cuts {b:?} at leg row {d} of {h}"));
        }
    }
    Ok(())
}

/// Phantoms sharing a mid-row alternate in colour along the tower.
pub fn check_tower_colours(c: &PhaseChoices, g: u32, half: i64) -> Check {
    let ts = trilaterals(c, g, half);
    let mut towers: BTreeMap<i64, Vec<&Trilateral>> = BTreeMap::new();
    for t in ts.iter().filter(|t| t.status == Status::Phantom && t.generation >= 1) {
        towers.entry(t.mid_row).or_default().push(t);
    }
    for (mid, tower) in towers {
        for w in tower.windows(2) {
            let red = |t: &Trilateral| t.colour == TriColour::Red;
            if red(w[0]) == red(w[1]) {
                return Err(format!("tower at row {mid}: {:?} and {:?} have the same colour", w[0], w[1]));
            }
        }
    }
    Ok(())
}

/// Butterfly: the generation-`n` triangle with the smallest positive vertex
/// spans `[2^n, 3·2^n]`.
pub fn check_butterfly(g: u32) -> Check {
    let half = 8i64 << g;
    let ts = trilaterals(&PhaseChoices::butterfly(g), g, half);
    for n in 0..=g {
        let first = ts
            .iter()
            .filter(|t| t.generation == n && t.status == Status::Triangle && t.vertex_row > 0)
            .min_by_key(|t| t.vertex_row)
            .ok_or_else(|| format!("no generation-{n} triangle"))?;
        if (first.vertex_row, first.basis_row) != (1 << n, 3 << n) {
            return Err(format!("generation {n}: [{}, {}]", first.vertex_row, first.basis_row));
        }
    }
    Ok(())
}

/// The trilateral suite for generations up to `g_max` on `[-half, half)`.
pub fn trilateral_suite(g_max: u32, half: i64) -> Vec<(&'static str, Check)> {
    type CheckFn = fn(&PhaseChoices, u32, i64) -> Check;
    let checks: [(&'static str, CheckFn); 8] = [
        ("projection = bracket intervals", check_projection),
        ("classification = cell geometry", check_kinds),
        ("gen n+2 triangles never cross gen n", check_no_skip_crossing),
        ("phantom towers alternate colours", check_tower_colours),
        ("crossings are legs vs basis", check_legs_vs_basis),
        ("no cut below the mid-distance row", check_upper_half_cuts),
        ("crossing rows", check_crossing_rows),
        ("butterfly addresses (gen <= 6)", |_, _, _| check_butterfly(6)),
    ];
    let mut out = Vec::new();
    for (name, f) in checks {
        let mut res = Ok(());
        'models: for g in 0..=g_max {
            for c in test_models(g) {
                res = f(&c, g, half);
                if res.is_err() {
                    break 'models;
                }
            }
        }
        out.push((name, res));
    }
    out
}
