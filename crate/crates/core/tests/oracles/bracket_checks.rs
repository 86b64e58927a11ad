//! Bracket-law checks comparing the library against the letter-level oracle.
//! Each check returns `Err(description)` on the first discrepancy.

#![allow(dead_code)]

use std::collections::BTreeMap;

use interwoven::brackets::{build_rows, BracketModel, Colour, IntervalKind, PhaseChoices, Window};

use super::brackets::OracleRows;

pub type Check = Result<(), String>;

pub fn model_and_oracle(choices: &PhaseChoices, g: u32, half: i64) -> (BracketModel, OracleRows) {
    let m = build_rows(choices, g, Window::new(-half, half)).expect("window large enough");
    let o = OracleRows::cancel(choices.phase, &choices.bits, -half, half);
    (m, o)
}

/// Rows equal the cancellation process letter for letter.
pub fn check_rows(m: &BracketModel, o: &OracleRows) -> Check {
    for k in 0..=m.max_generation() {
        for (p, l) in m.row(k) {
            let want = o.letter(k as usize, p);
            if l != want {
                return Err(format!("row {k} position {p}: library {l:?}, oracle {want:?}"));
            }
        }
    }
    Ok(())
}

/// Interval lists equal the delimiter scan (for intervals inside the window).
pub fn check_intervals(m: &BracketModel, o: &OracleRows) -> Check {
    let w = m.window();
    for g in 0..=m.max_generation() {
        let ivs = m.intervals_of(g).map_err(|e| e.to_string())?;
        for pair in ivs.windows(2) {
            if pair[0].kind == pair[1].kind || pair[0].right != pair[1].left {
                return Err(format!("generation {g}: intervals do not alternate: {} / {}", pair[0], pair[1]));
            }
        }
        let inside = |l: i64, r: i64| w.lo <= l && r < w.hi;
        let lib_act: Vec<_> = ivs
            .iter()
            .filter(|i| i.kind == IntervalKind::Active && inside(i.left, i.right))
            .map(|i| (i.left, i.mid, i.right))
            .collect();
        let lib_sil: Vec<_> = ivs
            .iter()
            .filter(|i| i.kind == IntervalKind::Silent && inside(i.left, i.right))
            .map(|i| (i.left, i.mid, i.right))
            .collect();
        if lib_act != o.actives(g as usize) {
            return Err(format!("generation {g}: active intervals differ from the scan"));
        }
        if lib_sil != o.silents(g as usize) {
            return Err(format!("generation {g}: silent intervals differ from the scan"));
        }
        for iv in &ivs {
            if iv.right - iv.left != 1i64 << (g + 1) || 2 * iv.mid != iv.left + iv.right {
                return Err(format!("length law broken by {iv}"));
            }
        }
    }
    Ok(())
}

/// Active intervals of generation `g` well inside the guard band.
pub fn guarded_actives(m: &BracketModel, g: u32) -> Vec<interwoven::brackets::Interval> {
    let w = m.window();
    let guard = m.guard();
    m.intervals_of(g)
        .unwrap()
        .into_iter()
        .filter(|i| i.kind == IntervalKind::Active && i.left >= w.lo + guard && i.right < w.hi - guard)
        .collect()
}

/// Free-letter counts, exact lists, gap law, origin law and decomposition law.
pub fn check_free_letters(m: &BracketModel, o: &OracleRows) -> Check {
    for g in 0..=m.max_generation() {
        for iv in guarded_actives(m, g) {
            let rep = m.free_positions(&iv).map_err(|e| e.to_string())?;
            let want = o.free_positions(g as usize, iv.left, iv.right);
            if rep.free_positions != want {
                return Err(format!("{iv}: free positions {:?}, oracle {:?}", rep.free_positions, want));
            }
            if rep.free_positions.contains(&iv.left) || rep.free_positions.contains(&iv.right) {
                return Err(format!("{iv}: an end is free"));
            }
            // Counts: red generation 2n-1 has 2^n + 1 free letters, blue has 1.
            let expected = match iv.colour {
                Colour::Red => (1usize << ((g + 1) / 2)) + 1,
                Colour::Blue => 1,
            };
            if rep.count != expected {
                return Err(format!("{iv}: {} free letters, expected {expected}", rep.count));
            }
            if iv.colour == Colour::Red {
                check_gap_law(&iv, &rep.free_positions)?;
                check_origin_law(m, &iv, &rep.free_positions)?;
            }
            check_decomposition(m, &iv, &rep.free_positions)?;
        }
    }
    Ok(())
}

/// Gaps between consecutive free letters of a red interval of generation
/// `2n-1`: all at least 2, except the two gaps around the mid-point, which are
/// 1 (the three central positions are free).
fn check_gap_law(iv: &interwoven::brackets::Interval, free: &[i64]) -> Check {
    let n = (iv.generation + 1) / 2;
    let unit: usize = 1 << (n - 1);
    for (i, pair) in free.windows(2).enumerate() {
        let gap = pair[1] - pair[0];
        let idx = i + 1; // 1-based gap index
        let is_unit_slot = idx == unit || idx == unit + 1;
        if is_unit_slot != (gap == 1) || gap < 1 {
            return Err(format!("{iv}: gap {idx} = {gap} breaks the gap law ({free:?})"));
        }
    }
    if !free.contains(&(iv.mid - 1)) || !free.contains(&iv.mid) || !free.contains(&(iv.mid + 1)) {
        return Err(format!("{iv}: the three central positions are not all free"));
    }
    Ok(())
}

/// No free letter of a red interval of generation `2n+1` sits on the `R`, `M`
/// or `B` of a blue active interval of generation `2m`, `0 < m ≤ n`.
fn check_origin_law(m: &BracketModel, iv: &interwoven::brackets::Interval, free: &[i64]) -> Check {
    let n = (iv.generation - 1) / 2;
    for mm in 1..=n {
        let g = 2 * mm;
        if g > m.max_generation() {
            continue;
        }
        for b in m.actives_between(g, iv.left, iv.right + 1) {
            for p in [b.left, b.mid, b.right] {
                if free.contains(&p) {
                    return Err(format!("{iv}: free letter {p} lies on a letter of {b}"));
                }
            }
        }
    }
    Ok(())
}

/// Ends, free letters and the maximal earlier same-colour intervals partition
/// the interval, with exactly `2^k` of them of generation `G - 2k`.
fn check_decomposition(m: &BracketModel, iv: &interwoven::brackets::Interval, free: &[i64]) -> Check {
    let parts = m.decompose(iv).map_err(|e| e.to_string())?;
    let mut seen = BTreeMap::new();
    for p in iv.left..=iv.right {
        let mut owners = 0;
        if p == iv.left || p == iv.right {
            owners += 1;
        }
        if free.contains(&p) {
            owners += 1;
        }
        owners += parts.iter().filter(|s| s.contains(p)).count();
        if owners != 1 {
            return Err(format!("{iv}: position {p} has {owners} owners in the decomposition"));
        }
    }
    for s in &parts {
        *seen.entry(s.generation).or_insert(0usize) += 1;
    }
    let floor = if iv.colour == Colour::Red { 1 } else { 0 };
    let mut k = 1;
    while iv.generation >= 2 * k + floor {
        let g = iv.generation - 2 * k;
        let got = seen.remove(&g).unwrap_or(0);
        if got != 1 << k {
            return Err(format!("{iv}: {got} sub-intervals of generation {g}, expected {}", 1 << k));
        }
        k += 1;
    }
    if !seen.is_empty() {
        return Err(format!("{iv}: unexpected sub-interval generations {seen:?}"));
    }
    Ok(())
}

/// Tower partition equals grouping the scanned silent intervals by mid-point;
/// mid-points include the interval's mid and, from generation 2, its ends.
pub fn check_towers(m: &BracketModel, o: &OracleRows) -> Check {
    let w = m.window();
    let guard = m.guard();
    for g in 0..=m.max_generation() {
        let silents: Vec<_> = m
            .intervals_of(g)
            .unwrap()
            .into_iter()
            .filter(|i| i.kind == IntervalKind::Silent && i.left >= w.lo + guard && i.right < w.hi - guard)
            .collect();
        for iv in silents {
            let towers = m.towers_in(&iv).map_err(|e| e.to_string())?;
            let want = o.silent_groups(m.max_generation() as usize, iv.left, iv.right);
            let got: BTreeMap<i64, Vec<(usize, i64, i64)>> = towers
                .iter()
                .map(|t| {
                    (t.mid, t.members.iter().map(|s| (s.generation as usize, s.left, s.right)).collect())
                })
                .collect();
            if got != want {
                return Err(format!("{iv}: tower partition differs from the group-by-mid oracle"));
            }
            for t in &towers {
                for (i, s) in t.members.iter().enumerate() {
                    if s.generation as usize != t.members[0].generation as usize + i {
                        return Err(format!("{iv}: tower at {} skips a generation", t.mid));
                    }
                    if i > 0 && !s.contains_interval(&t.members[i - 1]) {
                        return Err(format!("{iv}: tower at {} is not nested", t.mid));
                    }
                }
            }
            let mids: Vec<i64> = towers.iter().map(|t| t.mid).collect();
            if !mids.contains(&iv.mid) {
                return Err(format!("{iv}: own mid-point is not a tower mid-point"));
            }
            if g >= 2 && !(mids.contains(&iv.left) && mids.contains(&iv.right)) {
                return Err(format!("{iv}: ends are not tower mid-points"));
            }
            if g == 0 && towers.iter().filter(|t| t.members.contains(&iv)).count() != 1 {
                return Err(format!("{iv}: not in exactly one tower"));
            }
        }
    }
    Ok(())
}

/// Coverage equals a membership scan over the oracle's active intervals.
pub fn check_coverage(m: &BracketModel, o: &OracleRows, positions: impl Iterator<Item = i64>) -> Check {
    for p in positions {
        let c = m.coverage(p).map_err(|e| e.to_string())?;
        for g in 0..=m.max_generation() {
            let want = o
                .actives(g as usize)
                .iter()
                .any(|&(l, _, r)| l <= p && p <= r);
            if (c.per_generation[g as usize] == 1) != want {
                return Err(format!("position {p}, generation {g}: coverage mismatch"));
            }
        }
        if c.total != c.per_generation.iter().map(|&x| u32::from(x)).sum::<u32>() {
            return Err(format!("position {p}: total is not the sum"));
        }
    }
    Ok(())
}

/// The 0-1 dichotomy on the two named models: the butterfly model leaves 0
/// uncovered at every generation (infinite tower), while in the sunset model 0
/// is covered at every generation and, at the deepest generation, every
/// position in `[-16, 16]` is covered by some active interval.
pub fn check_zero_one(g_max: u32, half: i64) -> Check {
    for g in 0..=g_max {
        let (bm, bo) = model_and_oracle(&PhaseChoices::butterfly(g), g, half);
        let c = bm.coverage(0).map_err(|e| e.to_string())?;
        if c.total != 0 {
            return Err(format!("butterfly generation {g}: 0 is covered {} times", c.total));
        }
        let tower_gens: Vec<usize> = bo
            .silent_groups(g as usize, 0, 0)
            .get(&0)
            .map(|v| v.iter().map(|s| s.0).collect())
            .unwrap_or_default();
        if tower_gens != (0..=g as usize).collect::<Vec<_>>() {
            return Err(format!("butterfly generation {g}: tower at 0 is {tower_gens:?}"));
        }
        let (sm, _) = model_and_oracle(&PhaseChoices::sunset(g), g, half);
        let c = sm.coverage(0).map_err(|e| e.to_string())?;
        if c.total != g + 1 {
            return Err(format!("sunset generation {g}: 0 covered {} times", c.total));
        }
        let radius = if g == g_max { 16 } else { 0 };
        for p in -radius..=radius {
            if sm.coverage(p).map_err(|e| e.to_string())?.total == 0 {
                return Err(format!("sunset generation {g}: position {p} uncovered"));
            }
        }
    }
    Ok(())
}

/// Named models plus a few fixed bit patterns, all of length `g`.
pub fn test_models(g: u32) -> Vec<PhaseChoices> {
    let mut out = vec![PhaseChoices::butterfly(g), PhaseChoices::sunset(g)];
    for (phase, pattern) in [(0u8, 0b1011_0110u32), (2, 0b0101_1101)] {
        out.push(PhaseChoices::new(phase, (0..g).map(|i| pattern >> (i % 8) & 1 == 1).collect()));
    }
    out
}

/// The full bracket law suite for generations `0..=g_max` on `[-half, half)`.
pub fn bracket_suite(g_max: u32, half: i64) -> Vec<(&'static str, Check)> {
    let mut rows = Ok(());
    let mut intervals = Ok(());
    let mut free = Ok(());
    let mut towers = Ok(());
    let mut coverage = Ok(());
    for g in 0..=g_max {
        for c in test_models(g) {
            let (m, o) = model_and_oracle(&c, g, half);
            let tag = |e: String| format!("model {c:?}, G={g}: {e}");
            if rows.is_ok() {
                rows = check_rows(&m, &o).map_err(tag);
            }
            if intervals.is_ok() {
                intervals = check_intervals(&m, &o).map_err(tag);
            }
            if free.is_ok() {
                free = check_free_letters(&m, &o).map_err(tag);
            }
            if towers.is_ok() {
                towers = check_towers(&m, &o).map_err(tag);
            }
            if coverage.is_ok() {
                let guard = m.guard();
                coverage = check_coverage(&m, &o, (-half + guard..half - guard).step_by(7)).map_err(tag);
            }
        }
    }
    vec![
        ("rows = cancellation oracle", rows),
        ("intervals = delimiter scan", intervals),
        ("free letters, gap, origin, decomposition", free),
        ("tower partition", towers),
        ("coverage", coverage),
        ("0-1 dichotomy", check_zero_one(g_max, half)),
    ]
}
