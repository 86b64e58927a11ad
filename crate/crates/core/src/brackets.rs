//! Abstract brackets: the layered `R`/`M`/`B` letter rows, their active and
//! silent intervals, free letters, towers, coverage and semi-infinite cuts.
//!
//! Row 0 is the periodic word `RMBM`. Row `k ≥ 1` holds letters spaced `2^k`
//! apart with the same `RMBM` period; every letter of row `k` sits on an `M` of
//! row `k − 1`. The two `M`s of each period of row `k − 1` give the two legal
//! placements of row `k`, selected by one phase bit per generation.
//!
//! Writing `A_k` for the position of an `R` of row `k`:
//!
//! ```text
//! A_k = A_{k-1} + 2^(k-1) + bit_k · 2^(k+1)
//! ```
//!
//! An active interval of generation `k` runs from an `R` to the next `B`
//! (length `2^(k+1)`), a silent interval from a `B` to the next `R`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised by bracket operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BracketError {
    #[error("window [{lo}, {hi}) is too small: generation {generation} needs a width of at least {min_width}")]
    WindowTooSmall { lo: i64, hi: i64, generation: u32, min_width: i64 },
    #[error("expected {expected} phase bits for max_generation {expected}, got {got}")]
    ChoiceLength { expected: usize, got: usize },
    #[error("row-0 phase must be in 0..4, got {0}")]
    BadPhase(u8),
    #[error("generation {generation} is out of range (max_generation = {max})")]
    GenerationOutOfRange { generation: u32, max: u32 },
    #[error("free letters are only defined for active intervals")]
    NotActive,
    #[error("towers are only defined for silent intervals")]
    NotSilent,
    #[error("position {position} lies in the guard band of window [{lo}, {hi}) (guard {guard})")]
    GuardBand { position: i64, lo: i64, hi: i64, guard: i64 },
    #[error("cut position {0} is not the M of a generation-0 silent interval")]
    BadCut(i64),
    #[error("generation {0} is too large for this implementation (max 40)")]
    TooDeep(u32),
}

/// A letter of a bracket row.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    R,
    M,
    B,
    Blank,
}

impl Letter {
    /// Single-character rendering used by the row dump (`.` for blanks).
    pub fn as_char(self) -> char {
        match self {
            Letter::R => 'R',
            Letter::M => 'M',
            Letter::B => 'B',
            Letter::Blank => '.',
        }
    }
}

/// Half-open integer window `[lo, hi)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Self {
        Window { lo, hi }
    }
    pub fn width(&self) -> i64 {
        (self.hi - self.lo).max(0)
    }
    pub fn contains(&self, p: i64) -> bool {
        self.lo <= p && p < self.hi
    }
}

/// Phase choices of a model: the row-0 phase (position of an `R` modulo 4)
/// and one bit per generation `≥ 1` choosing which `M` becomes the next `R`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PhaseChoices {
    pub phase: u8,
    pub bits: Vec<bool>,
}

impl PhaseChoices {
    pub fn new(phase: u8, bits: Vec<bool>) -> Self {
        PhaseChoices { phase, bits }
    }

    /// The butterfly model: position 0 is the mid-point of an infinite tower
    /// of silent intervals. Its generation-`n` active interval with the
    /// smallest positive left end is `[2^n, 3·2^n]`.
    pub fn butterfly(max_generation: u32) -> Self {
        PhaseChoices { phase: 1, bits: vec![false; max_generation as usize] }
    }

    /// The sunset model: position 0 is the mid-point of the generation-0 active
    /// interval and, at every later generation, the bit is chosen so that 0
    /// stays as deep inside an active interval as possible.
    pub fn sunset(max_generation: u32) -> Self {
        let mut bits = Vec::with_capacity(max_generation as usize);
        let mut a: i64 = 3;
        for k in 1..=max_generation {
            let period = 1i64 << (k + 2);
            let len = 1i64 << (k + 1);
            let mut best: Option<(i64, bool)> = None;
            for bit in [false, true] {
                let cand = a + (1i64 << (k - 1)) + if bit { 1i64 << (k + 1) } else { 0 };
                let off = (0 - cand).rem_euclid(period);
                let score = if off <= len { (2 * off - len).abs() } else { i64::MAX };
                if best.map_or(true, |(s, _)| score < s) {
                    best = Some((score, bit));
                }
            }
            let bit = best.expect("two candidates").1;
            a += (1i64 << (k - 1)) + if bit { 1i64 << (k + 1) } else { 0 };
            bits.push(bit);
        }
        PhaseChoices { phase: 3, bits }
    }

    /// Anchors `A_0 ..= A_G`: the position of one `R` on every row.
    pub fn anchors(&self) -> Vec<i64> {
        let mut out = Vec::with_capacity(self.bits.len() + 1);
        let mut a = i64::from(self.phase);
        out.push(a);
        for (i, &bit) in self.bits.iter().enumerate() {
            let k = i as u32 + 1;
            a += (1i64 << (k - 1)) + if bit { 1i64 << (k + 1) } else { 0 };
            out.push(a);
        }
        out
    }

    /// Extends the choices with zero bits up to `generation`.
    pub fn extended(&self, generation: u32) -> PhaseChoices {
        let mut bits = self.bits.clone();
        while bits.len() < generation as usize {
            bits.push(false);
        }
        PhaseChoices { phase: self.phase, bits }
    }
}

/// Interval status.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IntervalKind {
    Active,
    Silent,
}

/// Interval colour: blue for even generations, red for odd ones.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Colour {
    Blue,
    Red,
}

impl Colour {
    pub fn of_generation(g: u32) -> Colour {
        if g % 2 == 0 {
            Colour::Blue
        } else {
            Colour::Red
        }
    }
}

/// An active (`R..B`) or silent (`B..R`) interval of one generation.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Interval {
    pub generation: u32,
    pub kind: IntervalKind,
    pub colour: Colour,
    pub left: i64,
    pub right: i64,
    pub mid: i64,
}

impl Interval {
    fn new(generation: u32, kind: IntervalKind, left: i64) -> Interval {
        let len = 1i64 << (generation + 1);
        Interval {
            generation,
            kind,
            colour: Colour::of_generation(generation),
            left,
            right: left + len,
            mid: left + len / 2,
        }
    }
    /// Closed membership: ends belong to the interval.
    pub fn contains(&self, p: i64) -> bool {
        self.left <= p && p <= self.right
    }
    /// Closed containment of another interval.
    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.left <= other.left && other.right <= self.right
    }
    pub fn len(&self) -> i64 {
        self.right - self.left
    }
    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Nested silent intervals of consecutive generations sharing one mid-point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tower {
    pub members: Vec<Interval>,
    pub mid: i64,
    pub area: Interval,
}

/// Addresses of the `R`, `B`, central `M` and following `M` of an active
/// interval.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalAddresses {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

/// Free letters of an active interval.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeLetterReport {
    pub interval: Interval,
    pub free_positions: Vec<i64>,
    pub count: usize,
}

/// Per-generation coverage of a position by closed active intervals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coverage {
    pub position: i64,
    pub per_generation: Vec<u8>,
    pub total: u32,
}

/// Layered letter rows over a window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketModel {
    max_generation: u32,
    window: Window,
    choices: PhaseChoices,
    anchors: Vec<i64>,
    rows: Vec<Vec<Letter>>,
    cut: Option<i64>,
}

const MAX_SUPPORTED_GENERATION: u32 = 40;

/// Letter of row `k` at position `p` given the row anchor.
pub fn letter_at(anchor: i64, k: u32, p: i64) -> Letter {
    let spacing = 1i64 << k;
    let off = p - anchor;
    if off.rem_euclid(spacing) != 0 {
        return Letter::Blank;
    }
    match (off / spacing).rem_euclid(4) {
        0 => Letter::R,
        1 | 3 => Letter::M,
        _ => Letter::B,
    }
}

/// Builds the rows of generations `0 ..= max_generation` over `window`.
pub fn build_rows(
    choices: &PhaseChoices,
    max_generation: u32,
    window: Window,
) -> Result<BracketModel, BracketError> {
    if max_generation > MAX_SUPPORTED_GENERATION {
        return Err(BracketError::TooDeep(max_generation));
    }
    if choices.phase > 3 {
        return Err(BracketError::BadPhase(choices.phase));
    }
    if choices.bits.len() != max_generation as usize {
        return Err(BracketError::ChoiceLength {
            expected: max_generation as usize,
            got: choices.bits.len(),
        });
    }
    let min_width = 1i64 << (max_generation + 2);
    if window.width() < min_width {
        return Err(BracketError::WindowTooSmall {
            lo: window.lo,
            hi: window.hi,
            generation: max_generation,
            min_width,
        });
    }
    let anchors = choices.anchors();
    let rows = (0..=max_generation)
        .map(|k| (window.lo..window.hi).map(|p| letter_at(anchors[k as usize], k, p)).collect())
        .collect();
    Ok(BracketModel { max_generation, window, choices: choices.clone(), anchors, rows, cut: None })
}

impl BracketModel {
    pub fn max_generation(&self) -> u32 {
        self.max_generation
    }
    pub fn window(&self) -> Window {
        self.window
    }
    pub fn choices(&self) -> &PhaseChoices {
        &self.choices
    }
    pub fn anchors(&self) -> &[i64] {
        &self.anchors
    }
    pub fn cut(&self) -> Option<i64> {
        self.cut
    }

    /// Letter of generation `k` at position `p` (inside the window).
    pub fn letter(&self, k: u32, p: i64) -> Option<Letter> {
        if k > self.max_generation || !self.window.contains(p) {
            return None;
        }
        Some(self.rows[k as usize][(p - self.window.lo) as usize])
    }

    /// Row `k` as `(position, letter)` pairs over the window.
    pub fn row(&self, k: u32) -> Vec<(i64, Letter)> {
        if k > self.max_generation {
            return Vec::new();
        }
        self.rows[k as usize]
            .iter()
            .enumerate()
            .map(|(i, &l)| (self.window.lo + i as i64, l))
            .collect()
    }

    /// Text dump: one line per row, `gen=<k> phase=<b>: <letters>`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for k in 0..=self.max_generation {
            let phase = if k == 0 {
                u32::from(self.choices.phase)
            } else {
                u32::from(self.choices.bits[k as usize - 1])
            };
            let letters: String = self.rows[k as usize].iter().map(|l| l.as_char()).collect();
            out.push_str(&format!("gen={k} phase={phase}: {letters}\n"));
        }
        out
    }

    fn check_generation(&self, g: u32) -> Result<(), BracketError> {
        if g > self.max_generation {
            Err(BracketError::GenerationOutOfRange { generation: g, max: self.max_generation })
        } else {
            Ok(())
        }
    }

    fn removed_by_cut(&self, iv: &Interval) -> bool {
        match self.cut {
            Some(c) => iv.kind == IntervalKind::Active && iv.contains(c),
            None => false,
        }
    }

    /// Intervals of one generation intersecting `[lo, hi)` regardless of the
    /// window (no cut filtering).
    fn raw_intervals(&self, g: u32, lo: i64, hi: i64) -> Vec<Interval> {
        let period = 1i64 << (g + 2);
        let len = 1i64 << (g + 1);
        let a = self.anchors[g as usize];
        let mut out = Vec::new();
        // First active left end at or below lo - period.
        let mut left = a + period * (lo - period - a).div_euclid(period);
        while left < hi {
            for (kind, l) in [(IntervalKind::Active, left), (IntervalKind::Silent, left + len)] {
                let iv = Interval::new(g, kind, l);
                if iv.right >= lo && iv.left < hi {
                    out.push(iv);
                }
            }
            left += period;
        }
        out
    }

    /// All active and silent intervals of generation `g` intersecting the
    /// window, ordered by left end.
    pub fn intervals_of(&self, g: u32) -> Result<Vec<Interval>, BracketError> {
        self.check_generation(g)?;
        let mut v: Vec<Interval> = self
            .raw_intervals(g, self.window.lo, self.window.hi)
            .into_iter()
            .filter(|iv| !self.removed_by_cut(iv))
            .collect();
        v.sort_by_key(|iv| (iv.left, iv.kind));
        Ok(v)
    }

    /// Active intervals of generation `g` intersecting `[lo, hi)` (cut applied).
    pub fn actives_between(&self, g: u32, lo: i64, hi: i64) -> Vec<Interval> {
        self.raw_intervals(g, lo, hi)
            .into_iter()
            .filter(|iv| iv.kind == IntervalKind::Active && !self.removed_by_cut(iv))
            .collect()
    }

    /// The active interval of generation `g` containing `p`, if any (closed).
    pub fn active_containing(&self, g: u32, p: i64) -> Option<Interval> {
        if g > self.max_generation {
            return None;
        }
        let period = 1i64 << (g + 2);
        let len = 1i64 << (g + 1);
        let a = self.anchors[g as usize];
        let off = (p - a).rem_euclid(period);
        if off <= len {
            let iv = Interval::new(g, IntervalKind::Active, p - off);
            if !self.removed_by_cut(&iv) {
                return Some(iv);
            }
        }
        None
    }

    /// Addresses of the active interval of generation `g` with the smallest
    /// positive left end.
    pub fn addresses(&self, g: u32) -> Result<IntervalAddresses, BracketError> {
        self.check_generation(g)?;
        let period = 1i64 << (g + 2);
        let a0 = self.anchors[g as usize];
        let a = 1 + (a0 - 1).rem_euclid(period);
        let iv = Interval::new(g, IntervalKind::Active, a);
        Ok(IntervalAddresses { a: iv.left, b: iv.right, c: iv.mid, d: iv.right + (1i64 << g) })
    }

    /// Free letters of an active interval: positions strictly inside it that
    /// are not covered by a closed active interval of the same colour and a
    /// strictly earlier generation.
    pub fn free_positions(&self, iv: &Interval) -> Result<FreeLetterReport, BracketError> {
        if iv.kind != IntervalKind::Active {
            return Err(BracketError::NotActive);
        }
        self.check_generation(iv.generation)?;
        let earlier: Vec<Interval> = (0..iv.generation)
            .filter(|&g| Colour::of_generation(g) == iv.colour)
            .flat_map(|g| self.actives_between(g, iv.left, iv.right + 1))
            .collect();
        let free: Vec<i64> = (iv.left + 1..iv.right)
            .filter(|&p| !earlier.iter().any(|e| e.contains(p)))
            .collect();
        Ok(FreeLetterReport { interval: *iv, count: free.len(), free_positions: free })
    }

    /// Maximal earlier same-colour active intervals inside an active interval:
    /// together with the ends and the free positions they partition it.
    pub fn decompose(&self, iv: &Interval) -> Result<Vec<Interval>, BracketError> {
        if iv.kind != IntervalKind::Active {
            return Err(BracketError::NotActive);
        }
        let mut inner: Vec<Interval> = (0..iv.generation)
            .filter(|&g| Colour::of_generation(g) == iv.colour)
            .flat_map(|g| self.actives_between(g, iv.left, iv.right + 1))
            .filter(|e| iv.left < e.left && e.right < iv.right)
            .collect();
        inner.sort_by_key(|e| std::cmp::Reverse(e.generation));
        let mut maximal: Vec<Interval> = Vec::new();
        for e in inner {
            if !maximal.iter().any(|m| m.contains_interval(&e)) {
                maximal.push(e);
            }
        }
        maximal.sort_by_key(|iv| iv.left);
        Ok(maximal)
    }

    /// Partition of every silent interval (up to `max_generation`) meeting the
    /// given silent interval into towers, grouped by shared mid-point.
    pub fn towers_in(&self, iv: &Interval) -> Result<Vec<Tower>, BracketError> {
        if iv.kind != IntervalKind::Silent {
            return Err(BracketError::NotSilent);
        }
        let mut by_mid: BTreeMap<i64, Vec<Interval>> = BTreeMap::new();
        for g in 0..=self.max_generation {
            for s in self.raw_intervals(g, iv.left, iv.right + 1) {
                if s.kind == IntervalKind::Silent && s.right >= iv.left && s.left <= iv.right {
                    by_mid.entry(s.mid).or_default().push(s);
                }
            }
        }
        Ok(by_mid
            .into_iter()
            .map(|(mid, mut members)| {
                members.sort_by_key(|m| m.generation);
                let area = *members.last().expect("non-empty group");
                Tower { members, mid, area }
            })
            .collect())
    }

    /// Width of the border band in which analyses are not trusted.
    pub fn guard(&self) -> i64 {
        1i64 << (self.max_generation + 2)
    }

    /// Per-generation membership of `p` in closed active intervals.
    pub fn coverage(&self, p: i64) -> Result<Coverage, BracketError> {
        let guard = self.guard();
        let lo_ok = match self.cut {
            Some(c) => p >= c,
            None => p >= self.window.lo + guard,
        };
        if !lo_ok || p >= self.window.hi - guard {
            return Err(BracketError::GuardBand {
                position: p,
                lo: self.window.lo,
                hi: self.window.hi,
                guard,
            });
        }
        let per_generation: Vec<u8> = (0..=self.max_generation)
            .map(|g| u8::from(self.active_containing(g, p).is_some()))
            .collect();
        let total = per_generation.iter().map(|&c| u32::from(c)).sum();
        Ok(Coverage { position: p, per_generation, total })
    }

    /// The semi-infinite model obtained by cutting at `cut`: positions left of
    /// the cut are forgotten and every active interval containing the cut is
    /// removed from every generation.
    pub fn cut_model(&self, cut: i64) -> Result<BracketModel, BracketError> {
        let is_silent_mid = self.window.contains(cut)
            && (cut - self.anchors[0]).rem_euclid(4) == 3;
        if !is_silent_mid {
            return Err(BracketError::BadCut(cut));
        }
        let mut m = self.clone();
        let new_lo = self.window.lo.max(cut);
        let skip = (new_lo - self.window.lo) as usize;
        for row in &mut m.rows {
            row.drain(..skip);
        }
        m.window = Window::new(new_lo, self.window.hi);
        m.cut = Some(match self.cut {
            Some(c) => c.max(cut),
            None => cut,
        });
        Ok(m)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            IntervalKind::Active => "active",
            IntervalKind::Silent => "silent",
        };
        let colour = match self.colour {
            Colour::Blue => "blue",
            Colour::Red => "red",
        };
        write!(f, "gen {} {} {} [{}, {}] mid {}", self.generation, colour, kind, self.left, self.right, self.mid)
    }
}
