//! Scenes: trilaterals on one or more axes and the signal field they carry.
//!
//! A scene fixes the phase choices of generations `1..=max_generation`;
//! later generations are completed with zero bits. With zero bits the
//! mid-points of the phantoms of all later generations coincide on one row,
//! the *apex*, and a scene closes the construction there: the apex is the
//! vertex of an unbounded red triangle and the basis row of an unbounded
//! red phantom. Generations are expanded until their trilaterals no longer
//! reach the window, so every cell of the window sees a complete field.
//!
//! The field of one axis follows the construction rules: vertices, legs,
//! mid-points, corners and bases of every trilateral; the green signal on
//! the mid-distance row of each triangle, between its legs; and, on every
//! row of a red triangle, the yellow signal between the legs of the
//! innermost red triangle containing the row, with red markers `Hrl`/`Hrr`
//! outside it.
//!
//! A single axis yields a complete field only in a band of rows around the
//! apex ([`BAND_ABOVE`] rows above it, [`BAND_BELOW`] including the apex
//! row and below): further away, red phantom legs cross free rows, a
//! configuration the Euclidean catalog has no tile for.
//!
//! With several axes every axis carries the same model, cut at its start
//! row, and the towers stop at `max_generation`. In the Euclidean plane the
//! complete towers of two axes cannot coexist: the phantoms of generation
//! `k` around the apex have legs `2^k ± (row − apex)` cells from their
//! axis, for every `k`, so each tower reaches every column. Truncating
//! keeps every figure within its axis' territory. Each cell belongs to the nearest axis. Red markers that leave one
//! axis towards another meet there: a join tile is placed on the leftmost
//! cell after the right-hand signal starts. On basis rows the segments
//! between trilaterals of one latitude on different axes are *covered*:
//! the basis runs through them with the upper horizontal signal of its
//! colour, emitted outward by the corners and joined in the same way.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{check_choices, trilaterals_of, TriColour, Trilateral, TrilateralError};
use crate::brackets::{PhaseChoices, Window};
use crate::tile_algebra::{Gamma, Hue, PatternName, Pi, Prototile, Slot, Tau, Xi};

/// An axis of a scene: its column and the row where its branch starts
/// (`None` for an axis present on every row).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Axis {
    pub column: i64,
    pub start_row: Option<i64>,
}

impl Axis {
    pub fn full(column: i64) -> Axis {
        Axis { column, start_row: None }
    }
}

/// Row and column ranges of a scene (half-open).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SceneWindow {
    pub rows: Window,
    pub columns: Window,
}

impl SceneWindow {
    pub fn new(rows: Window, columns: Window) -> SceneWindow {
        SceneWindow { rows, columns }
    }
    pub fn contains(&self, row: i64, column: i64) -> bool {
        self.rows.contains(row) && self.columns.contains(column)
    }
}

/// Rows above the apex, and rows from the apex down, where a single-axis
/// scene is complete.
pub const BAND_ABOVE: i64 = 32;
pub const BAND_BELOW: i64 = 25;

/// A scene: trilaterals of all axes and the signal field of the window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scene {
    pub axes: Vec<Axis>,
    pub choices: PhaseChoices,
    pub max_generation: u32,
    /// Generation up to which the completion was expanded.
    pub expanded_generation: u32,
    pub apex: i64,
    pub window: SceneWindow,
    /// Finite trilaterals meeting the window rows, sorted by (axis,
    /// generation, vertex row).
    pub trilaterals: Vec<Trilateral>,
    cells: Vec<Prototile>,
}

impl Scene {
    /// Signal field of a cell of the window.
    pub fn cell(&self, row: i64, column: i64) -> Option<&Prototile> {
        if !self.window.contains(row, column) {
            return None;
        }
        let w = self.window.columns.width();
        Some(&self.cells[((row - self.window.rows.lo) * w + (column - self.window.columns.lo)) as usize])
    }

    /// All cells in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = ((i64, i64), &Prototile)> {
        let w = self.window.columns.width();
        let (r0, c0) = (self.window.rows.lo, self.window.columns.lo);
        self.cells.iter().enumerate().map(move |(i, t)| ((r0 + i as i64 / w, c0 + i as i64 % w), t))
    }

    /// Trilaterals of one axis.
    pub fn on_axis(&self, column: i64) -> impl Iterator<Item = &Trilateral> {
        self.trilaterals.iter().filter(move |t| t.axis == column)
    }

    /// Row of the apex for the given choices.
    pub fn apex_of(choices: &PhaseChoices) -> i64 {
        let anchors = choices.anchors();
        let g = choices.bits.len() as u32;
        anchors[g as usize] - (1i64 << g)
    }
}

/// A figure as seen by the field computation: a finite trilateral, or one
/// of the two unbounded red figures meeting at the apex.
#[derive(Copy, Clone, Debug)]
struct Figure {
    /// `None` for the unbounded figures.
    generation: Option<u32>,
    gamma: Gamma,
    tau: Tau,
    vertex: i64,
    basis: i64,
}

impl Figure {
    fn of(t: &Trilateral) -> Figure {
        Figure {
            generation: Some(t.generation),
            gamma: t.colour.gamma(),
            tau: t.status.tau(),
            vertex: t.vertex_row,
            basis: t.basis_row,
        }
    }
    /// The red phantom ending on the apex row and the red triangle starting
    /// there, standing for the tower of all later generations.
    fn unbounded_pair(apex: i64) -> [Figure; 2] {
        let red = |tau, vertex| Figure { generation: None, gamma: Gamma::R, tau, vertex, basis: vertex + UNBOUNDED };
        [red(Tau::Phi, apex - UNBOUNDED), red(Tau::T, apex)]
    }

    fn height(&self) -> i64 {
        self.basis - self.vertex
    }
    fn spans(&self, row: i64) -> bool {
        self.vertex <= row && row <= self.basis
    }
}

const UNBOUNDED: i64 = 1 << 40;

/// All figures of one axis whose latitude meets `[lo, hi)`.
struct AxisField {
    axis: Axis,
    figures: Vec<Figure>,
    /// Generation of the figure whose basis is on a row.
    basis_gen: BTreeMap<i64, Option<u32>>,
}

impl AxisField {
    /// Figures of the generations of `anchors`, completed at `apex` by the
    /// two unbounded red figures when given.
    fn new(axis: Axis, anchors: &[i64], apex: Option<i64>, lo: i64, hi: i64) -> (AxisField, Vec<Trilateral>) {
        let mut tris = Vec::new();
        for (g, &a) in anchors.iter().enumerate() {
            tris.extend(trilaterals_of(axis.column, g as u32, a, lo, hi));
        }
        let mut figures: Vec<Figure> = tris.iter().map(Figure::of).collect();
        if let Some(apex) = apex {
            figures.extend(Figure::unbounded_pair(apex));
        }
        if let Some(s) = axis.start_row {
            // A branch starting at `s` only carries the trilaterals born on
            // or after `s`.
            figures.retain(|f| f.vertex >= s);
            tris.retain(|t| t.vertex_row >= s);
        }
        let mut basis_gen = BTreeMap::new();
        for f in &figures {
            basis_gen.insert(f.basis, f.generation);
        }
        (AxisField { axis, figures, basis_gen }, tris)
    }

    fn alive(&self, row: i64) -> bool {
        self.axis.start_row.map_or(true, |s| row >= s)
    }

    /// Innermost red triangle containing `row`.
    fn inner_red(&self, row: i64) -> Option<&Figure> {
        self.figures
            .iter()
            .filter(|f| f.gamma == Gamma::R && f.tau == Tau::T && f.spans(row))
            .min_by_key(|f| f.height())
    }

    /// Field of one cell, with `dx` the column offset from the axis.
    fn cell(&self, row: i64, dx: i64) -> Prototile {
        let mut t = Prototile::empty();
        if !self.alive(row) {
            return t;
        }
        let xi = if dx < 0 { Xi::L } else { Xi::R };
        let side = |x: Xi| if x == Xi::L { Slot::LEFT } else { Slot::RIGHT };
        for f in self.figures.iter().filter(|f| f.spans(row)) {
            let (h, d) = (f.height(), row - f.vertex);
            let (gamma, tau) = (f.gamma, f.tau);
            if d == 0 {
                if dx == 0 {
                    t.insert(PatternName::Vertex { gamma, tau }, Slot::FULL);
                }
            } else if d < h {
                if dx.abs() == d {
                    let name = match (2 * d).cmp(&h) {
                        std::cmp::Ordering::Less => PatternName::Leg { gamma, tau, pi: Pi::U, xi },
                        std::cmp::Ordering::Equal => PatternName::Mid { gamma, tau, xi },
                        std::cmp::Ordering::Greater => PatternName::Leg { gamma, tau, pi: Pi::L, xi },
                    };
                    t.insert(name, Slot::FULL);
                }
            } else if dx.abs() == h {
                t.insert(PatternName::Corner { gamma, tau, xi }, Slot::FULL);
            } else if dx.abs() < h {
                t.insert(PatternName::Basis { gamma, tau }, Slot::FULL);
            }
        }
        match self.basis_gen.get(&row) {
            Some(None) => t.insert(PatternName::Hg, Slot::FULL),
            Some(Some(e)) if *e >= 1 => {
                let half = 1i64 << (e - 1);
                if dx.abs() < half {
                    t.insert(PatternName::Hg, Slot::FULL);
                } else if dx.abs() == half {
                    t.insert(PatternName::Hg, side(xi.flip()));
                }
            }
            _ => {}
        }
        if let Some(f) = self.inner_red(row) {
            let (h, d) = (f.height(), row - f.vertex);
            let red = PatternName::Hr { xi };
            if d == 0 {
                if dx == 0 {
                    t.insert(PatternName::Hr { xi: Xi::L }, Slot::LEFT);
                    t.insert(PatternName::Hr { xi: Xi::R }, Slot::RIGHT);
                    t.insert(PatternName::Hy, Slot::FULL);
                } else {
                    t.insert(red, Slot::FULL);
                }
            } else if d == h {
                if dx.abs() == h {
                    t.insert(red, side(xi));
                } else if dx.abs() > h {
                    t.insert(red, Slot::FULL);
                }
            } else if dx.abs() < d {
                t.insert(PatternName::Hy, Slot::FULL);
            } else if dx.abs() == d {
                t.insert(red, side(xi));
                t.insert(PatternName::Hy, side(xi.flip()));
            } else {
                t.insert(red, Slot::FULL);
            }
        }
        t
    }

    /// Columns (offsets from the axis) of the cells of `row` that carry a
    /// figure atom of a bounded part: vertices, legs, mid-points, corners
    /// and finite bases.
    fn figure_span(&self, row: i64) -> Option<(i64, i64)> {
        if !self.alive(row) {
            return None;
        }
        self.figures
            .iter()
            // The unbounded phantom above the apex has no leg near any axis.
            .filter(|f| f.spans(row) && !(f.generation.is_none() && (row == f.basis || row - f.vertex > UNBOUNDED / 2)))
            .map(|f| {
                let d = row - f.vertex;
                (-d, d)
            })
            .reduce(|a, b| (a.0.min(b.0), a.1.max(b.1)))
    }

    /// Finite basis on `row`, if any: colour, status and half-width.
    fn basis_on(&self, row: i64) -> Option<(Gamma, Tau, i64)> {
        if !self.alive(row) {
            return None;
        }
        self.figures
            .iter()
            .find(|f| f.basis == row && f.generation.is_some())
            .map(|f| (f.gamma, f.tau, f.height()))
    }

    /// Columns (offsets) of the cells emitting red markers on `row`: the
    /// cells of the legs of the innermost red triangle.
    fn red_emitters(&self, row: i64) -> Option<(i64, i64)> {
        if !self.alive(row) {
            return None;
        }
        self.inner_red(row).map(|f| {
            let d = row - f.vertex;
            (-d, d)
        })
    }
}

/// Smallest generation whose trilaterals, and all later ones, keep their
/// legs away from the window: beyond it the zero-bit completion only adds
/// phantoms around the apex whose legs are outside the window.
fn expansion_generation(max_generation: u32, apex: i64, window: &SceneWindow, axes: &[Axis]) -> u32 {
    let rows = (window.rows.lo - apex).abs().max((window.rows.hi - apex).abs());
    let cols = axes
        .iter()
        .map(|a| (window.columns.lo - a.column).abs().max((window.columns.hi - a.column).abs()))
        .max()
        .unwrap_or(0);
    let mut g = max_generation;
    while (1i64 << g) <= 2 * (rows + cols) + 8 {
        g += 1;
    }
    g
}

/// Build a scene.
pub fn build_scene(
    axes: &[Axis],
    choices: &PhaseChoices,
    max_generation: u32,
    window: SceneWindow,
) -> Result<Scene, TrilateralError> {
    check_choices(choices, max_generation)?;
    if axes.is_empty() {
        return Err(TrilateralError::NoAxis);
    }
    let mut axes = axes.to_vec();
    axes.sort();
    for w in axes.windows(2) {
        if w[0].column == w[1].column {
            return Err(TrilateralError::DuplicateAxis(w[0].column));
        }
    }
    let anchor0 = i64::from(choices.phase);
    for a in &axes {
        if let Some(s) = a.start_row {
            if (s - anchor0).rem_euclid(4) != 3 {
                return Err(TrilateralError::BadStartRow { column: a.column, row: s });
            }
        }
    }
    let apex = Scene::apex_of(choices);
    // One axis carries the whole tower, completed at the apex; several axes
    // carry towers truncated at `max_generation` (see the module docs).
    let single = axes.len() == 1;
    let (band_lo, band_hi) = (apex - BAND_ABOVE, apex + BAND_BELOW);
    if single && (window.rows.lo < band_lo || window.rows.hi > band_hi) {
        return Err(TrilateralError::OutsideBand {
            lo: window.rows.lo,
            hi: window.rows.hi,
            apex,
            band_lo,
            band_hi,
        });
    }
    let expanded = if single { expansion_generation(max_generation, apex, &window, &axes) } else { max_generation };
    let full = choices.extended(expanded);
    let anchors = full.anchors();
    let (lo, hi) = (window.rows.lo, window.rows.hi);
    let mut fields = Vec::new();
    let mut trilaterals = Vec::new();
    for a in &axes {
        let (f, tris) = AxisField::new(*a, &anchors, single.then_some(apex), lo, hi);
        fields.push(f);
        trilaterals.extend(tris);
    }
    trilaterals.sort();
    // Every figure cell inside the window must belong to its own axis.
    for f in &fields {
        for row in lo..hi {
            if let Some((a, b)) = f.figure_span(row) {
                for c in (f.axis.column + a).max(window.columns.lo)..=(f.axis.column + b).min(window.columns.hi - 1) {
                    let o = owner(&fields, c);
                    if o.axis.column != f.axis.column {
                        let (x, y) = (f.axis.column.min(o.axis.column), f.axis.column.max(o.axis.column));
                        return Err(TrilateralError::AxesOverlap { a: x, b: y });
                    }
                }
            }
        }
    }
    let width = window.columns.width();
    let mut cells = Vec::with_capacity(((hi - lo).max(0) * width.max(0)) as usize);
    for row in lo..hi {
        let mut line: Vec<Prototile> = (window.columns.lo..window.columns.hi)
            .map(|c| {
                let owner = owner(&fields, c);
                owner.cell(row, c - owner.axis.column)
            })
            .collect();
        if fields.len() > 1 {
            connect_row(&fields, row, window.columns, &mut line);
        }
        cells.extend(line);
    }
    Ok(Scene {
        axes,
        choices: choices.clone(),
        max_generation,
        expanded_generation: expanded,
        apex,
        window,
        trilaterals,
        cells,
    })
}

/// The axis owning a column: the nearest one, ties going to the left.
fn owner(fields: &[AxisField], column: i64) -> &AxisField {
    fields
        .iter()
        .min_by_key(|f| ((column - f.axis.column).abs(), f.axis.column))
        .expect("at least one axis")
}

/// Whether a cell carries a figure atom (a join cannot sit there).
fn has_figure(t: &Prototile) -> bool {
    t.atoms().any(|(n, _)| {
        matches!(n, PatternName::Vertex { .. } | PatternName::Leg { .. } | PatternName::Mid { .. } | PatternName::Corner { .. })
    })
}

/// Fill the gap `first..=last` between a right-hand emitter and a
/// left-hand one: right-hand signal up to the join, placed on the leftmost
/// cell without a figure atom, left-hand signal after it.
fn fill_gap(line: &mut [Prototile], columns: Window, first: i64, last: i64, right: &PatternName, left: &PatternName, join: &PatternName) {
    if first > last {
        return;
    }
    let at = |c: i64| (c - columns.lo) as usize;
    let inside = |c: i64| columns.contains(c);
    let join_at = (first..=last).find(|&c| !inside(c) || !has_figure(&line[at(c)])).unwrap_or(first);
    for c in (first..=last).filter(|&c| inside(c)) {
        let t = &mut line[at(c)];
        match c.cmp(&join_at) {
            std::cmp::Ordering::Less => t.insert(right.clone(), Slot::FULL),
            std::cmp::Ordering::Equal => t.insert(join.clone(), Slot::FULL),
            std::cmp::Ordering::Greater => t.insert(left.clone(), Slot::FULL),
        }
    }
}

fn remove_where(t: &mut Prototile, pred: impl Fn(&PatternName) -> bool) {
    let keep: Vec<(PatternName, Slot)> = t.atoms().filter(|(n, _)| !pred(n)).map(|(n, s)| (n.clone(), s)).collect();
    *t = keep.into_iter().fold(Prototile::empty(), |acc, (n, s)| acc.with(n, s));
}

/// Connect the horizontal signals of neighbouring axes on one row.
fn connect_row(fields: &[AxisField], row: i64, columns: Window, line: &mut [Prototile]) {
    let at = |c: i64| (c - columns.lo) as usize;
    // Red markers: rebuilt outside the innermost red triangles of all axes.
    let spans: Vec<(i64, i64)> = fields
        .iter()
        .filter_map(|f| f.red_emitters(row).map(|(a, b)| (f.axis.column + a, f.axis.column + b)))
        .collect();
    if !spans.is_empty() {
        for c in columns.lo..columns.hi {
            if !spans.iter().any(|&(a, b)| a <= c && c <= b) {
                remove_where(&mut line[at(c)], |n| matches!(n, PatternName::Hr { .. }));
            }
        }
        let (hrl, hrr) = (PatternName::Hr { xi: Xi::L }, PatternName::Hr { xi: Xi::R });
        let join = PatternName::Join { hue: Hue::R, pi: Pi::U };
        for c in columns.lo..spans[0].0 {
            line[at(c)].insert(hrl.clone(), Slot::FULL);
        }
        for w in spans.windows(2) {
            fill_gap(line, columns, w[0].1 + 1, w[1].0 - 1, &hrr, &hrl, &join);
        }
        for c in spans[spans.len() - 1].1 + 1..columns.hi {
            line[at(c)].insert(hrr.clone(), Slot::FULL);
        }
    }
    // Covered bases between consecutive trilaterals of one latitude.
    let bases: Vec<(i64, Gamma, Tau, i64)> =
        fields.iter().filter_map(|f| f.basis_on(row).map(|(g, t, h)| (f.axis.column, g, t, h))).collect();
    for w in bases.windows(2) {
        let ((a, gamma, tau, ha), (b, _, _, hb)) = (w[0], w[1]);
        let (first, last) = (a + ha + 1, b - hb - 1);
        let basis = PatternName::Basis { gamma, tau };
        for c in (first..=last).filter(|&c| columns.contains(c)) {
            line[at(c)].insert(basis.clone(), Slot::FULL);
        }
        let hue = if gamma == Gamma::R { Hue::R } else { Hue::B };
        for (c, xi) in [(a + ha, Xi::R), (b - hb, Xi::L)] {
            if columns.contains(c) {
                let outer = if xi == Xi::R { Slot::RIGHT } else { Slot::LEFT };
                line[at(c)].insert(basis.clone(), outer);
                if hue == Hue::B {
                    line[at(c)].insert(PatternName::Horizontal { hue, xi, pi: Pi::U }, outer);
                }
            }
        }
        if hue == Hue::B {
            let right = PatternName::Horizontal { hue, xi: Xi::R, pi: Pi::U };
            let left = PatternName::Horizontal { hue, xi: Xi::L, pi: Pi::U };
            fill_gap(line, columns, first, last, &right, &left, &PatternName::Join { hue, pi: Pi::U });
        }
    }
}

/// Open or covered part of a basis row.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasisClass {
    /// Inside a trilateral of the basis's generation.
    Open,
    /// Between trilaterals of that generation.
    Covered,
}

/// A maximal segment of a basis row, inclusive column bounds.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisSegment {
    pub first: i64,
    pub last: i64,
    pub class: BasisClass,
}

/// Classify the cells of a basis row carrying the basis of `generation`
/// into maximal open and covered segments.
pub fn classify_bases(scene: &Scene, generation: u32, row: i64) -> Result<Vec<BasisSegment>, TrilateralError> {
    let owners: Vec<&Trilateral> =
        scene.trilaterals.iter().filter(|t| t.generation == generation && t.basis_row == row).collect();
    if owners.is_empty() || !scene.window.rows.contains(row) {
        return Err(TrilateralError::NoSuchBasis { generation, row });
    }
    let (gamma, tau) = (owners[0].colour.gamma(), owners[0].status.tau());
    let basis = PatternName::Basis { gamma, tau };
    let corner = |xi| PatternName::Corner { gamma, tau, xi };
    let mut out: Vec<BasisSegment> = Vec::new();
    for c in scene.window.columns.lo..scene.window.columns.hi {
        let t = scene.cell(row, c).expect("inside the window");
        if !(t.contains(&basis) || t.contains(&corner(Xi::L)) || t.contains(&corner(Xi::R))) {
            continue;
        }
        let inside = owners.iter().any(|o| o.contains_cell(row, c));
        let class = if inside { BasisClass::Open } else { BasisClass::Covered };
        match out.last_mut() {
            Some(s) if s.class == class && s.last + 1 == c => s.last = c,
            _ => out.push(BasisSegment { first: c, last: c, class }),
        }
    }
    Ok(out)
}

/// Colour of a trilateral generation as a pattern colour.
pub fn gamma_of_generation(g: u32) -> Gamma {
    TriColour::of_generation(g).gamma()
}
