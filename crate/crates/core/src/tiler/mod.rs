//! Tilings of a window of the brick lattice.
//!
//! Row `ℓ` of a scene becomes the *active* tiling row `2ℓ`; between rows
//! `ℓ` and `ℓ + 1` sits the *passive* tiling row `2ℓ + 1`, shifted right by
//! half a cell. The bottom-left half of cell `(t, x)` therefore meets the
//! top-right half of the cell of row `t + 1` whose centre is half a cell to
//! the left, and the bottom-right half meets the one half a cell to the
//! right. Borders are open: nothing constrains a side facing out of the
//! window. Tiles are never rotated.

pub mod signature;

use std::collections::{BTreeMap, BTreeSet};
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::brackets::Window;
use crate::tile_algebra::{euclid_catalog, PatternName, Prototile, PrototileParseError};
use crate::trilaterals::Scene;

pub use signature::{is_passive, signature, EdgeMark, EdgeSignature};

/// Largest window (scene rows × columns) accepted by [`force_complete`].
pub const FORCE_MAX_WINDOW: i64 = 10;

/// Default node budget of [`force_complete`].
pub const DEFAULT_NODE_LIMIT: u64 = 2_000_000;

/// Version of the grid JSON format.
pub const GRID_FORMAT_VERSION: u32 = 1;

/// Errors of the tiler.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TilerError {
    #[error("cell ({row}, {column}) is outside the grid")]
    OutsideGrid { row: i64, column: i64 },
    #[error("cells ({}, {}) and ({}, {}) are not in contact", .a.row, .a.column, .b.row, .b.column)]
    IllegalContact { a: Cell, b: Cell },
    #[error("cell ({row}, {column}) needs `{tile}`, which is not in the catalog")]
    NotInCatalog { row: i64, column: i64, tile: String },
    #[error("cell ({row}, {column}) is in a {expected} row but `{tile}` is not")]
    WrongRowKind { row: i64, column: i64, expected: &'static str, tile: String },
    #[error("window {rows}x{columns} exceeds the forcing bound {max}x{max}")]
    WindowTooLarge { rows: i64, columns: i64, max: i64 },
    #[error("two legs cross the passive cell ({row}, {column})")]
    PassiveConflict { row: i64, column: i64 },
    #[error("grid JSON: {0}")]
    Json(String),
    #[error("grid JSON version {0} is not supported")]
    Version(u32),
    #[error(transparent)]
    Tile(#[from] PrototileParseError),
}

/// A position of the brick lattice: a tiling row and a column.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub row: i64,
    pub column: i64,
}

impl Cell {
    pub fn new(row: i64, column: i64) -> Cell {
        Cell { row, column }
    }

    pub fn is_passive(self) -> bool {
        self.row.rem_euclid(2) == 1
    }

    /// Centre in half-cell units.
    fn centre(self) -> i64 {
        2 * self.column + self.row.rem_euclid(2)
    }

    /// The cell met across `contact`.
    pub fn neighbour(self, contact: Contact) -> Cell {
        match contact {
            Contact::Right => Cell::new(self.row, self.column + 1),
            Contact::BelowLeft => Cell::from_centre(self.row + 1, self.centre() - 1),
            Contact::BelowRight => Cell::from_centre(self.row + 1, self.centre() + 1),
        }
    }

    /// The cell that meets this one across `contact`.
    pub fn neighbour_before(self, contact: Contact) -> Cell {
        match contact {
            Contact::Right => Cell::new(self.row, self.column - 1),
            Contact::BelowLeft => Cell::from_centre(self.row - 1, self.centre() + 1),
            Contact::BelowRight => Cell::from_centre(self.row - 1, self.centre() - 1),
        }
    }

    fn from_centre(row: i64, centre: i64) -> Cell {
        Cell::new(row, (centre - row.rem_euclid(2)).div_euclid(2))
    }
}

/// How the second of two cells touches the first.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Contact {
    /// The second cell is the right neighbour: right edge against left edge.
    Right,
    /// The second cell is below, half a cell to the left: bottom-left half
    /// against top-right half.
    BelowLeft,
    /// The second cell is below, half a cell to the right: bottom-right half
    /// against top-left half.
    BelowRight,
}

impl Contact {
    pub const ALL: [Contact; 3] = [Contact::Right, Contact::BelowLeft, Contact::BelowRight];

    /// The contact from `a` to `b`, or an error when they do not touch that
    /// way.
    pub fn between(a: Cell, b: Cell) -> Result<Contact, TilerError> {
        Contact::ALL.into_iter().find(|&c| a.neighbour(c) == b).ok_or(TilerError::IllegalContact { a, b })
    }
}

/// Whether tile `b`, placed across `contact` from tile `a`, fits it.
pub fn matches(a: &Prototile, b: &Prototile, contact: Contact) -> bool {
    signatures_match(&signature(a), &signature(b), contact)
}

fn signatures_match(a: &EdgeSignature, b: &EdgeSignature, contact: Contact) -> bool {
    match contact {
        Contact::Right => a.right == b.left,
        Contact::BelowLeft => a.bottom_left == b.top_right,
        Contact::BelowRight => a.bottom_right == b.top_left,
    }
}

/// A possibly partial assignment of prototiles to the cells of a window.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TileGrid {
    /// Scene rows covered (active tiling rows `2·lo ..= 2·(hi − 1)`).
    pub rows: Window,
    pub columns: Window,
    cells: BTreeMap<Cell, Prototile>,
}

impl TileGrid {
    /// An empty grid over scene rows `rows` and columns `columns`.
    pub fn new(rows: Window, columns: Window) -> TileGrid {
        TileGrid { rows, columns, cells: BTreeMap::new() }
    }

    /// Tiling rows of the grid (active and passive).
    pub fn tiling_rows(&self) -> RangeInclusive<i64> {
        2 * self.rows.lo..=2 * (self.rows.hi - 1)
    }

    pub fn contains(&self, cell: Cell) -> bool {
        self.tiling_rows().contains(&cell.row) && self.columns.contains(cell.column)
    }

    /// All positions in row-major order.
    pub fn positions(&self) -> impl Iterator<Item = Cell> + '_ {
        self.tiling_rows().flat_map(move |r| (self.columns.lo..self.columns.hi).map(move |c| Cell::new(r, c)))
    }

    pub fn get(&self, cell: Cell) -> Option<&Prototile> {
        self.cells.get(&cell)
    }

    pub fn set(&mut self, cell: Cell, tile: Prototile) -> Result<(), TilerError> {
        if !self.contains(cell) {
            return Err(TilerError::OutsideGrid { row: cell.row, column: cell.column });
        }
        let passive = is_passive(&tile);
        if passive != cell.is_passive() {
            return Err(TilerError::WrongRowKind {
                row: cell.row,
                column: cell.column,
                expected: if cell.is_passive() { "passive" } else { "active" },
                tile: tile.to_string(),
            });
        }
        self.cells.insert(cell, tile);
        Ok(())
    }

    pub fn remove(&mut self, cell: Cell) -> Option<Prototile> {
        self.cells.remove(&cell)
    }

    /// Assigned cells in row-major order.
    pub fn assigned(&self) -> impl Iterator<Item = (Cell, &Prototile)> {
        self.cells.iter().map(|(c, t)| (*c, t))
    }

    pub fn assigned_count(&self) -> usize {
        self.cells.len()
    }

    pub fn is_complete(&self) -> bool {
        self.positions().all(|c| self.cells.contains_key(&c))
    }

    /// The grid restricted to sub-windows of its rows and columns.
    pub fn restrict(&self, rows: Window, columns: Window) -> TileGrid {
        let mut out = TileGrid::new(rows, columns);
        if columns.width() == 0 {
            return out;
        }
        for r in out.tiling_rows() {
            for (c, t) in self.cells.range(Cell::new(r, columns.lo)..Cell::new(r, columns.hi)) {
                out.cells.insert(*c, t.clone());
            }
        }
        out
    }

    /// Serialise to the grid JSON format (prototile ids plus their text).
    pub fn to_json(&self) -> String {
        let doc = GridDoc {
            version: GRID_FORMAT_VERSION,
            rows: [self.rows.lo, self.rows.hi],
            columns: [self.columns.lo, self.columns.hi],
            cells: self
                .cells
                .iter()
                .map(|(c, t)| GridCellDoc { row: c.row, column: c.column, id: t.id(), tile: t.to_string() })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("grid documents serialise")
    }

    /// Parse the grid JSON format; ids must agree with the tile text.
    pub fn from_json(text: &str) -> Result<TileGrid, TilerError> {
        let doc: GridDoc = serde_json::from_str(text).map_err(|e| TilerError::Json(e.to_string()))?;
        if doc.version != GRID_FORMAT_VERSION {
            return Err(TilerError::Version(doc.version));
        }
        let mut g = TileGrid::new(Window::new(doc.rows[0], doc.rows[1]), Window::new(doc.columns[0], doc.columns[1]));
        for c in doc.cells {
            let t: Prototile = c.tile.parse()?;
            if t.id() != c.id {
                return Err(TilerError::Json(format!("id {} does not match tile `{}`", c.id, c.tile)));
            }
            g.set(Cell::new(c.row, c.column), t)?;
        }
        Ok(g)
    }
}

#[derive(Serialize, Deserialize)]
struct GridDoc {
    version: u32,
    rows: [i64; 2],
    columns: [i64; 2],
    cells: Vec<GridCellDoc>,
}

#[derive(Serialize, Deserialize)]
struct GridCellDoc {
    row: i64,
    column: i64,
    id: String,
    tile: String,
}

/// The tiling induced by a scene, without catalog membership checks.
///
/// Active cells take the scene's field (`Z` where it is empty). A passive
/// cell carries `p` plus the leg that crosses it: a right leg leaving the
/// active cell above through its bottom-right half, or a left leg entering
/// the active cell below through its top-right half.
pub fn realize(scene: &Scene) -> Result<TileGrid, TilerError> {
    let (rows, columns) = (scene.window.rows, scene.window.columns);
    let mut g = TileGrid::new(rows, columns);
    let active = |row: i64, col: i64| -> Prototile {
        let t = scene.cell(row, col).cloned().unwrap_or_default();
        if t.is_empty() {
            Prototile::atom(PatternName::Z)
        } else {
            t
        }
    };
    for row in rows.lo..rows.hi {
        for col in columns.lo..columns.hi {
            g.cells.insert(Cell::new(2 * row, col), active(row, col));
            if row + 1 == rows.hi {
                continue;
            }
            let above = signature(&active(row, col));
            let below = signature(&active(row + 1, col));
            let mut legs = Vec::new();
            for m in &above.bottom_right {
                if let EdgeMark::Leg { gamma, tau, pi } = *m {
                    legs.push(PatternName::Leg { gamma, tau, pi, xi: crate::tile_algebra::Xi::R });
                }
            }
            for m in &below.top_right {
                if let EdgeMark::Leg { gamma, tau, pi } = *m {
                    legs.push(PatternName::Leg { gamma, tau, pi, xi: crate::tile_algebra::Xi::L });
                }
            }
            if legs.len() > 1 {
                return Err(TilerError::PassiveConflict { row: 2 * row + 1, column: col });
            }
            let mut t = Prototile::atom(PatternName::P);
            if let Some(l) = legs.pop() {
                t = t.with(l, crate::tile_algebra::Slot::FULL);
            }
            g.cells.insert(Cell::new(2 * row + 1, col), t);
        }
    }
    Ok(g)
}

/// The intended tiling of a scene; every tile must be in the Euclidean
/// catalog.
pub fn intended_tiling(scene: &Scene) -> Result<TileGrid, TilerError> {
    let g = realize(scene)?;
    let catalog = euclid_catalog();
    for (c, t) in g.assigned() {
        if !catalog.contains(t) {
            return Err(TilerError::NotInCatalog { row: c.row, column: c.column, tile: t.to_string() });
        }
    }
    Ok(g)
}

/// A pair of assigned cells in contact whose shared side disagrees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub a: Cell,
    pub b: Cell,
    pub contact: Contact,
    pub a_tile: String,
    pub b_tile: String,
}

/// All mismatching contacts between assigned cells of the grid.
pub fn verify(grid: &TileGrid) -> Vec<Violation> {
    let sigs: BTreeMap<Cell, EdgeSignature> = grid.cells.iter().map(|(c, t)| (*c, signature(t))).collect();
    let mut out = Vec::new();
    for (a, sa) in &sigs {
        for contact in Contact::ALL {
            let b = a.neighbour(contact);
            if let Some(sb) = sigs.get(&b) {
                if !signatures_match(sa, sb, contact) {
                    out.push(Violation {
                        a: *a,
                        b,
                        contact,
                        a_tile: grid.cells[a].to_string(),
                        b_tile: grid.cells[&b].to_string(),
                    });
                }
            }
        }
    }
    out
}

/// Outcome of a forced completion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Forced {
    /// Every completion of the partial grid, in search order.
    Complete(Vec<TileGrid>),
    /// The node budget ran out; the completions found so far.
    Exhausted { nodes: u64, found: Vec<TileGrid> },
}

impl Forced {
    pub fn completions(&self) -> &[TileGrid] {
        match self {
            Forced::Complete(v) => v,
            Forced::Exhausted { found, .. } => found,
        }
    }
}

/// Enumerate every completion of `partial` by tiles of `catalog`.
///
/// Empty cells are filled in row-major order, trying the catalog in its
/// canonical order; a tile is tried when it fits every assigned neighbour,
/// and kept when each empty neighbour still has at least one fitting tile.
/// Each tried tile costs one node; the search stops with
/// [`Forced::Exhausted`] when `node_limit` nodes are spent. The pre-assigned
/// cells are taken as given (check them with [`verify`]).
pub fn force_complete(
    partial: &TileGrid,
    catalog: &BTreeSet<Prototile>,
    node_limit: u64,
) -> Result<Forced, TilerError> {
    let (nr, nc) = (partial.rows.width(), partial.columns.width());
    if nr > FORCE_MAX_WINDOW || nc > FORCE_MAX_WINDOW {
        return Err(TilerError::WindowTooLarge { rows: nr, columns: nc, max: FORCE_MAX_WINDOW });
    }
    let tiles: Vec<&Prototile> = catalog.iter().collect();
    let sigs: Vec<EdgeSignature> = tiles.iter().map(|t| signature(t)).collect();
    let words = tiles.len().div_ceil(64);
    let set_of = |pred: &dyn Fn(usize) -> bool| -> Vec<u64> {
        let mut b = vec![0u64; words];
        for k in (0..tiles.len()).filter(|&k| pred(k)) {
            b[k / 64] |= 1 << (k % 64);
        }
        b
    };
    // after[c][k]: tiles fitting across contact c from tile k;
    // before[c][k]: tiles that tile k fits across contact c from.
    let after: Vec<Vec<Vec<u64>>> = Contact::ALL
        .iter()
        .map(|&c| sigs.iter().map(|a| set_of(&|j| signatures_match(a, &sigs[j], c))).collect())
        .collect();
    let before: Vec<Vec<Vec<u64>>> = Contact::ALL
        .iter()
        .map(|&c| sigs.iter().map(|b| set_of(&|j| signatures_match(&sigs[j], b, c))).collect())
        .collect();
    let passive = set_of(&|k| is_passive(tiles[k]));
    let active = set_of(&|k| !is_passive(tiles[k]));
    let positions: Vec<Cell> = partial.positions().collect();
    let t0 = 2 * partial.rows.lo;
    let index = |c: Cell| -> Option<usize> {
        (partial.contains(c)).then(|| ((c.row - t0) * nc + (c.column - partial.columns.lo)) as usize)
    };
    // Neighbours of every position: (contact, neighbour index, position is first).
    let links: Vec<Vec<(usize, usize, bool)>> = positions
        .iter()
        .map(|&p| {
            let mut v = Vec::new();
            for (ci, &c) in Contact::ALL.iter().enumerate() {
                if let Some(j) = index(p.neighbour(c)) {
                    v.push((ci, j, true));
                }
                if let Some(j) = index(p.neighbour_before(c)) {
                    v.push((ci, j, false));
                }
            }
            v
        })
        .collect();
    let mut assign: Vec<Option<usize>> = vec![None; positions.len()];
    // Domains imposed by pre-assigned tiles outside the catalog.
    let mut base: Vec<Vec<u64>> =
        positions.iter().map(|p| if p.is_passive() { passive.clone() } else { active.clone() }).collect();
    let mut fixed = vec![false; positions.len()];
    for (c, t) in partial.assigned() {
        let i = index(c).expect("assigned cells lie in the grid");
        fixed[i] = true;
        match tiles.iter().position(|x| *x == t) {
            Some(k) => assign[i] = Some(k),
            None => {
                let sig = signature(t);
                for &(ci, j, first) in &links[i] {
                    let c = Contact::ALL[ci];
                    let allowed = if first {
                        set_of(&|k| signatures_match(&sig, &sigs[k], c))
                    } else {
                        set_of(&|k| signatures_match(&sigs[k], &sig, c))
                    };
                    for (w, a) in base[j].iter_mut().zip(allowed) {
                        *w &= a;
                    }
                }
            }
        }
    }
    let order: Vec<usize> = (0..positions.len()).filter(|&i| !fixed[i]).collect();
    let mut search = Search {
        links: &links,
        after: &after,
        before: &before,
        base: &base,
        fixed: &fixed,
        assign,
        nodes: 0,
        limit: node_limit,
        found: Vec::new(),
        exhausted: false,
    };
    search.run(&order, 0);
    let to_grid = |a: &Vec<Option<usize>>| {
        let mut g = partial.clone();
        for (i, k) in a.iter().enumerate() {
            if let (Some(k), false) = (k, fixed[i]) {
                g.cells.insert(positions[i], tiles[*k].clone());
            }
        }
        g
    };
    let found: Vec<TileGrid> = search.found.iter().map(to_grid).collect();
    Ok(if search.exhausted { Forced::Exhausted { nodes: search.nodes, found } } else { Forced::Complete(found) })
}

struct Search<'a> {
    links: &'a [Vec<(usize, usize, bool)>],
    after: &'a [Vec<Vec<u64>>],
    before: &'a [Vec<Vec<u64>>],
    base: &'a [Vec<u64>],
    fixed: &'a [bool],
    assign: Vec<Option<usize>>,
    nodes: u64,
    limit: u64,
    found: Vec<Vec<Option<usize>>>,
    exhausted: bool,
}

impl Search<'_> {
    /// Tiles fitting every assigned catalog neighbour of position `i`.
    fn domain(&self, i: usize) -> Vec<u64> {
        let mut d = self.base[i].clone();
        for &(ci, j, first) in &self.links[i] {
            if let Some(t) = self.assign[j] {
                // `first`: position i comes first across the contact.
                let allowed = if first { &self.before[ci][t] } else { &self.after[ci][t] };
                for (w, a) in d.iter_mut().zip(allowed) {
                    *w &= a;
                }
            }
        }
        d
    }

    fn viable(&self, i: usize) -> bool {
        self.links[i]
            .iter()
            .all(|&(_, j, _)| self.assign[j].is_some() || self.fixed[j] || self.domain(j).iter().any(|&w| w != 0))
    }

    fn run(&mut self, order: &[usize], depth: usize) {
        if depth == order.len() {
            self.found.push(self.assign.clone());
            return;
        }
        let i = order[depth];
        let d = self.domain(i);
        for (wi, &w) in d.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let k = wi * 64 + w.trailing_zeros() as usize;
                w &= w - 1;
                if self.nodes >= self.limit {
                    self.exhausted = true;
                    return;
                }
                self.nodes += 1;
                self.assign[i] = Some(k);
                if self.viable(i) {
                    self.run(order, depth + 1);
                }
                self.assign[i] = None;
                if self.exhausted {
                    return;
                }
            }
        }
    }
}
