//! Interwoven triangles and phantoms on an integer lattice.
//!
//! Rows are the positions of the bracket model: a generation-`g` active
//! interval `[a, a + 2^(g+1)]` is the row span of a triangle, the silent
//! interval that follows it the row span of a phantom. Every trilateral is
//! an isoceles figure with its height on an axis. Between two rows the
//! tiling inserts a passive row shifted by half a cell, so a leg advances
//! one cell per two tiling rows, that is one cell per row of the model: a
//! trilateral of height `h` has its corners `h` cells away from the axis.
//!
//! Scenes place the trilaterals on one or more axes and compute the signal
//! field carried by every cell; see [`scene`].

pub mod scene;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::brackets::{BracketError, IntervalKind, PhaseChoices, Window};
use crate::tile_algebra::{Gamma, Tau};

pub use scene::{build_scene, classify_bases, Axis, BasisClass, BasisSegment, Scene, SceneWindow, BAND_ABOVE, BAND_BELOW};

/// Errors of trilateral construction.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TrilateralError {
    #[error("row window [{lo}, {hi}) is too small: generation {generation} needs {min} rows")]
    WindowTooSmall { lo: i64, hi: i64, generation: u32, min: i64 },
    #[error("expected {expected} phase bits, got {got}")]
    ChoiceLength { expected: usize, got: usize },
    #[error("row-0 phase must be in 0..4, got {0}")]
    BadPhase(u8),
    #[error("a scene needs at least one axis")]
    NoAxis,
    #[error("axis at column {column} starts at row {row}, which is not a legal cut (the mid-point of a generation-0 phantom)")]
    BadStartRow { column: i64, row: i64 },
    #[error("axes at columns {a} and {b} are too close: their trilaterals overlap inside the window")]
    AxesOverlap { a: i64, b: i64 },
    #[error("duplicate axis at column {0}")]
    DuplicateAxis(i64),
    #[error("row {row} carries no basis of generation {generation}")]
    NoSuchBasis { generation: u32, row: i64 },
    #[error("scene window rows [{lo}, {hi}) leave the band around row {apex} where the scene is complete (allowed [{band_lo}, {band_hi}))")]
    OutsideBand { lo: i64, hi: i64, apex: i64, band_lo: i64, band_hi: i64 },
    #[error(transparent)]
    Bracket(#[from] BracketError),
}

/// Triangle or phantom.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Status {
    Triangle,
    Phantom,
}

impl Status {
    pub fn tau(self) -> Tau {
        match self {
            Status::Triangle => Tau::T,
            Status::Phantom => Tau::Phi,
        }
    }
}

/// Colour of a trilateral.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TriColour {
    /// Generation 0.
    Blue0,
    /// Even generation above 0.
    Blue,
    /// Odd generation.
    Red,
}

impl TriColour {
    pub fn of_generation(g: u32) -> TriColour {
        if g == 0 {
            TriColour::Blue0
        } else if g % 2 == 0 {
            TriColour::Blue
        } else {
            TriColour::Red
        }
    }

    pub fn gamma(self) -> Gamma {
        match self {
            TriColour::Blue0 => Gamma::B0,
            TriColour::Blue => Gamma::Bn,
            TriColour::Red => Gamma::R,
        }
    }
}

/// A triangle or a phantom.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Trilateral {
    pub axis: i64,
    pub generation: u32,
    pub vertex_row: i64,
    pub status: Status,
    pub colour: TriColour,
    pub mid_row: i64,
    pub basis_row: i64,
    /// Cells from the axis to a corner.
    pub half_width: i64,
}

impl Trilateral {
    /// The trilateral of generation `g` whose vertex is on `vertex_row`.
    pub fn new(axis: i64, generation: u32, status: Status, vertex_row: i64) -> Trilateral {
        let height = 1i64 << (generation + 1);
        Trilateral {
            axis,
            generation,
            vertex_row,
            status,
            colour: TriColour::of_generation(generation),
            mid_row: vertex_row + height / 2,
            basis_row: vertex_row + height,
            half_width: height,
        }
    }

    pub fn height(&self) -> i64 {
        self.basis_row - self.vertex_row
    }

    /// Closed row span (the latitude).
    pub fn latitude(&self) -> (i64, i64) {
        (self.vertex_row, self.basis_row)
    }

    /// Distance in cells from the axis to each leg on `row` (the row
    /// distance from the vertex), when the row meets the trilateral.
    pub fn leg_offset(&self, row: i64) -> Option<i64> {
        (self.vertex_row..=self.basis_row).contains(&row).then(|| row - self.vertex_row)
    }

    /// Whether the cell `(row, column)` lies in the closed area.
    pub fn contains_cell(&self, row: i64, column: i64) -> bool {
        self.leg_offset(row).is_some_and(|d| (column - self.axis).abs() <= d)
    }
}

/// Relation between two trilaterals of one axis, from their projections.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CrossKind {
    /// The areas share at most a boundary point.
    Disjoint,
    /// The basis of one figure cuts the legs of the other on `row`.
    BasisCutsLegs {
        /// True when the basis belongs to the first argument.
        basis_of_first: bool,
        row: i64,
    },
    /// The first area contains the second.
    Contains,
    /// The first area is contained in the second.
    ContainedIn,
}

/// Classify a pair of trilaterals of the same axis from the projections of
/// their row spans `[x, u]` and `[y, v]`.
pub fn crossing_kind(a: &Trilateral, b: &Trilateral) -> CrossKind {
    let (x, u) = a.latitude();
    let (y, v) = b.latitude();
    if x <= y && v <= u {
        CrossKind::Contains
    } else if y <= x && u <= v {
        CrossKind::ContainedIn
    } else if u <= y || v <= x {
        CrossKind::Disjoint
    } else if x < y {
        CrossKind::BasisCutsLegs { basis_of_first: true, row: u }
    } else {
        CrossKind::BasisCutsLegs { basis_of_first: false, row: v }
    }
}

pub(crate) fn check_choices(choices: &PhaseChoices, max_generation: u32) -> Result<(), TrilateralError> {
    if choices.phase > 3 {
        return Err(TrilateralError::BadPhase(choices.phase));
    }
    if choices.bits.len() != max_generation as usize {
        return Err(TrilateralError::ChoiceLength { expected: max_generation as usize, got: choices.bits.len() });
    }
    Ok(())
}

/// Trilaterals of generation `g` whose latitude meets `[lo, hi)`, given the
/// row anchor of that generation.
pub(crate) fn trilaterals_of(axis: i64, g: u32, anchor: i64, lo: i64, hi: i64) -> Vec<Trilateral> {
    let len = 1i64 << (g + 1);
    let period = 2 * len;
    let mut out = Vec::new();
    let mut a = anchor + period * (lo - period - anchor).div_euclid(period);
    while a < hi {
        for (status, v) in [(Status::Triangle, a), (Status::Phantom, a + len)] {
            if v + len >= lo && v < hi {
                out.push(Trilateral::new(axis, g, status, v));
            }
        }
        a += period;
    }
    out
}

/// Trilaterals of generations `0..=max_generation` on the axis at column 0
/// whose latitude meets the row window, in canonical order (generation,
/// vertex row).
pub fn generate(
    choices: &PhaseChoices,
    max_generation: u32,
    window: Window,
) -> Result<Vec<Trilateral>, TrilateralError> {
    check_choices(choices, max_generation)?;
    let min = 1i64 << (max_generation + 2);
    if window.width() < min {
        return Err(TrilateralError::WindowTooSmall { lo: window.lo, hi: window.hi, generation: max_generation, min });
    }
    let anchors = choices.anchors();
    let mut out: Vec<Trilateral> = (0..=max_generation)
        .flat_map(|g| trilaterals_of(0, g, anchors[g as usize], window.lo, window.hi))
        .collect();
    out.sort();
    Ok(out)
}

/// Interval kind corresponding to a status.
pub fn interval_kind(status: Status) -> IntervalKind {
    match status {
        Status::Triangle => IntervalKind::Active,
        Status::Phantom => IntervalKind::Silent,
    }
}
