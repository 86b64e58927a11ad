//! The harp: a Turing run inside a red triangle.
//!
//! Tape squares are the cells where the legs meet the free rows: square 0
//! is the vertex, square `+j` (`−j`) the right (left) leg on the `j`-th
//! free row. The history of a square runs down its perpendicular, an
//! abstract column that starts at the square and meets no leg and no
//! basis other than the triangle's own basis.
//!
//! The computing signal carries the head's state. On a free row it travels
//! towards the next perpendicular and executes an instruction there. When
//! the new move keeps the direction and the square is not on a leg, the
//! signal goes on along the row. Otherwise it first descends the
//! perpendicular, carrying the new state and content, and takes the row
//! again at the next free row. A descent from the last free row meets the
//! basis and interrupts the run. A halting state is emitted on a tile that
//! nothing can follow, which blocks the tiling.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::brackets::{PhaseChoices, Window};
use crate::tile_algebra::Xi;
use crate::trilaterals::{generate, Status, TriColour, Trilateral};

use super::machine::{Move, ValidMachine};

/// Largest generation whose free rows are computed.
pub const MAX_HARP_GENERATION: u32 = 13;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HarpError {
    #[error("{0:?} is not a red triangle")]
    NotRedTriangle(Trilateral),
    #[error("generation {0} exceeds {MAX_HARP_GENERATION}")]
    TooLarge(u32),
}

/// Operation of a computing tile.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sigma {
    /// Start, on the vertex.
    I,
    /// Instruction on the left leg.
    Bl,
    /// Instruction on the right leg.
    Br,
    /// State on a free row.
    S,
    /// Content on a perpendicular.
    T,
    /// Instruction changing the direction.
    M,
    /// State leaving a perpendicular for a free row.
    E,
    /// State and content descending a perpendicular.
    C,
    /// Instruction keeping the direction.
    U,
    /// Halting state after an instruction keeping the direction.
    Hu,
    /// Halting state on a descent.
    Hc,
    /// Interruption by the basis.
    D,
}

/// A computing tile `Tσξ` and its payload.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComputingTile {
    pub sigma: Sigma,
    pub xi: Option<Xi>,
    pub state: Option<String>,
    pub symbol: Option<String>,
    /// The state is a halting one.
    pub black: bool,
}

impl fmt::Display for ComputingTile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.sigma {
            Sigma::I => "i",
            Sigma::Bl => "bl",
            Sigma::Br => "br",
            Sigma::S => "s",
            Sigma::T => "t",
            Sigma::M => "m",
            Sigma::E => "e",
            Sigma::C => "c",
            Sigma::U => "u",
            Sigma::Hu => "hu",
            Sigma::Hc => "hc",
            Sigma::D => "d",
        };
        let x = match self.xi {
            Some(Xi::L) => "l",
            Some(Xi::R) => "r",
            None => "",
        };
        write!(f, "T{s}{x}")?;
        match (&self.state, &self.symbol) {
            (Some(q), Some(a)) => write!(f, "[{q},{a}]"),
            (Some(q), None) => write!(f, "[{q}]"),
            (None, Some(a)) => write!(f, "[{a}]"),
            (None, None) => Ok(()),
        }
    }
}

/// A tile of the head's path.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub row: i64,
    pub square: i64,
    pub column: i64,
    pub tile: ComputingTile,
}

/// A symbol written on a square by an instruction (`step ≥ 1`), or the
/// blank the square starts with (`step = 0`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TapeEntry {
    pub step: usize,
    pub row: i64,
    pub symbol: String,
}

/// How a run ends.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    /// The step budget ran out first.
    Running,
    /// A halting state was produced at this square and row.
    Blocked { row: i64, square: i64, column: i64 },
    /// The signal met the basis on this perpendicular.
    Interrupted { square: i64 },
}

/// A run embedded in a red triangle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HarpSim {
    pub triangle: Trilateral,
    /// Free rows, top to bottom.
    pub free_rows: Vec<i64>,
    /// History of each square, top to bottom.
    pub tape_columns: BTreeMap<i64, Vec<TapeEntry>>,
    pub trace: Vec<TraceStep>,
    /// Executed instructions.
    pub steps: usize,
    pub outcome: Outcome,
}

impl HarpSim {
    /// Number of free rows: an upper bound on the rows the head can use.
    pub fn capacity(&self) -> usize {
        self.free_rows.len()
    }

    /// Free rows along which the signal travelled.
    pub fn rows_travelled(&self) -> usize {
        let mut rows: Vec<i64> = self.trace.iter().filter(|s| s.tile.sigma == Sigma::S).map(|s| s.row).collect();
        rows.dedup();
        rows.len()
    }

    /// The tape after `k` instructions, blanks omitted.
    pub fn tape_after(&self, k: usize) -> BTreeMap<i64, String> {
        let blank = self.tape_columns.values().flat_map(|h| h.first()).map(|e| e.symbol.clone()).next();
        self.tape_columns
            .iter()
            .filter_map(|(&sq, h)| {
                let last = h.iter().take_while(|e| e.step <= k).last()?;
                (Some(&last.symbol) != blank.as_ref()).then(|| (sq, last.symbol.clone()))
            })
            .collect()
    }

    /// Geometric column of a square's perpendicular.
    pub fn column_of(&self, square: i64) -> i64 {
        square_column(&self.triangle, &self.free_rows, square)
    }
}

fn square_column(t: &Trilateral, free: &[i64], square: i64) -> i64 {
    if square == 0 {
        return t.axis;
    }
    let offset = free[square.unsigned_abs() as usize - 1] - t.vertex_row;
    t.axis + square.signum() * offset
}

/// Offsets from the vertex of the free rows of a red triangle of
/// generation `g`: rows strictly inside it that no smaller red triangle on
/// the axis covers. They depend on the generation only.
pub fn free_row_offsets(g: u32) -> Result<Vec<i64>, HarpError> {
    if g > MAX_HARP_GENERATION {
        return Err(HarpError::TooLarge(g));
    }
    let half = 1i64 << (g + 3);
    let ts = generate(&PhaseChoices::butterfly(g), g, Window::new(-half, half)).expect("window is wide enough");
    let red = |t: &&Trilateral| t.colour == TriColour::Red && t.status == Status::Triangle;
    let t = ts
        .iter()
        .filter(red)
        .find(|t| t.generation == g && t.vertex_row >= -half)
        .expect("a full triangle of each generation");
    let inner: Vec<&Trilateral> =
        ts.iter().filter(red).filter(|u| u.generation < g && t.vertex_row < u.vertex_row && u.basis_row < t.basis_row).collect();
    Ok((t.vertex_row + 1..t.basis_row)
        .filter(|&r| !inner.iter().any(|u| u.vertex_row <= r && r <= u.basis_row))
        .map(|r| r - t.vertex_row)
        .collect())
}

fn xi_of(m: Move) -> Xi {
    if m == Move::Left {
        Xi::L
    } else {
        Xi::R
    }
}

/// Runs `tm` from the vertex of a red triangle on a blank tape, for at
/// most `max_steps` instructions.
pub fn run_embedded(tm: &ValidMachine, triangle: &Trilateral, max_steps: usize) -> Result<HarpSim, HarpError> {
    if triangle.colour != TriColour::Red || triangle.status != Status::Triangle {
        return Err(HarpError::NotRedTriangle(*triangle));
    }
    let free: Vec<i64> = free_row_offsets(triangle.generation)?.into_iter().map(|d| triangle.vertex_row + d).collect();
    let mut sim = HarpSim {
        triangle: *triangle,
        free_rows: free.clone(),
        tape_columns: BTreeMap::new(),
        trace: Vec::new(),
        steps: 0,
        outcome: Outcome::Running,
    };
    let blank = tm.blank().to_string();
    // Perpendiculars start blank where their square lies on the border.
    sim.tape_columns.insert(0, vec![TapeEntry { step: 0, row: triangle.vertex_row, symbol: blank.clone() }]);
    for (j, &r) in free.iter().enumerate() {
        for sq in [-(j as i64) - 1, j as i64 + 1] {
            sim.tape_columns.insert(sq, vec![TapeEntry { step: 0, row: r, symbol: blank.clone() }]);
        }
    }
    let push = |sim: &mut HarpSim, row: i64, square: i64, sigma, xi, state: Option<&str>, symbol: Option<&str>, black| {
        let column = square_column(triangle, &free, square);
        let tile = ComputingTile { sigma, xi, state: state.map(Into::into), symbol: symbol.map(Into::into), black };
        sim.trace.push(TraceStep { row, square, column, tile });
    };

    // `level` 0 is the vertex row, `level` j the j-th free row.
    let row_of = |level: usize| if level == 0 { triangle.vertex_row } else { free[level - 1] };
    let mut level = 0usize;
    let mut square = 0i64;
    let mut state = tm.initial().to_string();
    let mut heading: Option<Move> = None;
    if tm.is_halting(&state) {
        push(&mut sim, triangle.vertex_row, 0, Sigma::Hc, None, Some(&state), None, true);
        sim.outcome = Outcome::Blocked { row: triangle.vertex_row, square: 0, column: triangle.axis };
        return Ok(sim);
    }
    loop {
        if sim.steps == max_steps {
            return Ok(sim);
        }
        // Execute the instruction at the current square.
        let row = row_of(level);
        let read = sim.tape_columns[&square].last().expect("square exists").symbol.clone();
        let act = tm.action(&state, &read).clone();
        sim.steps += 1;
        sim.tape_columns.get_mut(&square).expect("square exists").push(TapeEntry {
            step: sim.steps,
            row,
            symbol: act.write.clone(),
        });
        let xi = Some(xi_of(act.direction));
        let on_border = square.unsigned_abs() as usize == level;
        let sigma = match (level, on_border, square.signum()) {
            (0, _, _) => Sigma::I,
            (_, true, -1) => Sigma::Bl,
            (_, true, _) => Sigma::Br,
            _ if heading == Some(act.direction) => Sigma::U,
            _ => Sigma::M,
        };
        push(&mut sim, row, square, sigma, xi, Some(&state), Some(&read), false);
        let black = tm.is_halting(&act.state);
        let descend = sigma != Sigma::U;
        if black {
            let h = if descend { Sigma::Hc } else { Sigma::Hu };
            push(&mut sim, row, square, h, xi, Some(&act.state), Some(&act.write), true);
            sim.outcome = Outcome::Blocked { row, square, column: square_column(triangle, &free, square) };
            return Ok(sim);
        }
        state = act.state;
        heading = Some(act.direction);
        if descend {
            push(&mut sim, row, square, Sigma::C, xi, Some(&state), Some(&act.write), false);
            if level == free.len() {
                push(&mut sim, triangle.basis_row, square, Sigma::D, xi, Some(&state), Some(&act.write), false);
                sim.outcome = Outcome::Interrupted { square };
                return Ok(sim);
            }
            level += 1;
            push(&mut sim, row_of(level), square, Sigma::E, xi, Some(&state), None, false);
        }
        push(&mut sim, row_of(level), square, Sigma::S, xi, Some(&state), None, false);
        square += act.direction.delta();
    }
}
