//! Whether a window of a scene can be tiled once every red triangle whose
//! vertex lies in it carries the machine's run.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tiler::{realize, verify, TileGrid, TilerError};
use crate::trilaterals::{Scene, Status, TriColour};

use super::machine::ValidMachine;
use super::sim::{run_embedded, HarpError, HarpSim, Outcome};

#[derive(Debug, Error)]
pub enum WindowError {
    #[error(transparent)]
    Tiler(#[from] TilerError),
    #[error(transparent)]
    Harp(#[from] HarpError),
    #[error("the construction does not tile the window: {0} mismatched contacts")]
    Inconsistent(usize),
}

/// A cell of a scene.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Site {
    pub row: i64,
    pub column: i64,
}

/// Result of [`window_tileable`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tileability {
    /// The construction's tiling with the runs of every red triangle.
    Tileable { grid: TileGrid, runs: Vec<HarpSim> },
    /// A run halts at this window cell: no tile fits after it.
    Blocked { site: Site, run: Box<HarpSim> },
    /// The instruction budget ran out.
    Exhausted,
}

/// Composes the construction's tiling of the scene window with the run of
/// `tm` in every red triangle whose vertex lies in the window. The runs
/// share `budget` instructions.
pub fn window_tileable(tm: &ValidMachine, scene: &Scene, budget: usize) -> Result<Tileability, WindowError> {
    let grid = realize(scene)?;
    let bad = verify(&grid);
    if !bad.is_empty() {
        return Err(WindowError::Inconsistent(bad.len()));
    }
    let w = scene.window;
    let mut left = budget;
    let mut runs = Vec::new();
    let reds = scene.trilaterals.iter().filter(|t| {
        t.colour == TriColour::Red && t.status == Status::Triangle && w.contains(t.vertex_row, t.axis)
    });
    for t in reds {
        let run = run_embedded(tm, t, left)?;
        left -= run.steps;
        match run.outcome {
            Outcome::Running => return Ok(Tileability::Exhausted),
            Outcome::Blocked { row, column, .. } if w.contains(row, column) => {
                return Ok(Tileability::Blocked { site: Site { row, column }, run: Box::new(run) });
            }
            _ => runs.push(run),
        }
    }
    Ok(Tileability::Tileable { grid, runs })
}
