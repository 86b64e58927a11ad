//! The harp: Turing computations embedded in red triangles, whether they
//! block the tiling of a window, and the count of the computing meta-tiles.

pub mod machine;
pub mod meta;
pub mod sim;
pub mod window;

pub use machine::{Action, MachineError, Move, TuringMachine, ValidMachine, HALTING_THREE_STATE, RIGHT_MOVER};
pub use meta::{meta_corpus, meta_tile_counts, MetaReport, MetaRow, STATED_META_TOTAL};
pub use sim::{
    free_row_offsets, run_embedded, ComputingTile, HarpError, HarpSim, Outcome, Sigma, TapeEntry, TraceStep,
    MAX_HARP_GENERATION,
};
pub use window::{window_tileable, Site, Tileability, WindowError};
