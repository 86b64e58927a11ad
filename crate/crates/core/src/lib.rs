//! Combinatorial machinery for tiling-based computability experiments:
//! abstract-bracket models, interwoven triangles and their multi-axis scenes,
//! a tile-formula algebra with exact prototile counts, a brick-layout tiler
//! with forced-completion search, and the embedding of Turing-machine runs
//! into red triangles.

pub mod brackets;
pub mod tile_algebra;
pub mod harp;
pub mod tiler;
pub mod render;
pub mod scenario;
pub mod trilaterals;
