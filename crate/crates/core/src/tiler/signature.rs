//! Edge signatures of prototiles.
//!
//! A tile of the brick lattice has six sides: two halves of its top edge,
//! two halves of its bottom edge, and its left and right edges. A side
//! carries the set of marks of the patterns that cross it. Two tiles fit
//! across a shared side when their marks on that side are equal.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::tile_algebra::{Gamma, Hue, PatternName, Pi, Prototile, Slot, Tau, Xi};

/// What crosses a side of a tile.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeMark {
    /// A leg of a trilateral, on a half of the top or bottom edge.
    Leg { gamma: Gamma, tau: Tau, pi: Pi },
    /// A basis, on the left or right edge.
    Basis { gamma: Gamma, tau: Tau },
    /// The green mid-distance signal.
    Green,
    /// The yellow free-row signal.
    Yellow,
    /// A horizontal signal of a hue, direction and level.
    Signal { hue: Hue, xi: Xi, pi: Pi },
}

/// Marks on the six sides of a tile.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeSignature {
    pub top_left: BTreeSet<EdgeMark>,
    pub top_right: BTreeSet<EdgeMark>,
    pub bottom_left: BTreeSet<EdgeMark>,
    pub bottom_right: BTreeSet<EdgeMark>,
    pub left: BTreeSet<EdgeMark>,
    pub right: BTreeSet<EdgeMark>,
}

impl EdgeSignature {
    fn horizontal(&mut self, mark: EdgeMark, slot: Slot) {
        if !slot.intersect(Slot::LEFT).is_empty() {
            self.left.insert(mark);
        }
        if !slot.intersect(Slot::RIGHT).is_empty() {
            self.right.insert(mark);
        }
    }

    /// A leg running down to the right (`r`) or to the left (`l`): it
    /// enters through one top half when the slot meets the top, and leaves
    /// through the opposite bottom half when the slot meets the bottom.
    fn diagonal(&mut self, xi: Xi, upper: Option<EdgeMark>, lower: Option<EdgeMark>, slot: Slot) {
        let (top, bottom) = match xi {
            Xi::R => (&mut self.top_left, &mut self.bottom_right),
            Xi::L => (&mut self.top_right, &mut self.bottom_left),
        };
        if let Some(m) = upper.filter(|_| !slot.intersect(Slot::TOP).is_empty()) {
            top.insert(m);
        }
        if let Some(m) = lower.filter(|_| !slot.intersect(Slot::BOTTOM).is_empty()) {
            bottom.insert(m);
        }
    }

    /// Whether no side carries a mark.
    pub fn is_blank(&self) -> bool {
        [&self.top_left, &self.top_right, &self.bottom_left, &self.bottom_right, &self.left, &self.right]
            .iter()
            .all(|s| s.is_empty())
    }
}

/// The edge signature of a prototile.
///
/// A leg atom with laterality `r` runs from the top-left half to the
/// bottom-right half (a right leg moves away from the axis going down), one
/// with laterality `l` from the top-right half to the bottom-left half. A
/// mid-point changes the leg level from `u` to `l`; a vertex emits two
/// upper legs through its bottom halves; a corner receives a lower leg and
/// sends its basis through the inner edge. Horizontal atoms cross the left
/// (right) edge when their slot meets the left (right) half. A join
/// receives a right-moving signal on its left edge and a left-moving one on
/// its right edge. The yellow of a red triangle's vertex marks the top of
/// the free region between the two legs, which starts inside the cell, so
/// it crosses no side. Blank and passive markers carry nothing.
pub fn signature(tile: &Prototile) -> EdgeSignature {
    let mut s = EdgeSignature::default();
    let red_vertex = tile.contains(&PatternName::Vertex { gamma: Gamma::R, tau: Tau::T });
    for (name, slot) in tile.atoms() {
        let leg = |gamma, tau, pi| EdgeMark::Leg { gamma, tau, pi };
        match *name {
            PatternName::Leg { gamma, tau, pi, xi } => {
                s.diagonal(xi, Some(leg(gamma, tau, pi)), Some(leg(gamma, tau, pi)), slot);
            }
            PatternName::Mid { gamma, tau, xi } => {
                s.diagonal(xi, Some(leg(gamma, tau, Pi::U)), Some(leg(gamma, tau, Pi::L)), slot);
            }
            PatternName::Vertex { gamma, tau } => {
                if !slot.intersect(Slot::BOTTOM).is_empty() {
                    s.bottom_left.insert(leg(gamma, tau, Pi::U));
                    s.bottom_right.insert(leg(gamma, tau, Pi::U));
                }
            }
            PatternName::Corner { gamma, tau, xi } => {
                s.diagonal(xi, Some(leg(gamma, tau, Pi::L)), None, slot);
                let basis = EdgeMark::Basis { gamma, tau };
                match xi {
                    Xi::R => s.left.insert(basis),
                    Xi::L => s.right.insert(basis),
                };
            }
            PatternName::Basis { gamma, tau } => s.horizontal(EdgeMark::Basis { gamma, tau }, slot),
            PatternName::Hg => s.horizontal(EdgeMark::Green, slot),
            PatternName::Hy if red_vertex => {}
            PatternName::Hy => s.horizontal(EdgeMark::Yellow, slot),
            PatternName::Hr { xi } => s.horizontal(EdgeMark::Signal { hue: Hue::R, xi, pi: Pi::U }, slot),
            PatternName::Horizontal { hue, xi, pi } => s.horizontal(EdgeMark::Signal { hue, xi, pi }, slot),
            PatternName::Join { hue, pi } => {
                s.left.insert(EdgeMark::Signal { hue, xi: Xi::R, pi });
                s.right.insert(EdgeMark::Signal { hue, xi: Xi::L, pi });
            }
            PatternName::Scent { .. } | PatternName::Compute { .. } | PatternName::W | PatternName::Z | PatternName::P => {}
        }
    }
    s
}

/// Whether a prototile belongs in a passive row.
pub fn is_passive(tile: &Prototile) -> bool {
    tile.contains(&PatternName::P)
}
