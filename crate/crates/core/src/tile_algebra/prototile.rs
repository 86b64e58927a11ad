//! Prototiles as canonical sets of masked patterns.
//!
//! A pattern occupies a region of the unit square described by a quadrant
//! mask. Masking operators intersect the region with a half; superposition
//! unions the regions of equal patterns (patterns are opaque, so a pattern
//! superposed with itself is the same pattern).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::pattern::PatternName;

/// Region of the unit square as a set of quadrants.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Slot(u8);

impl Slot {
    pub const TOP_LEFT: Slot = Slot(1);
    pub const TOP_RIGHT: Slot = Slot(2);
    pub const BOTTOM_LEFT: Slot = Slot(4);
    pub const BOTTOM_RIGHT: Slot = Slot(8);
    pub const FULL: Slot = Slot(15);
    pub const LEFT: Slot = Slot(5);
    pub const RIGHT: Slot = Slot(10);
    pub const TOP: Slot = Slot(3);
    pub const BOTTOM: Slot = Slot(12);
    pub const EMPTY: Slot = Slot(0);

    pub fn from_bits(bits: u8) -> Slot {
        Slot(bits & 15)
    }
    pub fn bits(self) -> u8 {
        self.0
    }
    pub fn union(self, other: Slot) -> Slot {
        Slot(self.0 | other.0)
    }
    pub fn intersect(self, other: Slot) -> Slot {
        Slot(self.0 & other.0)
    }
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }
    pub fn contains(self, other: Slot) -> bool {
        self.0 & other.0 == other.0
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let named = [
            (Slot::FULL, "F"),
            (Slot::LEFT, "L"),
            (Slot::RIGHT, "R"),
            (Slot::TOP, "T"),
            (Slot::BOTTOM, "B"),
            (Slot::TOP_LEFT, "TL"),
            (Slot::TOP_RIGHT, "TR"),
            (Slot::BOTTOM_LEFT, "BL"),
            (Slot::BOTTOM_RIGHT, "BR"),
        ];
        if let Some((_, n)) = named.iter().find(|(s, _)| s == self) {
            return f.write_str(n);
        }
        let parts: Vec<&str> = named[5..].iter().filter(|(s, _)| self.contains(*s)).map(|(_, n)| *n).collect();
        write!(f, "{}", parts.join("|"))
    }
}

/// A side accepted by a masking operator.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    L,
    R,
    B,
    T,
}

impl Side {
    pub fn slot(self) -> Slot {
        match self {
            Side::L => Slot::LEFT,
            Side::R => Slot::RIGHT,
            Side::B => Slot::BOTTOM,
            Side::T => Slot::TOP,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::L => "L",
            Side::R => "R",
            Side::B => "B",
            Side::T => "T",
        })
    }
}

/// Canonical, duplicate-free set of `(pattern, slot)` atoms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Prototile {
    atoms: BTreeMap<PatternName, Slot>,
}

impl Prototile {
    pub fn empty() -> Prototile {
        Prototile::default()
    }

    /// A single pattern filling the whole square.
    pub fn atom(name: PatternName) -> Prototile {
        Prototile::empty().with(name, Slot::FULL)
    }

    /// Add a pattern restricted to `slot` (no-op when the slot is empty).
    pub fn with(mut self, name: PatternName, slot: Slot) -> Prototile {
        self.insert(name, slot);
        self
    }

    pub fn insert(&mut self, name: PatternName, slot: Slot) {
        if slot.is_empty() {
            return;
        }
        let e = self.atoms.entry(name).or_insert(Slot::EMPTY);
        *e = e.union(slot);
    }

    /// Superposition `A + B`.
    pub fn superpose(&self, other: &Prototile) -> Prototile {
        let mut out = self.clone();
        for (n, s) in &other.atoms {
            out.insert(n.clone(), *s);
        }
        out
    }

    /// Masking operator `μ_side`.
    pub fn mask(&self, side: Side) -> Prototile {
        let keep = side.slot();
        let mut out = Prototile::empty();
        for (n, s) in &self.atoms {
            out.insert(n.clone(), s.intersect(keep));
        }
        out
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&PatternName, Slot)> {
        self.atoms.iter().map(|(n, s)| (n, *s))
    }

    pub fn slot_of(&self, name: &PatternName) -> Option<Slot> {
        self.atoms.get(name).copied()
    }

    pub fn contains(&self, name: &PatternName) -> bool {
        self.atoms.contains_key(name)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Stable identifier: FNV-1a (64 bit) of the canonical text form.
    pub fn id(&self) -> String {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in self.to_string().bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
        format!("{h:016x}")
    }
}

impl fmt::Display for Prototile {
    /// Canonical text: atoms in order, `name` or `name@slot`, joined by ` + `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms.is_empty() {
            return f.write_str("0");
        }
        for (i, (n, s)) in self.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if *s == Slot::FULL {
                write!(f, "{n}")?;
            } else {
                write!(f, "{n}@{s}")?;
            }
        }
        Ok(())
    }
}

/// Error for malformed prototile or slot text.
#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
#[error("malformed prototile text `{0}`")]
pub struct PrototileParseError(pub String);

impl std::str::FromStr for Slot {
    type Err = PrototileParseError;

    /// Inverse of the `Display` form: a named slot or quadrants joined by `|`.
    fn from_str(s: &str) -> Result<Slot, PrototileParseError> {
        let quadrant = |q: &str| match q {
            "F" => Some(Slot::FULL),
            "L" => Some(Slot::LEFT),
            "R" => Some(Slot::RIGHT),
            "T" => Some(Slot::TOP),
            "B" => Some(Slot::BOTTOM),
            "TL" => Some(Slot::TOP_LEFT),
            "TR" => Some(Slot::TOP_RIGHT),
            "BL" => Some(Slot::BOTTOM_LEFT),
            "BR" => Some(Slot::BOTTOM_RIGHT),
            _ => None,
        };
        s.split('|')
            .try_fold(Slot::EMPTY, |acc, q| quadrant(q.trim()).map(|x| acc.union(x)))
            .filter(|x| !x.is_empty())
            .ok_or_else(|| PrototileParseError(s.to_string()))
    }
}

impl std::str::FromStr for Prototile {
    type Err = PrototileParseError;

    /// Inverse of the canonical text form (`0` is the empty prototile).
    fn from_str(s: &str) -> Result<Prototile, PrototileParseError> {
        let s = s.trim();
        if s == "0" {
            return Ok(Prototile::empty());
        }
        let bad = || PrototileParseError(s.to_string());
        let mut out = Prototile::empty();
        for term in s.split('+') {
            let term = term.trim();
            let (name, slot) = match term.split_once('@') {
                Some((n, sl)) => (n, sl.parse::<Slot>()?),
                None => (term, Slot::FULL),
            };
            out.insert(name.parse::<PatternName>().map_err(|_| bad())?, slot);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PatternName {
        s.parse().unwrap()
    }

    #[test]
    fn vertex_definition_gives_bottom_quadrants() {
        let v = Prototile::atom(p("Lrtul")).mask(Side::L).superpose(&Prototile::atom(p("Lrtur")).mask(Side::R)).mask(Side::B);
        assert_eq!(v.to_string(), "Lrtul@BL + Lrtur@BR");
    }

    #[test]
    fn halves_recompose() {
        let a = Prototile::atom(p("Hg")).superpose(&Prototile::atom(p("Hrl")).mask(Side::T));
        assert_eq!(a.mask(Side::L).superpose(&a.mask(Side::R)), a);
        assert_eq!(a.mask(Side::T).superpose(&a.mask(Side::B)), a);
    }

    #[test]
    fn ids_are_stable_and_distinct() {
        let a = Prototile::atom(p("Hg"));
        let b = Prototile::atom(p("Hy"));
        assert_eq!(a.id(), Prototile::atom(p("Hg")).id());
        assert_ne!(a.id(), b.id());
        assert_eq!(a.id().len(), 16);
    }

    #[test]
    fn text_round_trips() {
        let v = Prototile::atom(p("Lrtul")).mask(Side::L).superpose(&Prototile::atom(p("Hg")));
        let v = v.with(p("Hy"), Slot::TOP_RIGHT.union(Slot::BOTTOM_LEFT));
        assert_eq!(v.to_string().parse::<Prototile>().unwrap(), v);
        assert_eq!("0".parse::<Prototile>().unwrap(), Prototile::empty());
        assert!("Hg@Q".parse::<Prototile>().is_err());
        assert!("Hq".parse::<Prototile>().is_err());
    }
}
