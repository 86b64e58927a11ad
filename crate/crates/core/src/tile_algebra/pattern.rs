//! Elementary pattern names.
//!
//! Names follow the compact notation of the construction: `Lγτπξ` legs,
//! `Bγτ` bases, `Vγτ` vertices, `Mγτξ` mid-points, `Cγτξ` corners, the
//! information signals `Hrl`, `Hrr`, `Hg`, `Hy`, the horizontal signals
//! `Hγξπ`, joins `Jγπ`, scent `Sωνκ`, computing signals `Tσξ…`, and the blank
//! and passive markers `W`, `Z`, `p`.
//!
//! `τ = φ` is spelled `phi`, so `Lbnphiur` is the upper right leg of a simple
//! blue phantom.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Trilateral colour: blue of generation 0, simple blue, or red.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Gamma {
    B0,
    Bn,
    R,
}

/// Colour of a horizontal or join signal (blue or red).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Hue {
    B,
    R,
}

/// Status: triangle or phantom.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Tau {
    T,
    Phi,
}

/// Part of a leg (first/upper half or second/lower half) or level of a
/// horizontal signal (upper or lower).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pi {
    U,
    L,
}

/// Laterality.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Xi {
    L,
    R,
}

impl Xi {
    pub fn flip(self) -> Xi {
        match self {
            Xi::L => Xi::R,
            Xi::R => Xi::L,
        }
    }
}

/// Scent node status (black or white).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Nu {
    B,
    W,
}

/// Scent signal phase: start, continuation, final.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kappa {
    S,
    C,
    F,
}

/// Operation of a computing signal `Tσ`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sigma {
    /// start at the vertex
    I,
    /// border tile initialising a square
    Bi,
    /// border tile executing an instruction
    B,
    /// state conveyed by a row
    S,
    /// content conveyed by a perpendicular
    T,
    /// instruction with a change of direction
    M,
    /// split of state and content on the next row
    E,
    /// descent along a perpendicular
    C,
    /// instruction keeping the direction
    U,
    /// halting after an unchanged direction
    Hu,
    /// halting after a changed direction
    Hc,
    /// interruption by the basis
    D,
}

impl Sigma {
    fn as_str(self) -> &'static str {
        match self {
            Sigma::I => "i",
            Sigma::Bi => "bi",
            Sigma::B => "b",
            Sigma::S => "s",
            Sigma::T => "t",
            Sigma::M => "m",
            Sigma::E => "e",
            Sigma::C => "c",
            Sigma::U => "u",
            Sigma::Hu => "hu",
            Sigma::Hc => "hc",
            Sigma::D => "d",
        }
    }
}

/// An elementary pattern name.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PatternName {
    /// `Lγτπξ`
    Leg { gamma: Gamma, tau: Tau, pi: Pi, xi: Xi },
    /// `Bγτ`
    Basis { gamma: Gamma, tau: Tau },
    /// `Vγτ`
    Vertex { gamma: Gamma, tau: Tau },
    /// `Mγτξ`
    Mid { gamma: Gamma, tau: Tau, xi: Xi },
    /// `Cγτξ`
    Corner { gamma: Gamma, tau: Tau, xi: Xi },
    /// `Hrl`, `Hrr`: red horizontal marker of a non-free row
    Hr { xi: Xi },
    /// `Hg`: green mid-distance signal
    Hg,
    /// `Hy`: yellow free-row signal
    Hy,
    /// `Hγξπ`: horizontal signal of a colour, laterality and level
    Horizontal { hue: Hue, xi: Xi, pi: Pi },
    /// `Jγπ`: join of two horizontal signals
    Join { hue: Hue, pi: Pi },
    /// `Sωνκ`: scent
    Scent { omega: u8, nu: Nu, kappa: Kappa },
    /// `Tσξ…`: computing signal
    Compute { sigma: Sigma, xi: Vec<Xi> },
    /// `W`: blank hyperbolic tile
    W,
    /// `Z`: blank active tile
    Z,
    /// `p`: passive-row marker
    P,
}

/// Error for malformed pattern names.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown pattern name `{0}`")]
pub struct PatternParseError(pub String);

impl fmt::Display for Gamma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Gamma::B0 => "b0",
            Gamma::Bn => "bn",
            Gamma::R => "r",
        })
    }
}

impl fmt::Display for Hue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Hue::B => "b",
            Hue::R => "r",
        })
    }
}

impl fmt::Display for Tau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tau::T => "t",
            Tau::Phi => "phi",
        })
    }
}

impl fmt::Display for Pi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pi::U => "u",
            Pi::L => "l",
        })
    }
}

impl fmt::Display for Xi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Xi::L => "l",
            Xi::R => "r",
        })
    }
}

impl fmt::Display for PatternName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use PatternName::*;
        match self {
            Leg { gamma, tau, pi, xi } => write!(f, "L{gamma}{tau}{pi}{xi}"),
            Basis { gamma, tau } => write!(f, "B{gamma}{tau}"),
            Vertex { gamma, tau } => write!(f, "V{gamma}{tau}"),
            Mid { gamma, tau, xi } => write!(f, "M{gamma}{tau}{xi}"),
            Corner { gamma, tau, xi } => write!(f, "C{gamma}{tau}{xi}"),
            Hr { xi } => write!(f, "Hr{xi}"),
            Hg => f.write_str("Hg"),
            Hy => f.write_str("Hy"),
            Horizontal { hue, xi, pi } => write!(f, "H{hue}{xi}{pi}"),
            Join { hue, pi } => write!(f, "J{hue}{pi}"),
            Scent { omega, nu, kappa } => {
                let nu = match nu {
                    Nu::B => "b",
                    Nu::W => "w",
                };
                let kappa = match kappa {
                    Kappa::S => "s",
                    Kappa::C => "c",
                    Kappa::F => "f",
                };
                write!(f, "S{omega}{nu}{kappa}")
            }
            Compute { sigma, xi } => {
                write!(f, "T{}", sigma.as_str())?;
                for x in xi {
                    write!(f, "{x}")?;
                }
                Ok(())
            }
            W => f.write_str("W"),
            Z => f.write_str("Z"),
            P => f.write_str("p"),
        }
    }
}

/// Small cursor over a name.
struct Cursor<'a> {
    s: &'a str,
}

impl<'a> Cursor<'a> {
    fn eat(&mut self, lit: &str) -> bool {
        if let Some(rest) = self.s.strip_prefix(lit) {
            self.s = rest;
            true
        } else {
            false
        }
    }
    fn gamma(&mut self) -> Option<Gamma> {
        if self.eat("b0") {
            Some(Gamma::B0)
        } else if self.eat("bn") {
            Some(Gamma::Bn)
        } else if self.eat("r") {
            Some(Gamma::R)
        } else {
            None
        }
    }
    fn hue(&mut self) -> Option<Hue> {
        if self.eat("b0") || self.eat("bn") || self.eat("b") {
            Some(Hue::B)
        } else if self.eat("r") {
            Some(Hue::R)
        } else {
            None
        }
    }
    fn tau(&mut self) -> Option<Tau> {
        if self.eat("t") {
            Some(Tau::T)
        } else if self.eat("phi") {
            Some(Tau::Phi)
        } else {
            None
        }
    }
    fn pi(&mut self) -> Option<Pi> {
        if self.eat("u") {
            Some(Pi::U)
        } else if self.eat("l") {
            Some(Pi::L)
        } else {
            None
        }
    }
    fn xi(&mut self) -> Option<Xi> {
        if self.eat("l") {
            Some(Xi::L)
        } else if self.eat("r") {
            Some(Xi::R)
        } else {
            None
        }
    }
    fn done(&self) -> bool {
        self.s.is_empty()
    }
}

impl FromStr for PatternName {
    type Err = PatternParseError;

    fn from_str(name: &str) -> Result<Self, Self::Err> {
        let err = || PatternParseError(name.to_string());
        let mut c = Cursor { s: name };
        let parsed = if c.eat("L") {
            let gamma = c.gamma().ok_or_else(err)?;
            let tau = c.tau().ok_or_else(err)?;
            let pi = c.pi().ok_or_else(err)?;
            let xi = c.xi().ok_or_else(err)?;
            PatternName::Leg { gamma, tau, pi, xi }
        } else if c.eat("B") {
            PatternName::Basis { gamma: c.gamma().ok_or_else(err)?, tau: c.tau().ok_or_else(err)? }
        } else if c.eat("V") {
            PatternName::Vertex { gamma: c.gamma().ok_or_else(err)?, tau: c.tau().ok_or_else(err)? }
        } else if c.eat("M") {
            let gamma = c.gamma().ok_or_else(err)?;
            let tau = c.tau().ok_or_else(err)?;
            PatternName::Mid { gamma, tau, xi: c.xi().ok_or_else(err)? }
        } else if c.eat("C") {
            let gamma = c.gamma().ok_or_else(err)?;
            let tau = c.tau().ok_or_else(err)?;
            PatternName::Corner { gamma, tau, xi: c.xi().ok_or_else(err)? }
        } else if c.eat("H") {
            if c.eat("g") {
                PatternName::Hg
            } else if c.eat("y") {
                PatternName::Hy
            } else {
                let hue = c.hue().ok_or_else(err)?;
                let xi = c.xi().ok_or_else(err)?;
                if c.done() && hue == Hue::R {
                    PatternName::Hr { xi }
                } else {
                    PatternName::Horizontal { hue, xi, pi: c.pi().ok_or_else(err)? }
                }
            }
        } else if c.eat("J") {
            let hue = c.hue().ok_or_else(err)?;
            PatternName::Join { hue, pi: c.pi().ok_or_else(err)? }
        } else if c.eat("S") {
            let digit = c.s.chars().next().and_then(|d| d.to_digit(10)).ok_or_else(err)?;
            if digit > 4 {
                return Err(err());
            }
            c.s = &c.s[1..];
            let nu = if c.eat("b") {
                Nu::B
            } else if c.eat("w") {
                Nu::W
            } else {
                return Err(err());
            };
            let kappa = if c.eat("s") {
                Kappa::S
            } else if c.eat("c") {
                Kappa::C
            } else if c.eat("f") {
                Kappa::F
            } else {
                return Err(err());
            };
            PatternName::Scent { omega: digit as u8, nu, kappa }
        } else if c.eat("T") {
            let sigma = [
                ("bi", Sigma::Bi),
                ("hu", Sigma::Hu),
                ("hc", Sigma::Hc),
                ("i", Sigma::I),
                ("b", Sigma::B),
                ("s", Sigma::S),
                ("t", Sigma::T),
                ("m", Sigma::M),
                ("e", Sigma::E),
                ("c", Sigma::C),
                ("u", Sigma::U),
                ("d", Sigma::D),
            ]
            .into_iter()
            .find(|(lit, _)| c.eat(lit))
            .map(|(_, s)| s)
            .ok_or_else(err)?;
            let mut xi = Vec::new();
            while let Some(x) = c.xi() {
                xi.push(x);
            }
            if xi.len() > 2 {
                return Err(err());
            }
            PatternName::Compute { sigma, xi }
        } else if c.eat("W") {
            PatternName::W
        } else if c.eat("Z") {
            PatternName::Z
        } else if c.eat("p") {
            PatternName::P
        } else {
            return Err(err());
        };
        if c.done() {
            Ok(parsed)
        } else {
            Err(err())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for s in [
            "Lbnphiur", "Lrtll", "Bb0t", "Vrphi", "Mbntl", "Cb0phir", "Hrl", "Hrr", "Hg", "Hy", "Hblu", "Hrrl",
            "Jbu", "Jrl", "S0bf", "S3wc", "Ti", "Tbi", "Tblr", "Thul", "Tt", "W", "Z", "p",
        ] {
            let p: PatternName = s.parse().unwrap();
            assert_eq!(p.to_string(), s);
        }
    }

    #[test]
    fn blue_aliases_in_horizontal_names() {
        let a: PatternName = "Hbnlu".parse().unwrap();
        let b: PatternName = "Hb0lu".parse().unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "Hblu");
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "Q", "Lbn", "Bx", "S5bf", "Tq", "Hbl", "Zz"] {
            assert!(s.parse::<PatternName>().is_err(), "{s}");
        }
    }
}
