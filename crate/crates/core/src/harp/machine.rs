//! Turing machines: a plain-text transition table and its validation.
//!
//! The text format has one directive or transition per line; `#` starts a
//! comment:
//!
//! ```text
//! initial A
//! halting H
//! blank 0
//! A 0 -> B 1 R
//! ```
//!
//! Moves are `L`, `R` or `S` (stay). Stay-moves parse but never validate:
//! every instruction of an embedded machine must move the head.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Head move of an instruction.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Move {
    Left,
    Right,
    Stay,
}

impl Move {
    /// `-1`, `+1` or `0`.
    pub fn delta(self) -> i64 {
        match self {
            Move::Left => -1,
            Move::Right => 1,
            Move::Stay => 0,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Move::Left => "L",
            Move::Right => "R",
            Move::Stay => "S",
        })
    }
}

/// Right-hand side of a transition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Action {
    pub state: String,
    pub write: String,
    pub direction: Move,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MachineError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("instruction ({state}, {symbol}) does not move the head")]
    StayMove { state: String, symbol: String },
    #[error("no instruction for ({state}, {symbol})")]
    MissingTransition { state: String, symbol: String },
    #[error("no initial state")]
    NoInitialState,
    #[error("halting state {0} has an instruction")]
    HaltingTransition(String),
}

/// A transition table, possibly invalid.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TuringMachine {
    pub initial: Option<String>,
    pub halting: BTreeSet<String>,
    pub blank: String,
    pub transitions: BTreeMap<(String, String), Action>,
}

impl TuringMachine {
    /// All states: initial, halting, sources and targets.
    pub fn states(&self) -> BTreeSet<String> {
        let mut s: BTreeSet<String> = self.halting.clone();
        s.extend(self.initial.clone());
        for ((q, _), a) in &self.transitions {
            s.insert(q.clone());
            s.insert(a.state.clone());
        }
        s
    }

    /// Blank plus every symbol read or written.
    pub fn alphabet(&self) -> BTreeSet<String> {
        let mut s = BTreeSet::from([self.blank.clone()]);
        for ((_, a), act) in &self.transitions {
            s.insert(a.clone());
            s.insert(act.write.clone());
        }
        s
    }

    /// Checks, in this order: an initial state exists, no instruction
    /// stays, halting states have no instruction, and the table is total
    /// on the non-halting states.
    pub fn validate(self) -> Result<ValidMachine, MachineError> {
        if self.initial.is_none() {
            return Err(MachineError::NoInitialState);
        }
        if let Some(((q, a), _)) = self.transitions.iter().find(|(_, act)| act.direction == Move::Stay) {
            return Err(MachineError::StayMove { state: q.clone(), symbol: a.clone() });
        }
        if let Some((q, _)) = self.transitions.keys().find(|(q, _)| self.halting.contains(q)) {
            return Err(MachineError::HaltingTransition(q.clone()));
        }
        let alphabet = self.alphabet();
        for q in self.states().iter().filter(|q| !self.halting.contains(*q)) {
            for a in &alphabet {
                if !self.transitions.contains_key(&(q.clone(), a.clone())) {
                    return Err(MachineError::MissingTransition { state: q.clone(), symbol: a.clone() });
                }
            }
        }
        Ok(ValidMachine(self))
    }
}

impl FromStr for TuringMachine {
    type Err = MachineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut tm = TuringMachine { blank: "_".into(), ..Default::default() };
        for (i, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: &str| MachineError::Parse { line: i + 1, message: message.into() };
            let words: Vec<&str> = line.split_whitespace().collect();
            match words.as_slice() {
                ["initial", q] => tm.initial = Some((*q).into()),
                ["halting", qs @ ..] if !qs.is_empty() => tm.halting.extend(qs.iter().map(|q| q.to_string())),
                ["blank", b] => tm.blank = (*b).into(),
                [q, a, "->", q2, b, m] => {
                    let direction = match *m {
                        "L" => Move::Left,
                        "R" => Move::Right,
                        "S" | "N" => Move::Stay,
                        _ => return Err(err("move must be L, R or S")),
                    };
                    let key = ((*q).to_string(), (*a).to_string());
                    let action = Action { state: (*q2).into(), write: (*b).into(), direction };
                    if tm.transitions.insert(key, action).is_some() {
                        return Err(err("duplicate instruction"));
                    }
                }
                _ => return Err(err("expected `initial q`, `halting q…`, `blank a` or `q a -> q' b M`")),
            }
        }
        Ok(tm)
    }
}

impl fmt::Display for TuringMachine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = &self.initial {
            writeln!(f, "initial {q}")?;
        }
        if !self.halting.is_empty() {
            writeln!(f, "halting {}", self.halting.iter().cloned().collect::<Vec<_>>().join(" "))?;
        }
        writeln!(f, "blank {}", self.blank)?;
        for ((q, a), act) in &self.transitions {
            writeln!(f, "{q} {a} -> {} {} {}", act.state, act.write, act.direction)?;
        }
        Ok(())
    }
}

/// A machine that passed [`TuringMachine::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidMachine(TuringMachine);

impl ValidMachine {
    pub fn machine(&self) -> &TuringMachine {
        &self.0
    }

    pub fn initial(&self) -> &str {
        self.0.initial.as_deref().expect("validated")
    }

    pub fn blank(&self) -> &str {
        &self.0.blank
    }

    pub fn is_halting(&self, state: &str) -> bool {
        self.0.halting.contains(state)
    }

    /// The instruction for a non-halting state and a symbol.
    pub fn action(&self, state: &str, symbol: &str) -> &Action {
        self.0.transitions.get(&(state.to_string(), symbol.to_string())).expect("validated table is total")
    }
}

/// The single-state right-mover: it writes blanks and moves right forever.
pub const RIGHT_MOVER: &str = include_str!("../../machines/right_mover.tm");

/// A three-state machine that halts after a few bounces.
pub const HALTING_THREE_STATE: &str = include_str!("../../machines/halting_three_state.tm");
