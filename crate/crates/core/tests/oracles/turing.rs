//! A plain Turing simulator on a hash-map tape, and the number of free rows
//! an embedded run needs, computed from the plain run alone.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use interwoven::harp::{Move, TuringMachine};

/// One executed instruction of a plain run.
#[derive(Clone, Debug)]
pub struct PlainStep {
    pub position: i64,
    pub direction: i64,
    pub halts: bool,
}

/// A plain run of at most `limit` instructions from a blank tape, with the
/// tape (blanks omitted) after each prefix.
pub struct PlainRun {
    pub steps: Vec<PlainStep>,
    pub tapes: Vec<BTreeMap<i64, String>>,
    /// The initial state is halting.
    pub halted_at_start: bool,
}

pub fn plain_run(tm: &TuringMachine, limit: usize) -> PlainRun {
    let mut tape: HashMap<i64, String> = HashMap::new();
    let snapshot = |t: &HashMap<i64, String>| -> BTreeMap<i64, String> {
        t.iter().filter(|(_, s)| **s != tm.blank).map(|(p, s)| (*p, s.clone())).collect()
    };
    let mut state = tm.initial.clone().expect("initial state");
    let mut head = 0i64;
    let mut out = PlainRun { steps: vec![], tapes: vec![snapshot(&tape)], halted_at_start: tm.halting.contains(&state) };
    if out.halted_at_start {
        return out;
    }
    while out.steps.len() < limit {
        let read = tape.get(&head).cloned().unwrap_or_else(|| tm.blank.clone());
        let act = &tm.transitions[&(state.clone(), read)];
        tape.insert(head, act.write.clone());
        let direction = match act.direction {
            Move::Left => -1,
            Move::Right => 1,
            Move::Stay => panic!("stay move"),
        };
        let halts = tm.halting.contains(&act.state);
        out.steps.push(PlainStep { position: head, direction, halts });
        out.tapes.push(snapshot(&tape));
        if halts {
            break;
        }
        head += direction;
        state = act.state.clone();
    }
    out
}

/// Level (0 = vertex, `j` = `j`-th free row) at which each instruction of
/// the run executes inside a triangle: the head leaves a row after a turn
/// or after an instruction on a leg, the legs of level `j` being squares
/// `±j`.
pub fn levels(run: &PlainRun) -> Vec<usize> {
    let mut out = Vec::with_capacity(run.steps.len());
    let mut level = 0usize;
    for i in 0..run.steps.len() {
        if i > 0 {
            let prev = &run.steps[i - 1];
            let turned = i >= 2 && run.steps[i - 2].direction != prev.direction;
            let on_leg = prev.position.unsigned_abs() as usize == level;
            if turned || on_leg {
                level += 1;
            }
        }
        out.push(level);
    }
    out
}
