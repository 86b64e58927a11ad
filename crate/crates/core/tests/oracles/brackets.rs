//! Letter-level oracle for the bracket rows: rows are produced by the
//! cancellation process (rewrite `R`/`B` as blanks, relabel the surviving `M`s
//! cyclically as `R M B M`) and every derived notion is recovered by linear
//! scans of the letters, never from closed-form arithmetic.

#![allow(dead_code)]

use std::collections::BTreeMap;

use interwoven::brackets::Letter;

/// Rows produced by cancellation over `[lo, hi)`; `rows[k][p - lo]`.
pub struct OracleRows {
    pub lo: i64,
    pub hi: i64,
    pub rows: Vec<Vec<Letter>>,
}

impl OracleRows {
    /// `phase` is the position (mod 4) of an `R` on row 0; for each later
    /// generation, bit 0 turns the `M` right after the reference `R` of the
    /// previous row into an `R`, bit 1 turns it into a `B`.
    pub fn cancel(phase: u8, bits: &[bool], lo: i64, hi: i64) -> OracleRows {
        let width = (hi - lo) as usize;
        let mut row0 = vec![Letter::Blank; width];
        for (i, slot) in row0.iter_mut().enumerate() {
            let p = lo + i as i64;
            *slot = match (p - i64::from(phase)).rem_euclid(4) {
                0 => Letter::R,
                1 | 3 => Letter::M,
                _ => Letter::B,
            };
        }
        // Reference R: the R of row 0 at position `phase` itself.
        let mut reference = (i64::from(phase) - lo) as usize;
        assert!(lo <= i64::from(phase) && i64::from(phase) < hi, "window must contain 0..4");
        let mut rows = vec![row0];
        for &bit in bits {
            let prev = rows.last().expect("row 0 exists");
            let ms: Vec<usize> = (0..width).filter(|&i| prev[i] == Letter::M).collect();
            // Index (in `ms`) of the M right after the reference R.
            let start = ms.iter().position(|&i| i > reference).expect("an M follows the reference");
            let mut next = vec![Letter::Blank; width];
            let shift = if bit { 2 } else { 0 };
            for (j, &i) in ms.iter().enumerate() {
                let k = (j as i64 - start as i64 + shift).rem_euclid(4);
                next[i] = match k {
                    0 => Letter::R,
                    2 => Letter::B,
                    _ => Letter::M,
                };
            }
            reference = ms[start + if bit { 2 } else { 0 }];
            rows.push(next);
        }
        OracleRows { lo, hi, rows }
    }

    pub fn letter(&self, k: usize, p: i64) -> Letter {
        self.rows[k][(p - self.lo) as usize]
    }

    fn letters(&self, k: usize) -> Vec<(i64, Letter)> {
        self.rows[k]
            .iter()
            .enumerate()
            .filter(|(_, l)| **l != Letter::Blank)
            .map(|(i, &l)| (self.lo + i as i64, l))
            .collect()
    }

    /// Active (`R..B`) intervals of row `k`, fully inside the window, as
    /// `(left, mid, right)` from a scan of delimiters.
    pub fn actives(&self, k: usize) -> Vec<(i64, i64, i64)> {
        self.delimited(k, Letter::R, Letter::B)
    }

    /// Silent (`B..R`) intervals of row `k`, fully inside the window.
    pub fn silents(&self, k: usize) -> Vec<(i64, i64, i64)> {
        self.delimited(k, Letter::B, Letter::R)
    }

    fn delimited(&self, k: usize, open: Letter, close: Letter) -> Vec<(i64, i64, i64)> {
        let ls = self.letters(k);
        let mut out = Vec::new();
        for (i, &(p, l)) in ls.iter().enumerate() {
            if l != open {
                continue;
            }
            let mut mid = None;
            for &(q, m) in &ls[i + 1..] {
                match m {
                    Letter::M => mid = Some(q),
                    x if x == close => {
                        out.push((p, mid.expect("an M between delimiters"), q));
                        break;
                    }
                    _ => break,
                }
            }
        }
        out
    }

    /// Whether `p` lies in a closed active interval of row `k` (scan outwards).
    pub fn covered(&self, k: usize, p: i64) -> bool {
        let mut q = p;
        while q >= self.lo {
            match self.letter(k, q) {
                Letter::R => return true,
                Letter::B => return q == p,
                _ => q -= 1,
            }
        }
        false
    }

    /// Free positions inside the active interval `(left, right)` of row `g`:
    /// superpose the earlier rows of the same parity and keep the positions
    /// that no earlier same-colour active interval covers.
    pub fn free_positions(&self, g: usize, left: i64, right: i64) -> Vec<i64> {
        (left + 1..right)
            .filter(|&p| !(0..g).filter(|j| j % 2 == g % 2).any(|j| self.covered(j, p)))
            .collect()
    }

    /// All silent intervals of rows `0..=g_max` grouped by mid-point.
    pub fn silent_groups(&self, g_max: usize, lo: i64, hi: i64) -> BTreeMap<i64, Vec<(usize, i64, i64)>> {
        let mut out: BTreeMap<i64, Vec<(usize, i64, i64)>> = BTreeMap::new();
        for k in 0..=g_max {
            for (l, m, r) in self.silents(k) {
                if r >= lo && l <= hi {
                    out.entry(m).or_default().push((k, l, r));
                }
            }
        }
        out
    }
}
