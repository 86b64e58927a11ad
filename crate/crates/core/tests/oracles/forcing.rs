//! Forcing oracle: every restriction of every single-axis scene (all
//! phases, all choices up to generation 3) to an `n × n` window, grouped by
//! the tiles on the window's frame. The construction, not the tiler's
//! search, decides what a restriction is.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use interwoven::brackets::{PhaseChoices, Window};
use interwoven::tile_algebra::Prototile;
use interwoven::tiler::{realize, Cell, TileGrid};
use interwoven::trilaterals::{build_scene, Axis, Scene, SceneWindow, BAND_ABOVE, BAND_BELOW};

/// Tiles of a window in row-major order (tiling rows), as indices.
pub type Key = Vec<u16>;

pub struct Restrictions {
    pub n: i64,
    pub tiles: Vec<Prototile>,
    index: HashMap<Prototile, u16>,
    /// Frame → the restrictions having it.
    pub by_frame: BTreeMap<Key, BTreeSet<Key>>,
}

impl Restrictions {
    fn id(&mut self, t: &Prototile) -> u16 {
        if let Some(&i) = self.index.get(t) {
            return i;
        }
        let i = self.tiles.len() as u16;
        self.tiles.push(t.clone());
        self.index.insert(t.clone(), i);
        i
    }

    /// Tiling rows `2n − 1` by `n` columns.
    pub fn shape(&self) -> (usize, usize) {
        ((2 * self.n - 1) as usize, self.n as usize)
    }

    pub fn is_frame(&self, r: usize, c: usize) -> bool {
        let (rows, cols) = self.shape();
        r == 0 || r == rows - 1 || c == 0 || c == cols - 1
    }

    pub fn frame_of(&self, key: &Key) -> Key {
        let (_, cols) = self.shape();
        key.iter().enumerate().filter(|(i, _)| self.is_frame(i / cols, i % cols)).map(|(_, t)| *t).collect()
    }

    /// A grid on `[0, n) × [0, n)` holding the frame of `key`.
    pub fn seed(&self, key: &Key) -> TileGrid {
        let (_, cols) = self.shape();
        let mut g = TileGrid::new(Window::new(0, self.n), Window::new(0, self.n));
        for (i, t) in key.iter().enumerate() {
            let (r, c) = (i / cols, i % cols);
            if self.is_frame(r, c) {
                g.set(Cell::new(r as i64, c as i64), self.tiles[*t as usize].clone()).expect("seed cell");
            }
        }
        g
    }

    /// Key of a complete grid on `[0, n) × [0, n)`, `None` when it uses a
    /// tile no scene uses.
    pub fn key_of(&self, g: &TileGrid) -> Option<Key> {
        g.positions().map(|c| g.get(c).and_then(|t| self.index.get(t).copied())).collect()
    }
}

/// All restrictions to `n × n` windows, columns within `reach` of the axis.
pub fn restrictions(n: i64, reach: i64) -> Restrictions {
    let mut out = Restrictions { n, tiles: Vec::new(), index: HashMap::new(), by_frame: BTreeMap::new() };
    let mut all: HashSet<Key> = HashSet::new();
    for g in 0..=3u32 {
        for phase in 0..4u8 {
            for bits in 0..(1u32 << g) {
                let ch = PhaseChoices::new(phase, (0..g).map(|i| bits >> i & 1 == 1).collect());
                let apex = Scene::apex_of(&ch);
                let rows = Window::new(apex - BAND_ABOVE, apex + BAND_BELOW);
                let cols = Window::new(-reach, reach);
                let scene = build_scene(&[Axis::full(0)], &ch, g, SceneWindow::new(rows, cols)).expect("scene");
                let grid = realize(&scene).expect("realisable");
                let width = cols.width() as usize;
                let dense: Vec<u16> = grid.positions().map(|c| out.id(grid.get(c).expect("complete"))).collect();
                let (tr, tc) = out.shape();
                let total_rows = (2 * rows.width() - 1) as usize;
                // Windows start on active rows.
                for r0 in (0..=total_rows - tr).step_by(2) {
                    for c0 in 0..=width - tc {
                        let mut key = Vec::with_capacity(tr * tc);
                        for r in r0..r0 + tr {
                            key.extend_from_slice(&dense[r * width + c0..r * width + c0 + tc]);
                        }
                        all.insert(key);
                    }
                }
            }
        }
    }
    for k in all {
        let f = out.frame_of(&k);
        out.by_frame.entry(f).or_default().insert(k);
    }
    out
}
