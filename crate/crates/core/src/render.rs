//! Deterministic SVG figures of scenes, tile grids and bracket models.
//!
//! Every coordinate is an integer: a lattice cell is [`UNIT`] pixels wide,
//! an even number, so the half-cell shift of passive tiling rows stays on
//! the pixel grid. Triangles have thick legs and phantoms thin ones; blue-0
//! figures are dark blue, other blue figures light blue and red figures red.

use std::fmt::Write;

use crate::brackets::{BracketModel, Colour, IntervalKind};
use crate::tile_algebra::{PatternName, Prototile};
use crate::tiler::{Cell, TileGrid};
use crate::trilaterals::{Scene, SceneWindow, Status, TriColour, Trilateral};

/// Pixels per lattice cell.
pub const UNIT: i64 = 10;

/// What to draw besides the figures.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct RenderOptions {
    /// Overlay the horizontal signals of the scene cells.
    pub signals: bool,
}

fn colour(c: TriColour) -> &'static str {
    match c {
        TriColour::Blue0 => "#1f3f8f",
        TriColour::Blue => "#4f8fdf",
        TriColour::Red => "#c8302c",
    }
}

fn open(s: &mut String, width: i64, height: i64) {
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(s, r#"<rect width="{width}" height="{height}" fill="white"/>"#);
}

/// Trilaterals of a window as outlined isosceles triangles, clipped to the
/// window, with the scene's signals when given and requested.
pub fn render_figures(figures: &[Trilateral], window: SceneWindow, scene: Option<&Scene>, opts: RenderOptions) -> String {
    let (w, h) = (window.columns.width().max(0) * UNIT, window.rows.width().max(0) * UNIT);
    let centre = |row: i64, col: i64| ((col - window.columns.lo) * UNIT + UNIT / 2, (row - window.rows.lo) * UNIT + UNIT / 2);
    let mut s = String::new();
    open(&mut s, w, h);
    let _ = writeln!(s, r#"<clipPath id="window"><rect width="{w}" height="{h}"/></clipPath>"#);
    let _ = writeln!(s, r#"<g clip-path="url(#window)" fill="none" stroke-linejoin="round">"#);
    if let (Some(scene), true) = (scene, opts.signals) {
        for ((row, col), t) in scene.cells() {
            let (x, y) = centre(row, col);
            let (x0, y0) = (x - UNIT / 2, y - UNIT / 2);
            for (fill, name) in [("#f2d22e", PatternName::Hy), ("#3fa34d", PatternName::Hg)] {
                if t.contains(&name) {
                    let _ = writeln!(s, r#"<rect x="{x0}" y="{}" width="{UNIT}" height="2" fill="{fill}"/>"#, y - 1);
                }
            }
            if t.atoms().any(|(n, _)| matches!(n, PatternName::Hr { .. })) {
                let _ = writeln!(s, r##"<rect x="{x0}" y="{}" width="{UNIT}" height="1" fill="#e88"/>"##, y0 + 2);
            }
            if t.atoms().any(|(n, _)| matches!(n, PatternName::Join { .. })) {
                let _ = writeln!(s, r#"<circle cx="{x}" cy="{y}" r="2" fill="black"/>"#);
            }
        }
    }
    for t in figures {
        let (vx, vy) = centre(t.vertex_row, t.axis);
        let (lx, by) = centre(t.basis_row, t.axis - t.half_width);
        let (rx, _) = centre(t.basis_row, t.axis + t.half_width);
        let width = if t.status == Status::Triangle { 3 } else { 1 };
        let _ = writeln!(
            s,
            r#"<polygon points="{vx},{vy} {rx},{by} {lx},{by}" stroke="{}" stroke-width="{width}"/>"#,
            colour(t.colour)
        );
    }
    s.push_str("</g>\n</svg>\n");
    s
}

/// A scene's trilaterals, with its signals on request.
pub fn render_scene(scene: &Scene, opts: RenderOptions) -> String {
    render_figures(&scene.trilaterals, scene.window, Some(scene), opts)
}

fn tile_fill(t: &Prototile) -> &'static str {
    let has = |f: fn(&PatternName) -> bool| t.atoms().any(|(n, _)| f(n));
    if has(|n| matches!(n, PatternName::Vertex { .. } | PatternName::Corner { .. } | PatternName::Mid { .. })) {
        "#555"
    } else if has(|n| matches!(n, PatternName::Leg { .. })) {
        "#999"
    } else if has(|n| matches!(n, PatternName::Basis { .. })) {
        "#bbb"
    } else if has(|n| !matches!(n, PatternName::Z | PatternName::P)) {
        "#ddd"
    } else {
        "#f6f6f6"
    }
}

/// A tile grid in brick layout: passive rows are half as high and shifted
/// right by half a cell. Each tile carries its text as a tooltip.
pub fn render_grid(grid: &TileGrid) -> String {
    let rows = grid.tiling_rows();
    let n_rows = (rows.end() - rows.start() + 1).max(0);
    let (w, h) = ((grid.columns.width() + 1) * UNIT, n_rows * UNIT / 2 + UNIT / 2);
    let mut s = String::new();
    open(&mut s, w, h);
    for r in rows.clone() {
        for c in grid.columns.lo..grid.columns.hi {
            let cell = Cell::new(r, c);
            let Some(t) = grid.get(cell) else { continue };
            let x = (c - grid.columns.lo) * UNIT + if cell.is_passive() { UNIT / 2 } else { 0 };
            let y = (r - rows.start()) * UNIT / 2;
            let _ = writeln!(
                s,
                r##"<rect x="{x}" y="{y}" width="{UNIT}" height="{}" fill="{}" stroke="#fff"><title>{t}</title></rect>"##,
                UNIT / 2,
                tile_fill(t)
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

/// Letters of a bracket model, one line per generation, with its active
/// (thick) and silent (thin) intervals drawn under each line.
pub fn render_brackets(model: &BracketModel) -> String {
    let win = model.window();
    let gens = model.max_generation() as i64 + 1;
    let line = 3 * UNIT;
    let (w, h) = (win.width() * UNIT, gens * line);
    let mut s = String::new();
    open(&mut s, w, h);
    for k in 0..gens {
        let y = k * line + UNIT;
        let text: String = model.row(k as u32).iter().map(|(_, l)| l.as_char()).collect();
        let _ = writeln!(
            s,
            r#"<text x="0" y="{y}" font-family="monospace" font-size="{UNIT}" textLength="{w}">{text}</text>"#
        );
        for iv in model.intervals_of(k as u32).unwrap_or_default() {
            let stroke = match (iv.colour, k) {
                (Colour::Blue, 0) => colour(TriColour::Blue0),
                (Colour::Blue, _) => colour(TriColour::Blue),
                (Colour::Red, _) => colour(TriColour::Red),
            };
            let width = if iv.kind == IntervalKind::Active { 3 } else { 1 };
            let yy = y + UNIT / 2 + if iv.kind == IntervalKind::Active { 0 } else { UNIT / 2 };
            let x1 = (iv.left.max(win.lo) - win.lo) * UNIT;
            let x2 = (iv.right.min(win.hi - 1) - win.lo + 1) * UNIT;
            let _ = writeln!(s, r#"<line x1="{x1}" y1="{yy}" x2="{x2}" y2="{yy}" stroke="{stroke}" stroke-width="{width}"/>"#);
        }
    }
    s.push_str("</svg>\n");
    s
}
