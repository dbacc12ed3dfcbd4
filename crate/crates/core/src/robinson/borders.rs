//! Border detection, free rows/columns and obstruction checks on arbitrary
//! configurations over a Robinson tile set.

use crate::error::{Error, Result};
use crate::wang::Configuration;

use super::geometry::{Colour, Side};
use super::tiles::{CrossOrientation, Layer, RobinsonTileSet, TileClass};

/// A red square ring located in a configuration. `corner` is the bottom-left
/// ring cell; `side` is the interior side length `4^n - 1`, so the ring
/// spans `side + 2` cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BorderRecord {
    pub n: u32,
    pub corner: (usize, usize),
    pub side: usize,
    pub complete: bool,
}

impl BorderRecord {
    /// Distance between opposite ring corners.
    pub fn span(&self) -> usize {
        self.side + 1
    }

    /// Whether `(x, y)` lies on the ring or inside it.
    pub fn contains(&self, x: usize, y: usize) -> bool {
        let (cx, cy) = self.corner;
        x >= cx && x <= cx + self.span() && y >= cy && y <= cy + self.span()
    }

    /// Whether `(x, y)` lies strictly inside the ring.
    pub fn interior_contains(&self, x: usize, y: usize) -> bool {
        let (cx, cy) = self.corner;
        x > cx && x < cx + self.span() && y > cy && y < cy + self.span()
    }

    pub fn on_ring(&self, x: usize, y: usize) -> bool {
        self.contains(x, y) && !self.interior_contains(x, y)
    }

    /// Ring cells in counter-clockwise order starting at the corner.
    pub fn ring_cells(&self) -> Vec<(usize, usize)> {
        let (cx, cy) = self.corner;
        let s = self.span();
        let mut out = Vec::with_capacity(4 * s);
        out.extend((0..s).map(|i| (cx + i, cy)));
        out.extend((0..s).map(|j| (cx + s, cy + j)));
        out.extend((0..s).map(|i| (cx + s - i, cy + s)));
        out.extend((0..s).map(|j| (cx, cy + s - j)));
        out
    }
}

fn is_red_cross(class: &TileClass, o: CrossOrientation) -> bool {
    class.cross == Some(o) && class.cross_colour == Some(Colour::Red)
}

/// Powers of four: returns `n` when `s == 4^n` with `n >= 1`.
fn level_of_span(s: usize) -> Option<u32> {
    if s >= 4 && s.is_power_of_two() && s.trailing_zeros() % 2 == 0 {
        Some(s.trailing_zeros() / 2)
    } else {
        None
    }
}

/// Every red ring whose bottom side runs from a red up-right cross to a red
/// up-left cross at distance `4^n` and whose ring fits in the window. Records
/// are `complete` when all four sides and corners carry the expected tiles.
pub fn find_all_borders(ts: &RobinsonTileSet, c: &Configuration) -> Vec<BorderRecord> {
    find_in_region(ts, c, (0, 0), (c.width(), c.height()))
}

/// Complete borders only.
pub fn find_borders(ts: &RobinsonTileSet, c: &Configuration) -> Vec<BorderRecord> {
    find_all_borders(ts, c).into_iter().filter(|b| b.complete).collect()
}

/// Borders with their corner cross inside `[lo, hi)` (the ring may extend
/// beyond `hi` but must fit in the configuration).
fn find_in_region(
    ts: &RobinsonTileSet,
    c: &Configuration,
    lo: (usize, usize),
    hi: (usize, usize),
) -> Vec<BorderRecord> {
    let (w, h) = (c.width(), c.height());
    let class = |x: usize, y: usize| ts.class(c.get(x, y));
    let mut out = Vec::new();
    for y in lo.1..hi.1.min(h) {
        for x in lo.0..hi.0.min(w) {
            if !is_red_cross(class(x, y), CrossOrientation::UR) {
                continue;
            }
            let mut s = 1;
            while x + s < w && class(x + s, y).red_side_through(Side::Bottom) {
                s += 1;
            }
            if x + s >= w || y + s >= h || !is_red_cross(class(x + s, y), CrossOrientation::UL) {
                continue;
            }
            let Some(n) = level_of_span(s) else { continue };
            let complete = (1..s).all(|j| class(x + s, y + j).red_side_through(Side::Right))
                && is_red_cross(class(x + s, y + s), CrossOrientation::DL)
                && (1..s).all(|i| class(x + i, y + s).red_side_through(Side::Top))
                && is_red_cross(class(x, y + s), CrossOrientation::DR)
                && (1..s).all(|j| class(x, y + j).red_side_through(Side::Left));
            out.push(BorderRecord {
                n,
                corner: (x, y),
                side: s - 1,
                complete,
            });
        }
    }
    out
}

/// Complete borders strictly inside `b` (smaller levels only).
pub fn inner_borders(ts: &RobinsonTileSet, c: &Configuration, b: &BorderRecord) -> Vec<BorderRecord> {
    let (cx, cy) = b.corner;
    let s = b.span();
    find_in_region(ts, c, (cx + 1, cy + 1), (cx + s, cy + s))
        .into_iter()
        .filter(|r| r.complete && r.n < b.n && b.interior_contains(r.corner.0, r.corner.1))
        .filter(|r| {
            let far = r.span();
            r.corner.0 + far < cx + s && r.corner.1 + far < cy + s
        })
        .collect()
}

/// Rows and columns of a border's interior that cross no smaller border.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeCellMap {
    pub border: BorderRecord,
    pub free_rows: Vec<usize>,
    pub free_cols: Vec<usize>,
}

impl FreeCellMap {
    /// Free cells row by row (bottom row first), `(x, y)` window coordinates.
    pub fn free_cells(&self) -> Vec<Vec<(usize, usize)>> {
        self.free_rows
            .iter()
            .map(|&y| self.free_cols.iter().map(|&x| (x, y)).collect())
            .collect()
    }

    pub fn is_free(&self, x: usize, y: usize) -> bool {
        self.free_rows.binary_search(&y).is_ok() && self.free_cols.binary_search(&x).is_ok()
    }

    pub fn dim(&self) -> usize {
        self.free_rows.len()
    }
}

pub fn free_cells(ts: &RobinsonTileSet, c: &Configuration, b: &BorderRecord) -> Result<FreeCellMap> {
    let inner = inner_borders(ts, c, b);
    let (cx, cy) = b.corner;
    let s = b.span();
    let mut row_blocked = vec![false; s + 1];
    let mut col_blocked = vec![false; s + 1];
    for r in &inner {
        for k in 0..=r.span() {
            row_blocked[r.corner.1 + k - cy] = true;
            col_blocked[r.corner.0 + k - cx] = true;
        }
    }
    let free_rows: Vec<usize> = (1..s).filter(|&k| !row_blocked[k]).map(|k| cy + k).collect();
    let free_cols: Vec<usize> = (1..s).filter(|&k| !col_blocked[k]).map(|k| cx + k).collect();
    let want = (1usize << b.n) + 1;
    if free_rows.len() != want || free_cols.len() != want {
        return Err(Error::Analysis {
            x: cx as i64,
            y: cy as i64,
            msg: format!(
                "{}-border interior has {} free rows and {} free columns, expected {want}",
                b.n,
                free_rows.len(),
                free_cols.len()
            ),
        });
    }
    Ok(FreeCellMap {
        border: *b,
        free_rows,
        free_cols,
    })
}

/// Checks the obstruction layer inside `b`: outside the smaller squares a
/// cell carries no signal iff it is free, only horizontal signals iff its
/// column is free and its row is not, only vertical signals iff its row is
/// free and its column is not. Signals must also run straight through.
pub fn check_obstruction(ts: &RobinsonTileSet, c: &Configuration, b: &BorderRecord) -> bool {
    if !ts.has_layer(Layer::Obstruction) {
        return false;
    }
    let Ok(map) = free_cells(ts, c, b) else {
        return false;
    };
    let inner = inner_borders(ts, c, b);
    let (cx, cy) = b.corner;
    let s = b.span();
    for y in cy + 1..cy + s {
        let row_free = map.free_rows.binary_search(&y).is_ok();
        for x in cx + 1..cx + s {
            if inner.iter().any(|r| r.contains(x, y)) {
                continue;
            }
            let col_free = map.free_cols.binary_search(&x).is_ok();
            let class = ts.class(c.get(x, y));
            if class.h_signal[0] != class.h_signal[1] || class.v_signal[0] != class.v_signal[1] {
                return false;
            }
            if class.has_h_signal() == row_free || class.has_v_signal() == col_free {
                return false;
            }
        }
    }
    true
}
