//! Closed-form description of the canonical Robinson hierarchy.
//!
//! Window cell `(x, y)` under phase `(dx, dy)` sits at canonical position
//! `u = x + dx + ORIGIN`, `v = y + dy + ORIGIN`. A line of level `k` lives on
//! rows (columns) with exactly `k - 1` trailing zeros; its square sides run
//! over `[half, 3 * half]` modulo `4 * half` with `half = 2^(k-1)`. Squares of
//! level `k` therefore have corners `2^k` apart and repeat with period
//! `2^(k+1)`. Even levels are red, odd levels green; the red square of level
//! `2n` is the n-border.

pub const ORIGIN: i64 = (1 << 40) + 1;

/// Largest phase component accepted; keeps every canonical coordinate well
/// inside the range where the level-40 square is the outermost one needed.
pub const MAX_PHASE: i64 = 1 << 36;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Colour {
    Red,
    Green,
}

/// Which side of its square a line segment forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Bottom,
    Top,
    Left,
    Right,
}

impl Side {
    /// Glyph pointing from the side into its square.
    pub fn glyph(self) -> char {
        match self {
            Side::Bottom => '^',
            Side::Top => 'v',
            Side::Left => '>',
            Side::Right => '<',
        }
    }

    pub fn from_glyph(c: char) -> Option<Side> {
        match c {
            '^' => Some(Side::Bottom),
            'v' => Some(Side::Top),
            '>' => Some(Side::Left),
            '<' => Some(Side::Right),
            _ => None,
        }
    }
}

pub fn colour_of(level: u32) -> Colour {
    if level % 2 == 0 {
        Colour::Red
    } else {
        Colour::Green
    }
}

/// Level of the line running along canonical row (or column) `w`.
#[inline]
pub fn line_level(w: i64) -> u32 {
    w.trailing_zeros() + 1
}

#[inline]
fn half(level: u32) -> i64 {
    1i64 << (level - 1)
}

/// Side formed by the line on row `v` (horizontal: bottom/top).
pub fn row_side(v: i64) -> Side {
    let h = half(line_level(v));
    if v.rem_euclid(4 * h) == h {
        Side::Bottom
    } else {
        Side::Top
    }
}

/// Side formed by the line on column `u` (vertical: left/right).
pub fn col_side(u: i64) -> Side {
    let h = half(line_level(u));
    if u.rem_euclid(4 * h) == h {
        Side::Left
    } else {
        Side::Right
    }
}

/// Whether the unit edge between positions `a` and `a + 1`, lying on the
/// line whose own coordinate is `w`, belongs to a square side.
#[inline]
pub fn edge_on_side(w: i64, a: i64) -> bool {
    let h = half(line_level(w));
    (a - h).rem_euclid(4 * h) < 2 * h
}

/// Whether position `a` lies on a square side of the line at `w` (inclusive
/// of the corners).
#[inline]
pub fn cell_on_side(w: i64, a: i64) -> bool {
    let h = half(line_level(w));
    (a - h).rem_euclid(4 * h) <= 2 * h
}

/// Whether `a` is strictly inside the span of a level-`k` square.
#[inline]
pub fn strictly_inside(level: u32, a: i64) -> bool {
    let h = half(level);
    let r = (a - h).rem_euclid(4 * h);
    r >= 1 && r < 2 * h
}

/// Whether `a` is within the closed span (ring included) of a level-`k`
/// square.
#[inline]
pub fn within_span(level: u32, a: i64) -> bool {
    let h = half(level);
    (a - h).rem_euclid(4 * h) <= 2 * h
}

/// Level of the red ring through cell `(u, v)`, if any.
pub fn ring_level(u: i64, v: i64) -> Option<u32> {
    let ku = line_level(u);
    if ku % 2 == 0 && cell_on_side(u, v) {
        return Some(ku);
    }
    let kv = line_level(v);
    if kv % 2 == 0 && cell_on_side(v, u) {
        return Some(kv);
    }
    None
}

/// Smallest red level whose square strictly contains `(u, v)` in its
/// interior.
pub fn owner(u: i64, v: i64) -> u32 {
    let mut k = 2;
    while !(strictly_inside(k, u) && strictly_inside(k, v)) {
        k += 2;
    }
    k
}

/// A row (or column) is blocked inside a red square of level `context` when
/// it crosses the span of some smaller red square.
pub fn blocked(w: i64, context: u32) -> bool {
    (2..context).step_by(2).any(|j| within_span(j, w))
}

/// Canonical bottom-left ring cell residue of n-borders along one axis:
/// corners sit at `4^n / 2` modulo `2 * 4^n`.
pub fn border_residue(n: u32) -> (i64, i64) {
    let s = 1i64 << (2 * n);
    (s / 2, 2 * s)
}

/// Number of positions `x` in `[0, limit]` with `x + offset` congruent to
/// `residue` modulo `period`.
pub fn count_residue(limit: i64, offset: i64, residue: i64, period: i64) -> i64 {
    if limit < 0 {
        return 0;
    }
    let first = (residue - offset).rem_euclid(period);
    if first > limit {
        0
    } else {
        (limit - first) / period + 1
    }
}

/// Complete n-borders whose ring fits entirely inside a `width` x `height`
/// window at `phase`.
pub fn predicted_borders(n: u32, width: usize, height: usize, phase: (i64, i64)) -> i64 {
    let s = 1i64 << (2 * n);
    let (res, period) = border_residue(n);
    let cx = count_residue(width as i64 - 1 - s, phase.0 + ORIGIN, res, period);
    let cy = count_residue(height as i64 - 1 - s, phase.1 + ORIGIN, res, period);
    cx * cy
}

/// Bottom-left ring cells (window coordinates) of the complete n-borders
/// that fit in the window.
pub fn predicted_corners(n: u32, width: usize, height: usize, phase: (i64, i64)) -> Vec<(usize, usize)> {
    let s = 1i64 << (2 * n);
    let (res, period) = border_residue(n);
    let axis = |len: usize, off: i64| -> Vec<i64> {
        let limit = len as i64 - 1 - s;
        if limit < 0 {
            return Vec::new();
        }
        let first = (res - off - ORIGIN).rem_euclid(period);
        (first..=limit).step_by(period as usize).collect()
    };
    let xs = axis(width, phase.0);
    let ys = axis(height, phase.1);
    let mut out = Vec::new();
    for &y in &ys {
        for &x in &xs {
            out.push((x as usize, y as usize));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phase_zero_places_first_border_at_one_one() {
        let (u, v) = (1 + ORIGIN, 1 + ORIGIN);
        assert_eq!(line_level(u), 2);
        assert_eq!(ring_level(u, v), Some(2));
        assert_eq!(row_side(v), Side::Bottom);
        assert_eq!(col_side(u), Side::Left);
        assert_eq!(predicted_corners(1, 8, 8, (0, 0)), vec![(1, 1)]);
    }

    #[test]
    fn red_rings_never_touch() {
        for v in ORIGIN - 300..ORIGIN + 300 {
            for u in ORIGIN - 300..ORIGIN + 300 {
                if let Some(k) = ring_level(u, v) {
                    for (a, b) in [(u + 1, v), (u, v + 1)] {
                        if let Some(j) = ring_level(a, b) {
                            assert_eq!(j, k, "rings of levels {k} and {j} touch at ({u},{v})");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn residue_counting() {
        assert_eq!(count_residue(251, 1, 2, 8), 32);
        assert_eq!(count_residue(-1, 0, 0, 8), 0);
        assert_eq!(count_residue(0, 0, 0, 8), 1);
        assert_eq!(count_residue(6, 0, 7, 8), 0);
    }
}
