//! n-frames, frame cuts and the two geometric counting lemmas, checked by
//! exhaustive enumeration over one period of the border lattice.

use std::collections::BTreeSet;

use crate::robinson::ORIGIN;

use super::delaunay::{linf, DelaunayTriangulation, Point};

/// One frame square. `corner` is its bottom-left cell and the closed cell
/// box `[corner, corner + span]` in both axes; corners may lie outside the
/// window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Frame {
    pub n: u32,
    pub corner: (i64, i64),
    pub span: i64,
}

impl Frame {
    /// Whether a doubled-coordinate point lies in the open box.
    pub fn contains(&self, p: Point) -> bool {
        let inside = |c: i64, v: i64| 2 * c - 1 < v && v < 2 * (c + self.span) + 1;
        inside(self.corner.0, p.0) && inside(self.corner.1, p.1)
    }
}

/// First border column (or row) offset of level `n` at a phase component.
fn grid_origin(n: u32, phase: i64) -> i64 {
    let s = 1i64 << (2 * n);
    (s / 2 - phase - ORIGIN).rem_euclid(2 * s)
}

/// The n-frames of a Robinson tiling at `phase` that meet the window: the
/// border squares on the `4^n` grid together with the squares sharing a
/// side with one of them.
#[derive(Debug, Clone)]
pub struct FrameSet {
    pub n: u32,
    pub frames: Vec<Frame>,
}

impl FrameSet {
    pub fn new(n: u32, width: usize, height: usize, phase: (i64, i64)) -> FrameSet {
        let s = 1i64 << (2 * n);
        let axis = |len: usize, off: i64| -> Vec<(i64, bool)> {
            let r = grid_origin(n, off);
            // boxes [r + k s, r + (k + 1) s] meeting [0, len)
            let k0 = (-s - r).div_euclid(s);
            let k1 = (len as i64 - r).div_euclid(s);
            (k0..=k1)
                .map(|k| (r + k * s, k.rem_euclid(2) == 1))
                .filter(|&(c, _)| c + s >= 0 && c < len as i64)
                .collect()
        };
        let xs = axis(width, phase.0);
        let ys = axis(height, phase.1);
        let mut frames = Vec::new();
        for &(y, oy) in &ys {
            for &(x, ox) in &xs {
                if !(ox && oy) {
                    frames.push(Frame {
                        n,
                        corner: (x, y),
                        span: s,
                    });
                }
            }
        }
        FrameSet { n, frames }
    }

    /// Frames containing `p`.
    pub fn containing(&self, p: Point) -> BTreeSet<usize> {
        self.frames
            .iter()
            .enumerate()
            .filter(|(_, f)| f.contains(p))
            .map(|(i, _)| i)
            .collect()
    }

    /// Frames with exactly one of the two points strictly inside.
    pub fn cuts(&self, p: Point, q: Point) -> usize {
        self.frames.iter().filter(|f| f.contains(p) != f.contains(q)).count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelCuts {
    pub n: u32,
    /// `(i, j, cuts)` for every triangulation edge of length at most `4^n`.
    pub edges: Vec<(usize, usize, usize)>,
}

impl LevelCuts {
    pub fn max(&self) -> usize {
        self.edges.iter().map(|e| e.2).max().unwrap_or(0)
    }
}

/// For each level, the number of that level's frames cut by each short edge.
pub fn count_frame_cuts(d: &DelaunayTriangulation, frames: &[FrameSet]) -> Vec<LevelCuts> {
    frames
        .iter()
        .map(|fs| {
            let limit = 2i64 << (2 * fs.n);
            let edges = d
                .edges
                .iter()
                .filter(|&&(i, j)| linf(d.vertices[i], d.vertices[j]) <= limit)
                .map(|&(i, j)| (i, j, fs.cuts(d.vertices[i], d.vertices[j])))
                .collect();
            LevelCuts { n: fs.n, edges }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepResult {
    /// Level of the frames (or the smallest border level counted).
    pub m: u32,
    /// Edge length class: lengths up to `4^l`.
    pub l: u32,
    pub max_observed: usize,
    pub bound: usize,
    /// Distinct cases examined.
    pub cases: u64,
}

impl SweepResult {
    pub fn holds(&self) -> bool {
        self.max_observed <= self.bound
    }
}

/// Box indices (relative to a border column at 0) whose open doubled
/// interval contains `v`, for boxes of span `s`.
fn box_indices(v: i64, s: i64) -> Vec<i64> {
    // box k covers (2ks - 1, 2(k+1)s + 1)
    let lo = (v - 1).div_euclid(2 * s) - 1;
    (lo..=lo + 2)
        .filter(|&k| 2 * k * s - 1 < v && v < 2 * (k + 1) * s + 1)
        .collect()
}

/// Per-axis signature of an endpoint pair: parity of each coordinate and
/// the box indices of both, shifted so the least index is 0 or 1 (shifts
/// by even amounts keep border parity).
type AxisSig = (bool, bool, Vec<i64>, Vec<i64>);

fn axis_signatures(s: i64, reach: i64) -> BTreeSet<AxisSig> {
    let mut out = BTreeSet::new();
    for p in 0..4 * s {
        for dx in -reach..=reach {
            let q = p + dx;
            let (a, b) = (box_indices(p, s), box_indices(q, s));
            let least = *a.iter().chain(b.iter()).min().unwrap();
            let shift = least - least.rem_euclid(2);
            let norm = |v: &[i64]| v.iter().map(|k| k - shift).collect::<Vec<_>>();
            out.insert((p.rem_euclid(2) == 1, q.rem_euclid(2) == 1, norm(&a), norm(&b)));
        }
    }
    out
}

/// Worst case of the frame-cutting lemma: over all pairs of dual-lattice
/// points at ℓ∞ distance at most `4^l`, the number of m-frames containing
/// exactly one of them, against `floor(4^(l-m) / 2) + 6`.
pub fn frame_cut_sweep(m: u32, l: u32) -> SweepResult {
    assert!(m >= 1 && m <= l, "need 1 <= m <= l");
    let s = 1i64 << (2 * m);
    let reach = 2i64 << (2 * l);
    let sigs: Vec<AxisSig> = axis_signatures(s, reach).into_iter().collect();
    let frames_of = |xs: &[i64], ys: &[i64]| -> BTreeSet<(i64, i64)> {
        let mut f = BTreeSet::new();
        for &i in xs {
            for &j in ys {
                if i.rem_euclid(2) == 0 || j.rem_euclid(2) == 0 {
                    f.insert((i, j));
                }
            }
        }
        f
    };
    let mut max_observed = 0;
    let mut cases = 0;
    for xs in &sigs {
        for ys in &sigs {
            // dual points have exactly one odd coordinate
            if xs.0 == ys.0 || xs.1 == ys.1 {
                continue;
            }
            cases += 1;
            let fp = frames_of(&xs.2, &ys.2);
            let fq = frames_of(&xs.3, &ys.3);
            max_observed = max_observed.max(fp.symmetric_difference(&fq).count());
        }
    }
    SweepResult {
        m,
        l,
        max_observed,
        bound: (1usize << (2 * (l - m))) / 2 + 6,
        cases,
    }
}

/// Whether the closed segment `pq` meets the closed box `[lo, hi]`.
fn segment_meets_box(p: Point, q: Point, lo: Point, hi: Point) -> bool {
    if p.0.max(q.0) < lo.0 || p.0.min(q.0) > hi.0 || p.1.max(q.1) < lo.1 || p.1.min(q.1) > hi.1 {
        return false;
    }
    let side = |c: Point| ((q.0 - p.0) * (c.1 - p.1) - (q.1 - p.1) * (c.0 - p.0)).signum();
    let s = [side(lo), side((hi.0, lo.1)), side(hi), side((lo.0, hi.1))];
    !(s.iter().all(|&v| v > 0) || s.iter().all(|&v| v < 0))
}

/// Whether the closed segment meets the closed cell box `[x0, x1] x [y0, y1]`
/// given in cell coordinates, with `p` and `q` doubled.
pub(crate) fn segment_meets_cells(p: Point, q: Point, x0: i64, y0: i64, x1: i64, y1: i64) -> bool {
    segment_meets_box(p, q, (2 * x0 - 1, 2 * y0 - 1), (2 * x1 + 1, 2 * y1 + 1))
}

/// Number of n-borders (canonical phase, all `n` in `levels`) whose ring
/// cells meet the segment.
fn rings_met(p: Point, q: Point, levels: std::ops::RangeInclusive<u32>) -> usize {
    let mut count = 0;
    for n in levels {
        let s = 1i64 << (2 * n);
        let r = grid_origin(n, 0);
        let inner = |c: (i64, i64), v: Point| {
            2 * c.0 + 1 < v.0 && v.0 < 2 * (c.0 + s) - 1 && 2 * c.1 + 1 < v.1 && v.1 < 2 * (c.1 + s) - 1
        };
        // ring corners c with outer doubled interval [2c - 1, 2c + 2s + 1]
        // meeting [lo, hi]
        let first = |lo: i64| {
            let cmin = (lo - 2 * s).div_euclid(2);
            cmin + (r - cmin).rem_euclid(2 * s)
        };
        let (xhi, yhi) = (p.0.max(q.0), p.1.max(q.1));
        let mut cy = first(p.1.min(q.1));
        while 2 * cy - 1 <= yhi {
            let mut cx = first(p.0.min(q.0));
            while 2 * cx - 1 <= xhi {
                if segment_meets_cells(p, q, cx, cy, cx + s, cy + s) && !(inner((cx, cy), p) && inner((cx, cy), q)) {
                    count += 1;
                }
                cx += 2 * s;
            }
            cy += 2 * s;
        }
    }
    count
}

/// Worst case of the border-intersection lemma: over every segment between
/// dual-lattice points at ℓ∞ distance at most `4^m`, the number of n-borders
/// with `m <= n <= top` it meets, against 3. Endpoints range over one full
/// period of the level-`top` lattice, so the sweep is exhaustive.
pub fn border_intersection_sweep(m: u32, top: u32) -> SweepResult {
    assert!(m >= 1 && m <= top, "need 1 <= m <= top");
    let period = 4i64 << (2 * top);
    let reach = 2i64 << (2 * m);
    let mut max_observed = 0;
    let mut cases = 0u64;
    for py in 0..period {
        for px in 0..period {
            if (px + py) % 2 == 0 {
                continue;
            }
            let p = (px, py);
            for dy in -reach..=reach {
                for dx in -reach..=reach {
                    if (dx + dy) % 2 != 0 || (dx, dy) <= (0, 0) {
                        continue;
                    }
                    let q = (px + dx, py + dy);
                    if (q.0 + q.1) % 2 == 0 {
                        continue;
                    }
                    cases += 1;
                    max_observed = max_observed.max(rings_met(p, q, m..=top));
                }
            }
        }
    }
    SweepResult {
        m,
        l: m,
        max_observed,
        bound: 3,
        cases,
    }
}
