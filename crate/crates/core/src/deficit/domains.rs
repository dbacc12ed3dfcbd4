//! n-domains and n-undomains by direct enumeration of border placements.

use std::collections::VecDeque;

use crate::wang::DefectSet;

use super::delaunay::{linf, Point};
use super::frames::segment_meets_cells;

/// Domains and undomains of one level, as 4-connected cell sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelDomains {
    pub n: u32,
    pub domains: Vec<Vec<(usize, usize)>>,
    pub undomains: Vec<Vec<(usize, usize)>>,
    /// Per cell (row-major): whether it belongs to a domain.
    pub in_domain: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainDecomposition {
    pub width: usize,
    pub height: usize,
    /// Levels `1..=n_max` (clamped to the largest level fitting the region).
    pub levels: Vec<LevelDomains>,
}

impl DomainDecomposition {
    pub fn level(&self, n: u32) -> Option<&LevelDomains> {
        self.levels.iter().find(|l| l.n == n)
    }

    /// Whether every (n+1)-domain lies inside a single n-domain.
    pub fn nested(&self) -> bool {
        self.levels.windows(2).all(|w| {
            let (lo, hi) = (&w[0], &w[1]);
            let mut owner = vec![usize::MAX; self.width * self.height];
            for (i, d) in lo.domains.iter().enumerate() {
                for &(x, y) in d {
                    owner[y * self.width + x] = i;
                }
            }
            hi.domains.iter().all(|d| {
                let first = owner[d[0].1 * self.width + d[0].0];
                first != usize::MAX && d.iter().all(|&(x, y)| owner[y * self.width + x] == first)
            })
        })
    }
}

/// Largest `m` with an m-border (ring of `4^m + 1` cells) fitting the region.
pub fn largest_level(width: usize, height: usize) -> u32 {
    let side = width.min(height);
    let mut m = 0;
    while (1usize << (2 * (m + 1))) < side {
        m += 1;
    }
    m
}

struct Prefix {
    w: usize,
    sums: Vec<u32>,
}

impl Prefix {
    fn new(w: usize, h: usize, marked: &[bool]) -> Prefix {
        let mut sums = vec![0u32; (w + 1) * (h + 1)];
        for y in 0..h {
            for x in 0..w {
                sums[(y + 1) * (w + 1) + x + 1] =
                    marked[y * w + x] as u32 + sums[y * (w + 1) + x + 1] + sums[(y + 1) * (w + 1) + x]
                        - sums[y * (w + 1) + x];
            }
        }
        Prefix { w, sums }
    }

    /// Marked cells in `[x0, x1) x [y0, y1)`.
    fn count(&self, x0: usize, y0: usize, x1: usize, y1: usize) -> u32 {
        let w = self.w + 1;
        self.sums[y1 * w + x1] + self.sums[y0 * w + x0] - self.sums[y0 * w + x1] - self.sums[y1 * w + x0]
    }

    /// Marked cells on the ring with corner `(x, y)` and span `s`.
    fn ring(&self, x: usize, y: usize, s: usize) -> u32 {
        self.count(x, y, x + s + 1, y + s + 1) - self.count(x + 1, y + 1, x + s, y + s)
    }
}

/// Adds `v` along every ring cell of each listed placement using row and
/// column difference arrays.
fn paint_rings(w: usize, h: usize, s: usize, placements: &[(usize, usize)]) -> Vec<u32> {
    let mut rows = vec![0i64; (w + 1) * h];
    let mut cols = vec![0i64; (h + 1) * w];
    for &(x, y) in placements {
        for yy in [y, y + s] {
            rows[yy * (w + 1) + x] += 1;
            rows[yy * (w + 1) + x + s + 1] -= 1;
        }
        for xx in [x, x + s] {
            cols[xx * (h + 1) + y + 1] += 1;
            cols[xx * (h + 1) + y + s] -= 1;
        }
    }
    let mut out = vec![0u32; w * h];
    for y in 0..h {
        let mut acc = 0;
        for x in 0..w {
            acc += rows[y * (w + 1) + x];
            out[y * w + x] += acc as u32;
        }
    }
    for x in 0..w {
        let mut acc = 0;
        for y in 0..h {
            acc += cols[x * (h + 1) + y];
            out[y * w + x] += acc as u32;
        }
    }
    out
}

/// Cells touched by a defect or crossed by a defect-graph edge of length at
/// most `4^n`.
fn hit_cells(defects: &DefectSet, points: &[Point], width: usize, height: usize, n: u32) -> Vec<bool> {
    let mut hit = vec![false; width * height];
    for d in defects.iter() {
        for (x, y) in d.cells() {
            hit[y * width + x] = true;
        }
    }
    let limit = 2i64 << (2 * n);
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let (p, q) = (points[i], points[j]);
            if linf(p, q) > limit {
                continue;
            }
            let cell_lo = |a: i64, b: i64| (a.min(b) / 2).max(0) as usize;
            let cell_hi = |a: i64, b: i64, len: usize| ((a.max(b) + 1) / 2).min(len as i64 - 1) as usize;
            for y in cell_lo(p.1, q.1)..=cell_hi(p.1, q.1, height) {
                for x in cell_lo(p.0, q.0)..=cell_hi(p.0, q.0, width) {
                    let (xi, yi) = (x as i64, y as i64);
                    if segment_meets_cells(p, q, xi, yi, xi, yi) {
                        hit[y * width + x] = true;
                    }
                }
            }
        }
    }
    hit
}

fn components(width: usize, height: usize, member: &[bool]) -> Vec<Vec<(usize, usize)>> {
    let mut seen = vec![false; width * height];
    let mut out = Vec::new();
    for start in 0..width * height {
        if !member[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = Vec::new();
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            let (x, y) = (i % width, i / width);
            comp.push((x, y));
            let mut push = |j: usize| {
                if member[j] && !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            };
            if x > 0 {
                push(i - 1);
            }
            if x + 1 < width {
                push(i + 1);
            }
            if y > 0 {
                push(i - width);
            }
            if y + 1 < height {
                push(i + width);
            }
        }
        comp.sort_unstable_by_key(|&(x, y)| (y, x));
        out.push(comp);
    }
    out
}

/// Level-by-level decomposition of a `width` x `height` region. A cell is
/// in an n-undomain when every m-border placement (`m >= n`, fitting the
/// region) whose ring passes through it meets a defect-touched cell or a
/// cell crossed by an edge of length at most `4^n`; otherwise it is in an
/// n-domain.
pub fn decompose(defects: &DefectSet, width: usize, height: usize, n_max: u32) -> DomainDecomposition {
    let top = largest_level(width, height);
    let points = defects.doubled_points();
    let mut levels = Vec::new();
    for n in 1..=n_max.min(top) {
        let hit = hit_cells(defects, &points, width, height, n);
        let prefix = Prefix::new(width, height, &hit);
        let mut good = vec![0u32; width * height];
        let mut any = vec![0u32; width * height];
        for m in n..=top {
            let s = 1usize << (2 * m);
            let mut all = Vec::new();
            let mut clean = Vec::new();
            for y in 0..height - s {
                for x in 0..width - s {
                    all.push((x, y));
                    if prefix.ring(x, y, s) == 0 {
                        clean.push((x, y));
                    }
                }
            }
            for (acc, v) in [
                (&mut good, paint_rings(width, height, s, &clean)),
                (&mut any, paint_rings(width, height, s, &all)),
            ] {
                for (a, b) in acc.iter_mut().zip(v) {
                    *a += b;
                }
            }
        }
        let in_domain: Vec<bool> = good.iter().zip(&any).map(|(&g, &a)| g > 0 || a == 0).collect();
        let out: Vec<bool> = in_domain.iter().map(|&b| !b).collect();
        levels.push(LevelDomains {
            n,
            domains: components(width, height, &in_domain),
            undomains: components(width, height, &out),
            in_domain,
        });
    }
    DomainDecomposition { width, height, levels }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_painting_counts_corners_once() {
        let v = paint_rings(6, 6, 4, &[(0, 0)]);
        let ring: u32 = v.iter().sum();
        assert_eq!(ring, 16);
        assert!(v.iter().all(|&c| c <= 1));
        assert_eq!(v[2 * 6 + 2], 0);
    }

    #[test]
    fn prefix_ring_sums() {
        let mut m = vec![false; 36];
        m[2 * 6 + 2] = true;
        m[0] = true;
        let p = Prefix::new(6, 6, &m);
        assert_eq!(p.ring(0, 0, 4), 1);
        assert_eq!(p.ring(1, 1, 2), 0);
        assert_eq!(p.ring(2, 2, 2), 1);
    }

    #[test]
    fn levels_fit_region() {
        assert_eq!(largest_level(5, 5), 1);
        assert_eq!(largest_level(16, 16), 1);
        assert_eq!(largest_level(17, 40), 2);
    }
}
