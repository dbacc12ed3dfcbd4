//! Border, square, obstruction and total deficits of a configuration, and
//! seeded defect injection.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::robinson::{
    check_obstruction, find_borders, free_cells, generate_tiling, predicted_borders, Layer, RobinsonTileSet,
};
use crate::wang::{defects, Configuration, Orientation, TileSet};

use super::domains::largest_level;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelDeficit {
    pub n: u32,
    /// Complete n-borders of the reference tiling in the same window.
    pub predicted: i64,
    pub borders: i64,
    /// Complete borders with no defect on or inside the ring.
    pub squares: i64,
    pub obstructed: i64,
    pub correct: i64,
    pub border_deficit: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeficitReport {
    pub width: usize,
    pub height: usize,
    pub defects: usize,
    pub l: usize,
    pub levels: Vec<LevelDeficit>,
    pub deficit: i64,
    pub sdeficit: i64,
    pub odeficit: i64,
    pub tdeficit: i64,
    /// Right-hand sides `399|D|+L, 799|D|+2L, 800|D|+2L, 801|D|+2L`.
    pub bounds: [i64; 4],
}

impl DeficitReport {
    pub fn measured(&self) -> [i64; 4] {
        [self.deficit, self.sdeficit, self.odeficit, self.tdeficit]
    }

    pub fn slack(&self) -> [i64; 4] {
        let m = self.measured();
        [0, 1, 2, 3].map(|i| self.bounds[i] - m[i])
    }

    pub fn holds(&self) -> bool {
        self.slack().iter().all(|&s| s >= 0)
    }
}

pub fn bound_rhs(defects: usize, l: usize) -> [i64; 4] {
    let (d, l) = (defects as i64, l as i64);
    [399 * d + l, 799 * d + 2 * l, 800 * d + 2 * l, 801 * d + 2 * l]
}

/// Most complete borders per level any phase of the Robinson tiling puts in
/// the window, summed over levels `1..=top`. Phases are taken modulo the
/// largest period `2 * 4^top`, which covers every distinct placement.
pub fn best_reference_total(width: usize, height: usize, top: u32) -> i64 {
    if top == 0 {
        return 0;
    }
    let period = 2i64 << (2 * top);
    let mut best = 0;
    for py in 0..period {
        for px in 0..period {
            let t: i64 = (1..=top).map(|n| predicted_borders(n, width, height, (px, py))).sum();
            best = best.max(t);
        }
    }
    best
}

/// Deficits of `c` against the Robinson tiling. Per-level border deficits
/// use `reference_phase`; totals use the best phase.
pub fn measure_deficits(ts: &RobinsonTileSet, c: &Configuration, reference_phase: (i64, i64)) -> Result<DeficitReport> {
    let (w, h) = (c.width(), c.height());
    let ds = defects(ts.base(), c)?;
    let mut touched = vec![false; w * h];
    for (x, y) in ds.touched_cells() {
        touched[y * w + x] = true;
    }
    let mut prefix = vec![0u32; (w + 1) * (h + 1)];
    for y in 0..h {
        for x in 0..w {
            prefix[(y + 1) * (w + 1) + x + 1] =
                touched[y * w + x] as u32 + prefix[y * (w + 1) + x + 1] + prefix[(y + 1) * (w + 1) + x]
                    - prefix[y * (w + 1) + x];
        }
    }
    let box_clean = |x0: usize, y0: usize, s: usize| {
        let (x1, y1, ww) = (x0 + s + 1, y0 + s + 1, w + 1);
        prefix[y1 * ww + x1] + prefix[y0 * ww + x0] - prefix[y0 * ww + x1] - prefix[y1 * ww + x0] == 0
    };
    let top = largest_level(w, h);
    let has_obstruction = ts.has_layer(Layer::Obstruction);
    let borders = find_borders(ts, c);
    let mut levels: Vec<LevelDeficit> = (1..=top)
        .map(|n| LevelDeficit {
            n,
            predicted: predicted_borders(n, w, h, reference_phase),
            borders: 0,
            squares: 0,
            obstructed: 0,
            correct: 0,
            border_deficit: 0,
        })
        .collect();
    for b in &borders {
        let Some(lv) = levels.get_mut(b.n as usize - 1) else {
            continue;
        };
        lv.borders += 1;
        if !box_clean(b.corner.0, b.corner.1, b.span()) {
            continue;
        }
        lv.squares += 1;
        // without the obstruction layer there is nothing further to check
        if has_obstruction && !check_obstruction(ts, c, b) {
            continue;
        }
        lv.obstructed += 1;
        if free_cells(ts, c, b).is_ok() {
            lv.correct += 1;
        }
    }
    for lv in &mut levels {
        lv.border_deficit = lv.predicted - lv.borders;
    }
    let best = best_reference_total(w, h, top);
    let sum = |f: fn(&LevelDeficit) -> i64| levels.iter().map(f).sum::<i64>();
    let l = w.max(h);
    Ok(DeficitReport {
        width: w,
        height: h,
        defects: ds.len(),
        l,
        deficit: best - sum(|v| v.borders),
        sdeficit: best - sum(|v| v.squares),
        odeficit: best - sum(|v| v.obstructed),
        tdeficit: best - sum(|v| v.correct),
        bounds: bound_rhs(ds.len(), l),
        levels,
    })
}

fn clashes(ts: &TileSet, c: &Configuration, x: usize, y: usize, t: usize) -> bool {
    (x > 0 && !ts.allowed(c.get(x - 1, y), t, Orientation::Horizontal))
        || (x + 1 < c.width() && !ts.allowed(t, c.get(x + 1, y), Orientation::Horizontal))
        || (y > 0 && !ts.allowed(c.get(x, y - 1), t, Orientation::Vertical))
        || (y + 1 < c.height() && !ts.allowed(t, c.get(x, y + 1), Orientation::Vertical))
}

/// Replaces the tile at `(x, y)` by a random different tile clashing with
/// a neighbour (falling back to the first clashing tile, then to any
/// different tile).
fn replace_cell(ts: &TileSet, c: &mut Configuration, x: usize, y: usize, rng: &mut ChaCha8Rng) {
    let d = ts.len();
    if d < 2 {
        return;
    }
    let old = c.get(x, y);
    for _ in 0..64 {
        let t = rng.gen_range(0..d - 1);
        let t = if t >= old { t + 1 } else { t };
        if clashes(ts, c, x, y, t) {
            c.set(x, y, t);
            return;
        }
    }
    let t = ts
        .clashing_at(c, x, y)
        .filter(|&t| t != old)
        .unwrap_or(if old == 0 { 1 } else { 0 });
    c.set(x, y, t);
}

/// Replaces `k` distinct seeded-random cells with seeded-random tiles that
/// clash with a neighbour.
pub fn inject_defects(ts: &TileSet, c: &Configuration, k: usize, seed: u64) -> Result<Configuration> {
    let n = c.width() * c.height();
    if k > n {
        return Err(Error::Config(format!("cannot inject {k} defects into {n} cells")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = c.clone();
    for i in sample(&mut rng, n, k).into_vec() {
        replace_cell(ts, &mut out, i % c.width(), i / c.width(), &mut rng);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialRecord {
    pub seed: u64,
    pub phase: (i64, i64),
    pub injected: usize,
    pub report: DeficitReport,
}

/// Seeded robustness trials on `size` x `size` windows: trial `i` draws a
/// phase and a target defect count from `defects`, injects single cells
/// until the configuration has at least that many defects and measures the
/// deficits. Records come back in trial order.
pub fn run_trials(
    ts: &RobinsonTileSet,
    size: usize,
    defects_range: (usize, usize),
    trials: usize,
    seed: u64,
) -> Result<Vec<TrialRecord>> {
    if defects_range.0 > defects_range.1 {
        return Err(Error::Config("empty defect range".into()));
    }
    (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let trial_seed = seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(i);
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
            let period = 2i64 << (2 * largest_level(size, size).max(1));
            let phase = (rng.gen_range(0..period), rng.gen_range(0..period));
            let target = rng.gen_range(defects_range.0..=defects_range.1);
            let base = generate_tiling(ts, size, size, phase)?;
            let mut c = base.clone();
            let mut injected = 0;
            while injected < size * size && defects(ts.base(), &c)?.len() < target {
                let idx = rng.gen_range(0..size * size);
                if c.get(idx % size, idx / size) != base.get(idx % size, idx / size) {
                    continue;
                }
                replace_cell(ts.base(), &mut c, idx % size, idx / size, &mut rng);
                injected += 1;
            }
            Ok(TrialRecord {
                seed: trial_seed,
                phase,
                injected,
                report: measure_deficits(ts, &c, phase)?,
            })
        })
        .collect()
}
