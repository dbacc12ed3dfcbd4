//! Exact ground states on small open-boundary lattices.

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::wang::Configuration;

use super::{couples, evaluate_blocks, LocalHamiltonian, Weights};

pub const BRUTE_BUDGET: u64 = 100_000_000;
pub const TRANSFER_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Brute,
    Transfer,
    BranchBound,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Brute => "brute",
            Method::Transfer => "transfer",
            Method::BranchBound => "branch_bound",
        }
    }
}

#[derive(Debug, Clone)]
pub struct GroundStateResult {
    pub energy: BigRational,
    pub argmin: Configuration,
    pub method: Method,
    pub exact: bool,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SolveOptions {
    /// Overrides the method's default budget.
    pub budget: Option<u64>,
    /// Drop couplings between `block x block` tiles (grid Hamiltonian).
    pub block: Option<usize>,
}

fn pow_within(d: usize, k: usize, budget: u64) -> Option<u64> {
    let mut v: u64 = 1;
    for _ in 0..k {
        v = v.checked_mul(d as u64)?;
        if v > budget {
            return None;
        }
    }
    Some(v)
}

pub(super) fn pow_ok(d: usize, k: usize, budget: u64) -> bool {
    pow_within(d, k, budget).is_some()
}

fn check_dims(h: &LocalHamiltonian, width: usize, height: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::Dimension("lattice sides must be positive".into()));
    }
    if h.d() == 0 {
        return Err(Error::Dimension("empty tile set".into()));
    }
    Ok(())
}

/// Exhaustive search over all `d^(width*height)` configurations (with
/// pruning of partial assignments that cannot improve). Returns the
/// lexicographically least minimiser in row-major cell order.
pub fn ground_state_brute(h: &LocalHamiltonian, width: usize, height: usize) -> Result<GroundStateResult> {
    ground_state(h, width, height, Method::Brute, SolveOptions::default())
}

/// Column transfer-matrix dynamic programme. Among minimisers returns the
/// one whose column sequence is lexicographically least, each column read
/// bottom to top.
pub fn ground_state_transfer(h: &LocalHamiltonian, width: usize, height: usize) -> Result<GroundStateResult> {
    ground_state(h, width, height, Method::Transfer, SolveOptions::default())
}

pub fn ground_state(
    h: &LocalHamiltonian,
    width: usize,
    height: usize,
    method: Method,
    opts: SolveOptions,
) -> Result<GroundStateResult> {
    check_dims(h, width, height)?;
    let w = h.weights()?;
    let (scaled, argmin) = match method {
        Method::Brute | Method::BranchBound => {
            let budget = opts.budget.unwrap_or(BRUTE_BUDGET);
            if method == Method::Brute && pow_within(h.d(), width * height, budget).is_none() {
                return Err(Error::Resource(format!(
                    "{}^{} configurations exceed the brute-force budget {budget}",
                    h.d(),
                    width * height
                )));
            }
            brute(&w, h.d(), width, height, opts.block)
        }
        Method::Transfer => {
            let budget = opts.budget.unwrap_or(TRANSFER_BUDGET);
            let states = pow_within(h.d(), height, budget).ok_or_else(|| {
                Error::Resource(format!(
                    "{}^{height} column states exceed the transfer budget {budget}",
                    h.d()
                ))
            })?;
            transfer(&w, h.d(), width, height, states as usize, opts.block)
        }
    };
    let energy = w.energy(scaled, width * height);
    debug_assert_eq!(evaluate_blocks(h, &argmin, opts.block).unwrap(), energy);
    Ok(GroundStateResult {
        energy,
        argmin,
        method,
        exact: true,
    })
}

fn brute(w: &Weights, d: usize, width: usize, height: usize, block: Option<usize>) -> (i128, Configuration) {
    let n = width * height;
    let mut cur = vec![0usize; n];
    let mut best = i128::MAX;
    let mut best_cells = vec![0usize; n];
    let mut stack_cost = vec![0i128; n + 1];
    // iterative depth-first search; cur[i] is the next candidate at depth i
    let mut i = 0usize;
    cur[0] = 0;
    loop {
        if cur[i] == d {
            if i == 0 {
                break;
            }
            i -= 1;
            cur[i] += 1;
            continue;
        }
        let t = cur[i];
        let (x, y) = (i % width, i / width);
        let mut cost = stack_cost[i];
        if x > 0 && couples(block, x - 1) {
            cost += w.row(cur[i - 1], t);
        }
        if y > 0 && couples(block, y - 1) {
            cost += w.col(cur[i - width], t);
        }
        if cost >= best {
            cur[i] += 1;
            continue;
        }
        if i + 1 == n {
            best = cost;
            best_cells.copy_from_slice(&cur);
            cur[i] += 1;
            continue;
        }
        stack_cost[i + 1] = cost;
        i += 1;
        cur[i] = 0;
    }
    (best, Configuration::from_cells(width, height, best_cells).unwrap())
}

fn transfer(
    w: &Weights,
    d: usize,
    width: usize,
    height: usize,
    states: usize,
    block: Option<usize>,
) -> (i128, Configuration) {
    // column state s has tile (s / d^(height-1-y)) % d at row y
    let decode = |s: usize| -> Vec<usize> {
        let mut v = vec![0; height];
        let mut r = s;
        for y in (0..height).rev() {
            v[y] = r % d;
            r /= d;
        }
        v
    };
    let cols: Vec<Vec<usize>> = (0..states).map(decode).collect();
    let internal: Vec<i128> = cols
        .iter()
        .map(|c| {
            (0..height - 1)
                .filter(|&y| couples(block, y))
                .map(|y| w.col(c[y], c[y + 1]))
                .sum()
        })
        .collect();
    let horiz = |a: &[usize], b: &[usize]| -> i128 { (0..height).map(|y| w.row(a[y], b[y])).sum() };
    let mut f: Vec<i128> = internal.clone();
    let mut next: Vec<Vec<u32>> = Vec::with_capacity(width);
    for x in (0..width - 1).rev() {
        let coupled = couples(block, x);
        let mut g = vec![0i128; states];
        let mut arg = vec![0u32; states];
        if coupled {
            for s in 0..states {
                let mut best = i128::MAX;
                let mut who = 0;
                for (t, ft) in f.iter().enumerate() {
                    let v = horiz(&cols[s], &cols[t]) + ft;
                    if v < best {
                        best = v;
                        who = t;
                    }
                }
                g[s] = internal[s] + best;
                arg[s] = who as u32;
            }
        } else {
            let (who, best) = f.iter().enumerate().min_by_key(|&(t, v)| (*v, t)).unwrap();
            for s in 0..states {
                g[s] = internal[s] + best;
                arg[s] = who as u32;
            }
        }
        f = g;
        next.push(arg);
    }
    next.reverse();
    let (mut s, best) = f
        .iter()
        .enumerate()
        .min_by_key(|&(t, v)| (*v, t))
        .map(|(s, v)| (s, *v))
        .unwrap();
    let mut c = Configuration::filled(width, height, 0);
    for x in 0..width {
        for (y, &t) in cols[s].iter().enumerate() {
            c.set(x, y, t);
        }
        if x + 1 < width {
            s = next[x][s] as usize;
        }
    }
    (best, c)
}
