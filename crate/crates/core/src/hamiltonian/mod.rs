//! Classical tiling Hamiltonians: local pair energies, exact ground states
//! on small lattices, restricted square energies and energy density bounds.

mod bounds;
mod dyadic;
mod solve;
mod square;
pub mod toys;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::wang::{Configuration, TileSet};

pub use bounds::{energy_density_bounds, grid_decompose_check, top_level, EnergyDensityEstimate, GridCheck};
pub use dyadic::Dyadic;
pub use solve::{
    ground_state, ground_state_brute, ground_state_transfer, GroundStateResult, Method, SolveOptions, BRUTE_BUDGET,
    TRANSFER_BUDGET,
};
pub use square::{restricted_square_energy, square_hamiltonian, SquareEnergy, SQUARE_SEARCH_BUDGET};

/// Default tiling-violation weight.
pub const DEFAULT_LAMBDA: i64 = 1606;

pub fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone)]
enum Pairs {
    /// Λ on every pair whose shared edge labels differ.
    Codes(Vec<[u32; 4]>),
    /// Explicit `d x d` tables, row-major `a * d + b`.
    Tables {
        row: Vec<BigRational>,
        col: Vec<BigRational>,
    },
}

#[derive(Debug, Clone)]
pub struct LocalHamiltonian {
    d: usize,
    lambda: BigRational,
    offset: BigRational,
    pairs: Pairs,
    reject: Vec<bool>,
    border: Vec<bool>,
}

impl LocalHamiltonian {
    /// Λ on each horizontal pair outside `r_horz` and each vertical pair
    /// outside `r_vert`, plus 1 on vertical pairs with a reject marker
    /// directly below a border marker.
    pub fn from_tileset(
        ts: &TileSet,
        lambda: BigRational,
        reject_markers: impl Fn(usize) -> bool,
        border_markers: impl Fn(usize) -> bool,
    ) -> Result<LocalHamiltonian> {
        if !lambda.is_positive() {
            return Err(Error::Config("lambda must be positive".into()));
        }
        let d = ts.len();
        Ok(LocalHamiltonian {
            d,
            lambda,
            offset: BigRational::zero(),
            pairs: Pairs::Codes((0..d).map(|i| ts.edge_codes(i)).collect()),
            reject: (0..d).map(&reject_markers).collect(),
            border: (0..d).map(&border_markers).collect(),
        })
    }

    /// Explicit non-negative tables (`h_row[a][b]` for `a` west of `b`,
    /// `h_col[a][b]` for `a` south of `b`).
    pub fn from_tables(h_row: Vec<Vec<BigRational>>, h_col: Vec<Vec<BigRational>>) -> Result<LocalHamiltonian> {
        let d = h_row.len();
        let flat = |t: Vec<Vec<BigRational>>| -> Result<Vec<BigRational>> {
            if t.len() != d || t.iter().any(|r| r.len() != d) {
                return Err(Error::Dimension(format!("tables must be {d}x{d}")));
            }
            let v: Vec<BigRational> = t.into_iter().flatten().collect();
            if v.iter().any(|x| x.is_negative()) {
                return Err(Error::Config("pair energies must be non-negative".into()));
            }
            Ok(v)
        };
        let (row, col) = (flat(h_row)?, flat(h_col)?);
        let lambda = row.iter().chain(&col).max().cloned().unwrap_or_else(BigRational::zero);
        Ok(LocalHamiltonian {
            d,
            lambda: if lambda.is_zero() { BigRational::one() } else { lambda },
            offset: BigRational::zero(),
            pairs: Pairs::Tables { row, col },
            reject: vec![false; d],
            border: vec![false; d],
        })
    }

    pub fn with_offset(mut self, offset: BigRational) -> Self {
        self.offset = offset;
        self
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn lambda(&self) -> &BigRational {
        &self.lambda
    }

    pub fn offset(&self) -> &BigRational {
        &self.offset
    }

    fn pi_no(&self, a: usize, b: usize) -> bool {
        self.reject[a] && self.border[b]
    }

    pub fn h_row(&self, a: usize, b: usize) -> BigRational {
        match &self.pairs {
            Pairs::Codes(c) if c[a][1] == c[b][3] => BigRational::zero(),
            Pairs::Codes(_) => self.lambda.clone(),
            Pairs::Tables { row, .. } => row[a * self.d + b].clone(),
        }
    }

    pub fn h_col(&self, a: usize, b: usize) -> BigRational {
        let base = match &self.pairs {
            Pairs::Codes(c) if c[a][0] == c[b][2] => BigRational::zero(),
            Pairs::Codes(_) => self.lambda.clone(),
            Pairs::Tables { col, .. } => col[a * self.d + b].clone(),
        };
        if self.pi_no(a, b) {
            base + BigRational::one()
        } else {
            base
        }
    }

    /// Ordered `(below, above)` pairs carrying the Π_NO penalty.
    pub fn pi_no_pairs(&self) -> Vec<(usize, usize)> {
        let below: Vec<usize> = (0..self.d).filter(|&a| self.reject[a]).collect();
        let above: Vec<usize> = (0..self.d).filter(|&b| self.border[b]).collect();
        below.iter().flat_map(|&a| above.iter().map(move |&b| (a, b))).collect()
    }

    /// Largest pair energy over both orientations.
    pub fn max_norm(&self) -> BigRational {
        match &self.pairs {
            Pairs::Tables { .. } => {
                let mut best = BigRational::zero();
                for a in 0..self.d {
                    for b in 0..self.d {
                        best = best.max(self.h_row(a, b)).max(self.h_col(a, b));
                    }
                }
                best
            }
            Pairs::Codes(c) => {
                let distinct = |side: usize| {
                    let mut v: Vec<u32> = c.iter().map(|k| k[side]).collect();
                    v.sort_unstable();
                    v.dedup();
                    v
                };
                let forbidden_h = !(distinct(1).len() == 1 && distinct(1) == distinct(3));
                let forbidden_v = !(distinct(0).len() == 1 && distinct(0) == distinct(2));
                let mut best = if forbidden_h || forbidden_v {
                    self.lambda.clone()
                } else {
                    BigRational::zero()
                };
                let pi = self.pi_no_pairs();
                if !pi.is_empty() {
                    let clash = pi.iter().any(|&(a, b)| c[a][0] != c[b][2]);
                    let lifted = if clash {
                        &self.lambda + BigRational::one()
                    } else {
                        BigRational::one()
                    };
                    best = best.max(lifted);
                }
                best
            }
        }
    }

    /// Integer pair weights scaled by a common denominator.
    pub(crate) fn weights(&self) -> Result<Weights<'_>> {
        let mut den = BigInt::one();
        let mut note = |r: &BigRational| den = den.lcm(r.denom());
        note(&self.lambda);
        if let Pairs::Tables { row, col } = &self.pairs {
            row.iter().chain(col).for_each(&mut note);
        }
        let scale = |r: &BigRational| -> Result<i128> {
            (r * BigRational::from_integer(den.clone()))
                .to_integer()
                .to_i128()
                .filter(|v| v.abs() < 1i128 << 100)
                .ok_or_else(|| Error::Resource("pair energies too large for exact integer solving".into()))
        };
        let lam = scale(&self.lambda)?;
        let one = scale(&BigRational::one())?;
        let (row, col) = match &self.pairs {
            Pairs::Tables { row, col } => (
                row.iter().map(&scale).collect::<Result<_>>()?,
                col.iter().map(&scale).collect::<Result<_>>()?,
            ),
            Pairs::Codes(_) => (Vec::new(), Vec::new()),
        };
        Ok(Weights {
            h: self,
            den,
            lam,
            one,
            row,
            col,
        })
    }
}

pub(crate) struct Weights<'a> {
    h: &'a LocalHamiltonian,
    pub den: BigInt,
    lam: i128,
    one: i128,
    row: Vec<i128>,
    col: Vec<i128>,
}

impl Weights<'_> {
    #[inline]
    pub fn row(&self, a: usize, b: usize) -> i128 {
        match &self.h.pairs {
            Pairs::Codes(c) => {
                if c[a][1] == c[b][3] {
                    0
                } else {
                    self.lam
                }
            }
            Pairs::Tables { .. } => self.row[a * self.h.d + b],
        }
    }

    #[inline]
    pub fn col(&self, a: usize, b: usize) -> i128 {
        let base = match &self.h.pairs {
            Pairs::Codes(c) => {
                if c[a][0] == c[b][2] {
                    0
                } else {
                    self.lam
                }
            }
            Pairs::Tables { .. } => self.col[a * self.h.d + b],
        };
        if self.h.pi_no(a, b) {
            base + self.one
        } else {
            base
        }
    }

    /// `scaled / den` plus the offset for `sites` cells.
    pub fn energy(&self, scaled: i128, sites: usize) -> BigRational {
        BigRational::new(BigInt::from(scaled), self.den.clone()) + &self.h.offset * rational(sites as i64)
    }
}

/// Pair energies between `L x L` blocks are dropped when `block` is set.
fn couples(block: Option<usize>, a: usize) -> bool {
    block.map_or(true, |l| (a + 1) % l != 0)
}

/// Total energy of `c`: horizontal and vertical pair sums plus the offset
/// per site.
pub fn evaluate(h: &LocalHamiltonian, c: &Configuration) -> Result<BigRational> {
    evaluate_blocks(h, c, None)
}

/// As [`evaluate`], omitting pairs that straddle the boundaries of the
/// `block x block` grid (the decoupled grid Hamiltonian).
pub fn evaluate_blocks(h: &LocalHamiltonian, c: &Configuration, block: Option<usize>) -> Result<BigRational> {
    if let Some(&bad) = c.cells().iter().find(|&&t| t >= h.d) {
        return Err(Error::Dimension(format!(
            "tile {bad} outside a Hamiltonian of dimension {}",
            h.d
        )));
    }
    let w = h.weights()?;
    let mut total: i128 = 0;
    for y in 0..c.height() {
        for x in 0..c.width() {
            let a = c.get(x, y);
            if x + 1 < c.width() && couples(block, x) {
                total += w.row(a, c.get(x + 1, y));
            }
            if y + 1 < c.height() && couples(block, y) {
                total += w.col(a, c.get(x, y + 1));
            }
        }
    }
    Ok(w.energy(total, c.width() * c.height()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::robinson::{build_tileset, generate_tiling, Layer};
    use crate::wang::Orientation;

    #[test]
    fn one_tile_set_has_zero_tables() {
        let ts = toys::blank();
        let h = LocalHamiltonian::from_tileset(&ts, rational(5), |_| false, |_| false).unwrap();
        assert!(h.h_row(0, 0).is_zero() && h.h_col(0, 0).is_zero());
        assert!(h.max_norm().is_zero());
        assert!(h.pi_no_pairs().is_empty());
    }

    #[test]
    fn robinson_tables_match_the_tile_relation() {
        let rs = build_tileset(&[Layer::Robinson, Layer::Dash]).unwrap();
        let ts = rs.base();
        let lam = rational(DEFAULT_LAMBDA);
        let h = LocalHamiltonian::from_tileset(ts, lam.clone(), |_| false, |_| false).unwrap();
        for a in 0..ts.len() {
            for b in 0..ts.len() {
                let hr = if ts.check_pair(a, b, Orientation::Horizontal).unwrap() {
                    BigRational::zero()
                } else {
                    lam.clone()
                };
                let hc = if ts.check_pair(a, b, Orientation::Vertical).unwrap() {
                    BigRational::zero()
                } else {
                    lam.clone()
                };
                assert_eq!(h.h_row(a, b), hr);
                assert_eq!(h.h_col(a, b), hc);
            }
        }
        let c = generate_tiling(&rs, 20, 20, (3, 1)).unwrap();
        assert!(evaluate(&h, &c).unwrap().is_zero());
    }

    #[test]
    fn isolated_clash_costs_four_lambda() {
        let ts = toys::checkerboard();
        let h = LocalHamiltonian::from_tileset(&ts, rational(7), |_| false, |_| false).unwrap();
        let mut c = Configuration::from_cells(3, 3, vec![0, 1, 0, 2, 3, 2, 0, 1, 0]).unwrap();
        assert!(evaluate(&h, &c).unwrap().is_zero());
        c.set(1, 1, 0);
        assert_eq!(evaluate(&h, &c).unwrap(), rational(28));
    }

    #[test]
    fn pi_no_sits_on_vertical_pairs() {
        let ts = toys::blank();
        let h = LocalHamiltonian::from_tileset(&ts, rational(3), |_| true, |_| true).unwrap();
        assert_eq!(h.h_col(0, 0), rational(1));
        assert!(h.h_row(0, 0).is_zero());
        let c = Configuration::filled(2, 3, 0);
        assert_eq!(evaluate(&h, &c).unwrap(), rational(4));
        let h = h.with_offset(BigRational::new(1.into(), 2.into()));
        assert_eq!(evaluate(&h, &c).unwrap(), rational(7));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let h = LocalHamiltonian::from_tileset(&toys::blank(), rational(1), |_| false, |_| false).unwrap();
        let c = Configuration::filled(2, 2, 1);
        assert!(matches!(evaluate(&h, &c), Err(Error::Dimension(_))));
    }
}
