//! Finite-size energy density intervals and the block decomposition check.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::error::{Error, Result};

use super::solve::{ground_state, Method, SolveOptions, BRUTE_BUDGET};
use super::{rational, Dyadic, LocalHamiltonian};

/// Fraction bits used when rounding interval ends outward.
const ROUND_BITS: u64 = 96;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnergyDensityEstimate {
    pub value_lo: Dyadic,
    pub value_hi: Dyadic,
    pub l: usize,
}

impl EnergyDensityEstimate {
    pub fn width(&self) -> Dyadic {
        &self.value_hi - &self.value_lo
    }

    pub fn contains(&self, v: &BigRational) -> bool {
        &self.value_lo.to_rational() <= v && v <= &self.value_hi.to_rational()
    }
}

/// Largest level whose borders (period `2^(2n+1)`) fit an `l`-window.
pub fn top_level(l: usize) -> u32 {
    let mut n = 0;
    while 2usize << (2 * (n + 1)) <= l {
        n += 1;
    }
    n
}

/// Interval for the energy density at size `l` given outcome bits
/// (`series[j]` is `i_(j+1)`): each level contributes its census bounds
/// times `i_n / l^2`, and both ends move out by `4 max|h| / l`.
pub fn energy_density_bounds(h: &LocalHamiltonian, series: &[u8], l: usize) -> Result<EnergyDensityEstimate> {
    if l == 0 {
        return Err(Error::Dimension("lattice size must be positive".into()));
    }
    let top = top_level(l) as usize;
    if series.len() < top {
        return Err(Error::Config(format!(
            "outcomes up to level {top} are needed at L = {l}, got {}",
            series.len()
        )));
    }
    if series.iter().any(|&b| b > 1) {
        return Err(Error::Config("outcome bits must be 0 or 1".into()));
    }
    let (mut lo, mut hi) = (BigInt::from(0), BigInt::from(0));
    for n in 1..=top {
        if series[n - 1] == 1 {
            let q = (l >> (2 * n + 1)) as i64;
            lo += BigInt::from((q - 1).max(0).pow(2));
            hi += BigInt::from((q + 1).pow(2));
        }
    }
    let area = BigInt::from(l) * BigInt::from(l);
    let slack = h.max_norm() * rational(4) / rational(l as i64);
    let lo = BigRational::new(lo, area.clone()) - &slack;
    let hi = BigRational::new(hi, area) + &slack;
    Ok(EnergyDensityEstimate {
        value_lo: Dyadic::floor_rational(&lo, ROUND_BITS),
        value_hi: Dyadic::ceil_rational(&hi, ROUND_BITS),
        l,
    })
}

#[derive(Debug, Clone)]
pub struct GridCheck {
    /// λ0 of one `l x l` block.
    pub lambda_l: BigRational,
    /// λ0 of `t x t` decoupled blocks.
    pub lambda_grid: BigRational,
    /// λ0 of the coupled `tl x tl` lattice.
    pub lambda_tl: BigRational,
    /// `4 l t^2 max|h|`.
    pub bound: BigRational,
    pub decomposes: bool,
    pub within_bound: bool,
}

impl GridCheck {
    pub fn holds(&self) -> bool {
        self.decomposes && self.within_bound
    }
}

/// Compares the decoupled grid Hamiltonian with `t^2` copies of the block
/// and with the coupled lattice of side `t l`.
pub fn grid_decompose_check(h: &LocalHamiltonian, l: usize, t: usize) -> Result<GridCheck> {
    if l == 0 || t == 0 {
        return Err(Error::Dimension("block size and count must be positive".into()));
    }
    let small_method = if super::solve::pow_ok(h.d(), l * l, BRUTE_BUDGET) {
        Method::Brute
    } else {
        Method::Transfer
    };
    let lambda_l = ground_state(h, l, l, small_method, SolveOptions::default())?.energy;
    let grid = SolveOptions {
        budget: None,
        block: Some(l),
    };
    let lambda_grid = ground_state(h, t * l, t * l, Method::Transfer, grid)?.energy;
    let lambda_tl = ground_state(h, t * l, t * l, Method::Transfer, SolveOptions::default())?.energy;
    let t2 = rational((t * t) as i64);
    let bound = h.max_norm() * rational((4 * l * t * t) as i64);
    let scaled = &lambda_l * &t2;
    Ok(GridCheck {
        decomposes: lambda_grid == scaled,
        within_bound: (&scaled - &lambda_tl).abs() <= bound,
        lambda_l,
        lambda_grid,
        lambda_tl,
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::super::toys;
    use super::*;
    use num_traits::Zero;

    fn unit(ts: &crate::wang::TileSet) -> LocalHamiltonian {
        LocalHamiltonian::from_tileset(ts, rational(1), |_| false, |_| false).unwrap()
    }

    #[test]
    fn levels_fitting_a_window() {
        assert_eq!(top_level(7), 0);
        assert_eq!(top_level(8), 1);
        assert_eq!(top_level(64), 2);
        assert_eq!(top_level(128), 3);
        assert_eq!(top_level(255), 3);
    }

    #[test]
    fn zero_series_brackets_zero() {
        let h = unit(&toys::checkerboard());
        let e = energy_density_bounds(&h, &[0, 0, 0], 64).unwrap();
        assert!(e.contains(&BigRational::zero()));
        assert!(e.width().to_rational() <= rational(8) / rational(64));
    }

    #[test]
    fn intervals_bracket_the_limit() {
        let h = unit(&toys::checkerboard());
        let all = [1u8; 8];
        let limit = BigRational::new(1.into(), 60.into());
        for l in [16, 64, 256, 1024] {
            assert!(energy_density_bounds(&h, &all, l).unwrap().contains(&limit));
        }
        assert!(energy_density_bounds(&h, &[1], 64).is_err());
    }

    #[test]
    fn grid_checks() {
        for ts in [toys::blank(), toys::checkerboard(), toys::incompatible()] {
            let g = grid_decompose_check(&unit(&ts), 2, 2).unwrap();
            assert!(g.holds(), "{}", ts.name());
        }
        let g = grid_decompose_check(&unit(&toys::incompatible()), 2, 2).unwrap();
        assert_eq!(g.lambda_tl, rational(24));
        assert_eq!(g.lambda_grid, rational(16));
    }
}
