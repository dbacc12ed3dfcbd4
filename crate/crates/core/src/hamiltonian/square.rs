//! Lowest energy of a single level-n square with its Robinson and
//! obstruction layers fixed, searching only the TM layer.

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::tm::{square_width, CompiledMachine, TileRole};
use crate::wang::{energy_raw, Configuration};

use super::{evaluate, rational, LocalHamiltonian};

/// Default cap on TM-layer histories visited.
pub const SQUARE_SEARCH_BUDGET: usize = 1 << 20;

#[derive(Debug, Clone)]
pub struct SquareEnergy {
    pub energy: BigRational,
    /// Framed TM-layer configuration attaining the energy.
    pub witness: Configuration,
    /// Histories visited before the search concluded.
    pub visited: usize,
}

/// The square Hamiltonian of a compiled machine: Λ on label mismatches,
/// Π_NO between reject-marker tiles and the top edge above them.
pub fn square_hamiltonian(cm: &CompiledMachine, lambda: BigRational) -> Result<LocalHamiltonian> {
    LocalHamiltonian::from_tileset(
        &cm.tiles,
        lambda,
        |t| cm.reject_marker[t],
        |t| cm.roles[t] == TileRole::Top,
    )
}

/// Minimum of the square Hamiltonian over TM-layer assignments, frame held
/// fixed. Any label mismatch costs Λ, more than the at most `2^n + 1`
/// Π_NO penalties a valid history can collect, so the minimum is taken
/// over valid histories; the search stops at the first one with zero
/// energy.
pub fn restricted_square_energy(
    cm: &CompiledMachine,
    n: u32,
    lambda: BigRational,
    budget: usize,
) -> Result<SquareEnergy> {
    if n < cm.n0 {
        return Err(Error::Config(format!("level {n} is below n0 = {}", cm.n0)));
    }
    if lambda <= rational(square_width(n) as i64) {
        return Err(Error::Config(format!(
            "lambda must exceed {} for the search to be exact at level {n}",
            square_width(n)
        )));
    }
    let h = square_hamiltonian(cm, lambda)?;
    let mut best: Option<(usize, Configuration)> = None;
    let mut visited = 0usize;
    let mut over = false;
    cm.search(n, &mut |c| {
        visited += 1;
        let p = cm.pi_no(c);
        if best.as_ref().map_or(true, |(b, _)| p < *b) {
            best = Some((p, c.clone()));
        }
        if p == 0 {
            return Ok(false);
        }
        if visited >= budget {
            over = true;
            return Ok(false);
        }
        Ok(true)
    })?;
    let (p, witness) = best.ok_or_else(|| Error::Compile("square admits no valid history".into()))?;
    if over && p > 0 {
        return Err(Error::Resource(format!(
            "square search stopped after {budget} histories without an accepting one"
        )));
    }
    let energy = evaluate(&h, &witness)?;
    debug_assert_eq!(energy_raw(&cm.tiles, &witness)?, 0);
    if energy != rational(p as i64) {
        return Err(Error::Compile("witness energy disagrees with its penalty count".into()));
    }
    Ok(SquareEnergy {
        energy,
        witness,
        visited,
    })
}
