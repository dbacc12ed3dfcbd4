//! Robinson tilings, Turing machines compiled into Wang tiles, the induced
//! tiling Hamiltonians, defect robustness measurements and extraction of
//! computation outcomes from ground state energy densities.

pub mod deficit;
pub mod error;
pub mod gsed;
pub mod hamiltonian;
pub mod robinson;
pub mod tm;
pub mod wang;

pub use error::{Error, Result};
