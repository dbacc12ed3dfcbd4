//! Run configuration: a TOML file, environment budget overrides, and the
//! seed splitter every experiment draws from.

use std::path::Path;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Signed;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Budgets {
    pub brute: u64,
    pub transfer: u64,
    pub branch: u64,
    /// Histories visited by the restricted square search.
    pub square: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            brute: tilesed::hamiltonian::BRUTE_BUDGET,
            transfer: tilesed::hamiltonian::TRANSFER_BUDGET,
            branch: tilesed::hamiltonian::BRUTE_BUDGET,
            square: tilesed::hamiltonian::SQUARE_SEARCH_BUDGET as u64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Penalty for mismatched labels, as `p` or `p/q`.
    pub lambda: String,
    pub seed: u64,
    pub n_max: u32,
    /// Side of the deficit-sweep windows.
    pub window: usize,
    /// Sizes L whose doubling 2L the convergence experiment compares.
    pub sizes: Vec<usize>,
    pub trials: usize,
    /// Inclusive range of injected defect counts.
    pub defects: [usize; 2],
    /// Bits recovered by the extraction round trip.
    pub k: u32,
    /// `builtin:NAME` or a path to a machine file.
    pub machine: String,
    pub crosscheck_sets: usize,
    pub out_dir: String,
    pub budgets: Budgets,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            lambda: "1606".into(),
            seed: 42,
            n_max: 3,
            window: 256,
            sizes: vec![64, 128],
            trials: 1000,
            defects: [1, 20],
            k: 6,
            machine: "builtin:parity".into(),
            crosscheck_sets: 50,
            out_dir: "out".into(),
            budgets: Budgets::default(),
        }
    }
}

/// Environment variables that override the matching budget.
pub const BUDGET_VARS: [&str; 4] = [
    "TILESED_BRUTE_BUDGET",
    "TILESED_TRANSFER_BUDGET",
    "TILESED_BRANCH_BUDGET",
    "TILESED_SQUARE_BUDGET",
];

impl RunConfig {
    pub fn parse(text: &str) -> CliResult<RunConfig> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.message().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_text(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    pub fn load(path: &Path) -> CliResult<RunConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        RunConfig::parse(&text)
    }

    pub fn validate(&self) -> CliResult<()> {
        self.lambda()?;
        // TOML integers are signed 64-bit
        if self.seed > i64::MAX as u64 {
            return Err(CliError::Config("seed must fit in 63 bits".into()));
        }
        let b = &self.budgets;
        if [b.brute, b.transfer, b.branch, b.square].contains(&0) {
            return Err(CliError::Config("budgets must be positive".into()));
        }
        if self.window == 0 || self.sizes.is_empty() || self.sizes.contains(&0) {
            return Err(CliError::Config(
                "sizes must be a non-empty list of positive sides".into(),
            ));
        }
        if self.defects[0] == 0 || self.defects[0] > self.defects[1] {
            return Err(CliError::Config(
                "defects must be a range lo..hi with 1 <= lo <= hi".into(),
            ));
        }
        if self.k == 0 || self.k > 24 {
            return Err(CliError::Config("k must lie in 1..=24".into()));
        }
        Ok(())
    }

    pub fn lambda(&self) -> CliResult<BigRational> {
        let l = BigRational::from_str(self.lambda.trim())
            .map_err(|_| CliError::Config(format!("cannot parse lambda {:?}", self.lambda)))?;
        if !l.is_positive() {
            return Err(CliError::Config("lambda must be positive".into()));
        }
        Ok(l)
    }

    /// Applies budget overrides looked up through `var`.
    pub fn apply_env(&mut self, var: impl Fn(&str) -> Option<String>) -> CliResult<()> {
        let slots = [
            &mut self.budgets.brute,
            &mut self.budgets.transfer,
            &mut self.budgets.branch,
            &mut self.budgets.square,
        ];
        for (name, slot) in BUDGET_VARS.iter().zip(slots) {
            if let Some(v) = var(name) {
                *slot = v
                    .trim()
                    .parse()
                    .ok()
                    .filter(|&b| b > 0)
                    .ok_or_else(|| CliError::Config(format!("{name} must be a positive integer, got {v:?}")))?;
            }
        }
        Ok(())
    }

    /// Independent seed for the named consumer.
    pub fn split_seed(&self, stream: Stream) -> u64 {
        split_seed(self.seed, stream as u64)
    }
}

/// Consumers of randomness, one ChaCha stream each.
#[derive(Debug, Clone, Copy)]
pub enum Stream {
    DeficitTrials = 1,
    ToySets = 2,
    Injection = 3,
}

pub fn split_seed(seed: u64, stream: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.next_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let c = RunConfig::default();
        assert_eq!(RunConfig::parse(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn partial_files_fill_defaults() {
        let c = RunConfig::parse("seed = 7\n[budgets]\nbrute = 5\n").unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.budgets.brute, 5);
        assert_eq!(c.budgets.transfer, RunConfig::default().budgets.transfer);
    }

    #[test]
    fn bad_values_are_rejected() {
        assert!(RunConfig::parse("lambda = \"-3\"").is_err());
        assert!(RunConfig::parse("lambda = \"x\"").is_err());
        assert!(RunConfig::parse("[budgets]\nsquare = 0").is_err());
        assert!(RunConfig::parse("defects = [5, 2]").is_err());
        assert!(RunConfig::parse("colour = 1").is_err());
    }

    #[test]
    fn env_overrides() {
        let mut c = RunConfig::default();
        c.apply_env(|k| (k == "TILESED_TRANSFER_BUDGET").then(|| "77".to_string()))
            .unwrap();
        assert_eq!(c.budgets.transfer, 77);
        assert!(c.apply_env(|_| Some("0".into())).is_err());
    }

    #[test]
    fn streams_differ() {
        assert_ne!(split_seed(1, 1), split_seed(1, 2));
        assert_eq!(split_seed(1, 1), split_seed(1, 1));
    }
}
