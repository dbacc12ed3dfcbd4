//! The energy-density decision and estimation problems for the square
//! Hamiltonian, the closed form of the density in terms of per-level
//! outcomes, and recovery of those outcomes by threshold queries.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::hamiltonian::{rational, restricted_square_energy, Dyadic, DEFAULT_LAMBDA, SQUARE_SEARCH_BUDGET};
use crate::tm::{compile, level_machine, parse_input, run_reference, square_width, InstanceIndexer, Outcome, TMSpec};

/// Default deepest level consulted by [`decide`] and [`fgsed`].
pub const DEFAULT_MAX_DEPTH: u32 = 24;

type Provider = dyn Fn(u32) -> Result<u8> + Send + Sync;

/// Per-level outcome bits `i_n` (1 when the level-n instance is rejected),
/// computed on demand and memoised. Levels below `n0` contribute 0.
#[derive(Clone)]
pub struct OutcomeSeries {
    pub n0: u32,
    provider: Arc<Provider>,
    memo: Arc<RwLock<BTreeMap<u32, u8>>>,
}

impl fmt::Debug for OutcomeSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OutcomeSeries")
            .field("n0", &self.n0)
            .field("known", &*self.memo.read().unwrap())
            .finish()
    }
}

impl OutcomeSeries {
    pub fn from_fn(n0: u32, f: impl Fn(u32) -> Result<u8> + Send + Sync + 'static) -> OutcomeSeries {
        OutcomeSeries {
            n0,
            provider: Arc::new(f),
            memo: Arc::new(RwLock::new(BTreeMap::new())),
        }
    }

    /// `bits[j]` is `i_(j+1)`; zero beyond the list.
    pub fn fixed(bits: &[u8]) -> OutcomeSeries {
        let bits = bits.to_vec();
        OutcomeSeries::from_fn(1, move |n| Ok(bits.get(n as usize - 1).copied().unwrap_or(0)))
    }

    pub fn constant(bit: u8) -> OutcomeSeries {
        OutcomeSeries::from_fn(1, move |_| Ok(bit))
    }

    /// Outcomes by direct simulation of `m` on `x_n` with the step budget a
    /// level-n square leaves after writing the instance.
    pub fn simulated(m: &TMSpec, indexer: InstanceIndexer) -> OutcomeSeries {
        let m = m.clone();
        OutcomeSeries::from_fn(indexer.n0, move |n| {
            let x = indexer
                .instance(n)
                .ok_or_else(|| Error::Config(format!("no instance at level {n}")))?;
            let steps = square_steps(n, &x)?;
            let r = run_reference(&m, &parse_input(&x), steps)?;
            Ok(u8::from(r.outcome != Outcome::Accepted))
        })
    }

    /// Outcomes read off the ground energy of the compiled level-n square.
    pub fn from_tiles(m: &TMSpec, indexer: InstanceIndexer, budget: usize) -> OutcomeSeries {
        let m = m.clone();
        OutcomeSeries::from_fn(indexer.n0, move |n| {
            let cm = compile(&level_machine(&m, indexer, n)?)?;
            let e = restricted_square_energy(&cm, n, rational(DEFAULT_LAMBDA), budget)?.energy;
            if e == rational(0) {
                Ok(0)
            } else if e == rational(1) {
                Ok(1)
            } else {
                Err(Error::Compile(format!("level-{n} square energy {e} is not 0 or 1")))
            }
        })
    }

    pub fn tiles_default(m: &TMSpec, indexer: InstanceIndexer) -> OutcomeSeries {
        OutcomeSeries::from_tiles(m, indexer, SQUARE_SEARCH_BUDGET)
    }

    pub fn bit(&self, n: u32) -> Result<u8> {
        if n < self.n0 || n == 0 {
            return Ok(0);
        }
        if let Some(&b) = self.memo.read().unwrap().get(&n) {
            return Ok(b);
        }
        let b = (self.provider)(n)?;
        if b > 1 {
            return Err(Error::Compile(format!("outcome {b} at level {n} is not a bit")));
        }
        self.memo.write().unwrap().insert(n, b);
        Ok(b)
    }

    pub fn bits(&self, k: u32) -> Result<Vec<u8>> {
        (1..=k).map(|n| self.bit(n)).collect()
    }
}

fn square_steps(n: u32, x: &str) -> Result<usize> {
    square_width(n)
        .checked_sub(2 * x.len())
        .filter(|&s| s > 0)
        .ok_or_else(|| Error::Config(format!("instance {x:?} does not fit a level-{n} square")))
}

/// `1/4 * 16^-n`.
fn level_weight(n: u32) -> Dyadic {
    Dyadic::pow2_neg(4 * n as u64 + 2)
}

/// `1/4 * 16^-m / 15`, the most the levels beyond `m` can add.
pub fn tail_bound(m: u32) -> BigRational {
    level_weight(m).to_rational() / rational(15)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesBounds {
    pub depth: u32,
    pub lower: Dyadic,
    pub upper: BigRational,
}

/// Partial sum through level `m` and the partial sum plus the tail bound.
pub fn series_value(s: &OutcomeSeries, m: u32) -> Result<SeriesBounds> {
    let mut lower = Dyadic::zero();
    for n in 1..=m {
        if s.bit(n)? == 1 {
            lower = &lower + &level_weight(n);
        }
    }
    let upper = lower.to_rational() + tail_bound(m);
    Ok(SeriesBounds { depth: m, lower, upper })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdPair {
    pub alpha: Dyadic,
    pub beta: Dyadic,
}

impl ThresholdPair {
    pub fn new(alpha: Dyadic, beta: Dyadic) -> Result<ThresholdPair> {
        if beta <= alpha {
            return Err(Error::Config(format!("need alpha < beta, got {alpha} and {beta}")));
        }
        Ok(ThresholdPair { alpha, beta })
    }

    pub fn bit_length(&self) -> u64 {
        self.alpha.bit_length().max(self.beta.bit_length())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    /// Density at most alpha.
    Yes,
    /// Density at least beta.
    No,
    PromiseViolated,
}

impl Decision {
    pub fn name(self) -> &'static str {
        match self {
            Decision::Yes => "yes",
            Decision::No => "no",
            Decision::PromiseViolated => "promise-violated",
        }
    }
}

/// Deepens the series until its interval settles the query. Reports a
/// promise violation when the interval falls strictly between the
/// thresholds, or still straddles one of them at `max_depth`.
pub fn decide(s: &OutcomeSeries, t: &ThresholdPair, max_depth: u32) -> Result<Decision> {
    let (alpha, beta) = (t.alpha.to_rational(), t.beta.to_rational());
    for m in 0..=max_depth {
        let b = series_value(s, m)?;
        let lo = b.lower.to_rational();
        if lo >= beta {
            return Ok(Decision::No);
        }
        if b.upper <= alpha {
            return Ok(Decision::Yes);
        }
        if lo > alpha && b.upper < beta {
            return Ok(Decision::PromiseViolated);
        }
    }
    Ok(Decision::PromiseViolated)
}

/// Thresholds of the `m`-th extraction query given `i_1..i_(m-1)`:
/// `beta = (16^-m + P) / 4` and the finitely expanded lower threshold
/// `a = (P + 2 * 16^-(m+1)) / 4`, with `P = sum i_n 16^-n`.
pub fn thresholds_for(m: u32, prefix: &[u8]) -> Result<ThresholdPair> {
    if m == 0 || prefix.len() != m as usize - 1 {
        return Err(Error::Config(format!(
            "query {m} needs a prefix of {} bits, got {}",
            m.saturating_sub(1),
            prefix.len()
        )));
    }
    let mut p = Dyadic::zero();
    for (j, &b) in prefix.iter().enumerate() {
        if b > 1 {
            return Err(Error::Config("prefix entries must be bits".into()));
        }
        if b == 1 {
            p = &p + &level_weight(j as u32 + 1);
        }
    }
    let beta = &p + &level_weight(m);
    let alpha = &p + &Dyadic::pow2_neg(4 * m as u64 + 5);
    ThresholdPair::new(alpha, beta)
}

/// The exact lower threshold `(P + sum_(n>m) 16^-n) / 4` that the finite
/// surrogate of [`thresholds_for`] stands in for.
pub fn alpha_exact(m: u32, prefix: &[u8]) -> Result<BigRational> {
    let t = thresholds_for(m, prefix)?;
    let p = t.beta.to_rational() - level_weight(m).to_rational();
    Ok(p + tail_bound(m))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractionTranscript {
    pub queries: Vec<(ThresholdPair, Decision)>,
    pub recovered: Vec<u8>,
}

impl ExtractionTranscript {
    pub fn max_bit_length(&self) -> u64 {
        self.queries.iter().map(|(t, _)| t.bit_length()).max().unwrap_or(0)
    }
}

/// Recovers `i_1..i_k` with one oracle query per level.
pub fn extract(k: u32, oracle: &mut dyn FnMut(&ThresholdPair) -> Result<Decision>) -> Result<ExtractionTranscript> {
    let mut t = ExtractionTranscript {
        queries: Vec::new(),
        recovered: Vec::new(),
    };
    for m in 1..=k {
        let pair = thresholds_for(m, &t.recovered)?;
        let d = oracle(&pair)?;
        let bit = match d {
            Decision::No => 1,
            Decision::Yes => 0,
            Decision::PromiseViolated => {
                return Err(Error::Protocol(format!(
                    "oracle reported a promise violation at query {m} ({} .. {})",
                    pair.alpha, pair.beta
                )))
            }
        };
        t.queries.push((pair, d));
        t.recovered.push(bit);
    }
    Ok(t)
}

/// A dyadic within `epsilon` of the density: the partial sum at the first
/// depth (from `n0`) whose tail bound is at most `epsilon`.
pub fn fgsed(s: &OutcomeSeries, epsilon: &Dyadic, max_depth: u32) -> Result<Dyadic> {
    if *epsilon <= Dyadic::zero() {
        return Err(Error::Config("epsilon must be positive".into()));
    }
    let eps = epsilon.to_rational();
    for m in s.n0.max(1)..=max_depth.max(s.n0) {
        if tail_bound(m) <= eps {
            return Ok(series_value(s, m)?.lower);
        }
    }
    Err(Error::Resource(format!(
        "epsilon {epsilon} needs levels beyond {max_depth}"
    )))
}

/// `16^-n` as an exact rational.
pub fn sixteenth_power(n: u32) -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(16).pow(n))
}
