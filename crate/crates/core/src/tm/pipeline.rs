//! Instance enumeration, the writer prefix used inside squares and the
//! composite machine that derives the instance from the counter output.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

use super::spec::{MachineKind, Move, TMSpec};

/// Maps levels `n >= n0` to binary strings, length first then
/// lexicographic, the empty string at `n = n0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InstanceIndexer {
    pub n0: u32,
}

impl Default for InstanceIndexer {
    fn default() -> Self {
        InstanceIndexer { n0: 1 }
    }
}

impl InstanceIndexer {
    pub fn new(n0: u32) -> Self {
        InstanceIndexer { n0 }
    }

    /// The `i`-th string (0-based): binary of `i + 1` without its leading 1.
    pub fn string_at(i: u64) -> String {
        let b = format!("{:b}", i + 1);
        b[1..].to_string()
    }

    /// `x_n`, or `None` below `n0`.
    pub fn instance(&self, n: u32) -> Option<String> {
        (n >= self.n0).then(|| Self::string_at((n - self.n0) as u64))
    }

    /// Inverse of [`instance`](Self::instance).
    pub fn level_of(&self, x: &str) -> Result<u32> {
        if x.chars().any(|c| c != '0' && c != '1') || x.len() > 40 {
            return Err(Error::Config(format!("{x:?} is not a short binary string")));
        }
        let i = u64::from_str_radix(&format!("1{x}"), 2).unwrap() - 1;
        Ok(self.n0 + i as u32)
    }
}

fn add_symbols(m: &mut TMSpec, syms: &[&str]) {
    for s in syms {
        if !m.alphabet.iter().any(|a| a == s) {
            m.alphabet.push(s.to_string());
        }
    }
}

/// `m` preceded by a prefix that writes `x` from the head position to the
/// right and returns to where it started, entering `m`'s start state there.
/// Takes `2|x|` steps; for empty `x` returns `m` unchanged.
pub fn specialise(m: &TMSpec, x: &str) -> Result<TMSpec> {
    if x.chars().any(|c| c != '0' && c != '1') {
        return Err(Error::Config(format!("instance {x:?} is not binary")));
    }
    if m.kind == MachineKind::Counter {
        return Err(Error::Compile("the counter takes no input".into()));
    }
    let k = x.len();
    if k == 0 {
        return Ok(m.clone());
    }
    let mut out = m.clone();
    out.name = format!("{}[{x}]", m.name);
    let writer: Vec<String> = (0..k).map(|i| format!("w.{i}")).collect();
    let back: Vec<String> = (0..k).map(|i| format!("b.{i}")).collect();
    for q in writer.iter().chain(&back) {
        if m.states.contains(q) {
            return Err(Error::Compile(format!("state {q:?} collides with the instance writer")));
        }
        out.states.push(q.clone());
    }
    add_symbols(&mut out, &["0", "1"]);
    let alphabet = out.alphabet.clone();
    for (i, bit) in x.chars().enumerate() {
        let next = if i + 1 < k { &writer[i + 1] } else { &back[0] };
        for s in &alphabet {
            out.add(&writer[i], s, next, &bit.to_string(), Move::R);
        }
    }
    for j in 0..k {
        let next = if j + 1 < k { &back[j + 1] } else { &m.start };
        for s in &alphabet {
            out.add(&back[j], s, next, s, Move::L);
        }
    }
    out.start = writer[0].clone();
    out.validate()?;
    Ok(out)
}

/// Input handed to the composite machine at level `n`: the counter's value
/// `2^n` in binary.
pub fn pipeline_input(n: u32) -> Vec<String> {
    std::iter::once("1".to_string())
        .chain((0..n).map(|_| "0".to_string()))
        .collect()
}

/// One machine that reads `2^n` in binary, computes `x_n` for `indexer`
/// and runs `m` on it. Below `n0` it rejects (unsupported level).
pub fn compose_pipeline(m: &TMSpec, indexer: InstanceIndexer) -> Result<TMSpec> {
    if m.kind == MachineKind::Counter {
        return Err(Error::Compile("cannot compose the counter as the main machine".into()));
    }
    m.validate()?;
    const MARK: &str = "$";
    const DONE: &str = "X";
    for s in [MARK, DONE] {
        if m.alphabet.iter().any(|a| a == s) {
            return Err(Error::Compile(format!("symbol {s:?} collides with the index stage")));
        }
    }
    if m.blank == "0" || m.blank == "1" {
        return Err(Error::Compile("blank collides with the index stage's bits".into()));
    }
    let mq = |q: &str| format!("m.{q}");
    let n0 = indexer.n0 as usize;
    let skip: Vec<String> = (0..n0).map(|i| format!("p.skip.{i}")).collect();
    let mut states: Vec<String> = ["p.start", "p.init", "p.back"].iter().map(|s| s.to_string()).collect();
    states.extend(skip.iter().cloned());
    states.extend(
        ["p.find", "p.left", "p.inc", "p.ret", "p.clean", "p.tomsb", "p.strip"]
            .iter()
            .map(|s| s.to_string()),
    );
    states.extend(m.states.iter().map(|q| mq(q)));
    let mut alphabet = m.alphabet.clone();
    for s in ["0", "1", MARK, DONE] {
        if !alphabet.iter().any(|a| a == s) {
            alphabet.push(s.to_string());
        }
    }
    let state_refs: Vec<&str> = states.iter().map(String::as_str).collect();
    let alpha_refs: Vec<&str> = alphabet.iter().map(String::as_str).collect();
    let (acc, rej) = (mq(&m.accept), mq(&m.reject));
    let mut p = TMSpec::new(
        &format!("pipeline-{}", m.name),
        &state_refs,
        &alpha_refs,
        &m.blank,
        "p.start",
        &acc,
        &rej,
    );
    p.branching = m.branching.max(1);
    let b = m.blank.as_str();
    let first = skip.first().map(String::as_str).unwrap_or("p.find");
    p.add("p.start", "1", "p.init", MARK, Move::L)
        .add("p.init", b, "p.back", "1", Move::R)
        .add("p.back", MARK, first, MARK, Move::R);
    for (i, q) in skip.iter().enumerate() {
        let next = skip.get(i + 1).map(String::as_str).unwrap_or("p.find");
        p.add(q, "0", next, DONE, Move::R).add(q, b, &rej, b, Move::S);
    }
    p.add("p.find", DONE, "p.find", DONE, Move::R)
        .add("p.find", "0", "p.left", DONE, Move::L)
        .add("p.find", b, "p.clean", b, Move::L)
        .add("p.left", DONE, "p.left", DONE, Move::L)
        .add("p.left", MARK, "p.inc", MARK, Move::L)
        .add("p.inc", "1", "p.inc", "0", Move::L)
        .add("p.inc", "0", "p.ret", "1", Move::R)
        .add("p.inc", b, "p.ret", "1", Move::R)
        .add("p.ret", "0", "p.ret", "0", Move::R)
        .add("p.ret", "1", "p.ret", "1", Move::R)
        .add("p.ret", MARK, "p.find", MARK, Move::R)
        .add("p.clean", DONE, "p.clean", b, Move::L)
        .add("p.clean", MARK, "p.tomsb", b, Move::L)
        .add("p.tomsb", "0", "p.tomsb", "0", Move::L)
        .add("p.tomsb", "1", "p.tomsb", "1", Move::L)
        .add("p.tomsb", b, "p.strip", b, Move::R)
        .add("p.strip", "1", &mq(&m.start), b, Move::R);
    for ((q, s), branches) in &m.transitions {
        for t in branches {
            p.add(&mq(q), s, &mq(&t.next), &t.write, t.mv);
        }
    }
    p.validate().map_err(|e| Error::Compile(e.to_string()))?;
    let used: BTreeSet<&String> = p.transitions.keys().map(|(q, _)| q).collect();
    debug_assert!(used.iter().all(|q| p.states.contains(q)));
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::super::sim::{run_reference, Outcome};
    use super::super::spec::{always_accept, parity, parse_input};
    use super::*;

    #[test]
    fn enumeration_order() {
        let ix = InstanceIndexer::default();
        let got: Vec<_> = (1..=7).map(|n| ix.instance(n).unwrap()).collect();
        assert_eq!(got, ["", "0", "1", "00", "01", "10", "11"]);
        assert_eq!(ix.instance(0), None);
        for n in 1..40 {
            assert_eq!(ix.level_of(&ix.instance(n).unwrap()).unwrap(), n);
        }
    }

    #[test]
    fn writer_prefix_takes_two_steps_per_bit() {
        let m = specialise(&always_accept(), "10").unwrap();
        let r = run_reference(&m, &[], 20).unwrap();
        assert_eq!(r.outcome, Outcome::Accepted);
        assert_eq!(r.steps, 5);
        assert_eq!(r.trace[4].head, 0);
        assert_eq!(r.trace[4].tape_string(&m), "10");
    }

    #[test]
    fn pipeline_matches_direct_runs() {
        let ix = InstanceIndexer::default();
        let p = compose_pipeline(&parity(), ix).unwrap();
        for n in 1..=8 {
            let x = ix.instance(n).unwrap();
            let direct = run_reference(&parity(), &parse_input(&x), 100).unwrap().outcome;
            let piped = run_reference(&p, &pipeline_input(n), 2000).unwrap().outcome;
            assert_eq!(piped, direct, "n={n} x={x}");
        }
        assert_eq!(
            run_reference(&p, &pipeline_input(0), 100).unwrap().outcome,
            Outcome::Rejected
        );
    }

    #[test]
    fn pipeline_text_round_trip() {
        let p = compose_pipeline(&parity(), InstanceIndexer::new(2)).unwrap();
        assert_eq!(TMSpec::parse(&p.to_text()).unwrap(), p);
    }

    #[test]
    fn colliding_stage_symbols() {
        let mut m = parity();
        m.alphabet.push("X".into());
        assert!(matches!(
            compose_pipeline(&m, InstanceIndexer::default()),
            Err(Error::Compile(_))
        ));
    }
}
