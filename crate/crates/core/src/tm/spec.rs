//! Turing machine descriptions and their text format.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::{parse_err, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    L,
    R,
    S,
}

impl Move {
    pub fn delta(self) -> i64 {
        match self {
            Move::L => -1,
            Move::R => 1,
            Move::S => 0,
        }
    }

    fn parse(s: &str) -> Option<Move> {
        match s {
            "L" => Some(Move::L),
            "R" => Some(Move::R),
            "S" => Some(Move::S),
            _ => None,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Move::L => "L",
            Move::R => "R",
            Move::S => "S",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MachineKind {
    /// Ordinary single-tape machine.
    Turing,
    /// Row-parallel binary counter: each step adds one to the number whose
    /// least significant bit sits under the head, carries rippling left.
    Counter,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transition {
    pub next: String,
    pub write: String,
    pub mv: Move,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TMSpec {
    pub name: String,
    pub kind: MachineKind,
    pub states: Vec<String>,
    pub alphabet: Vec<String>,
    pub blank: String,
    pub start: String,
    pub accept: String,
    pub reject: String,
    /// Declared bound on the number of branches per `(state, symbol)`.
    pub branching: usize,
    pub transitions: BTreeMap<(String, String), Vec<Transition>>,
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && !s.contains(|c: char| c.is_whitespace() || ",:@;>#".contains(c))
}

impl TMSpec {
    /// A machine with the given control states and symbols and no
    /// transitions. The alphabet must contain `blank`.
    pub fn new(
        name: &str,
        states: &[&str],
        alphabet: &[&str],
        blank: &str,
        start: &str,
        accept: &str,
        reject: &str,
    ) -> TMSpec {
        TMSpec {
            name: name.to_string(),
            kind: MachineKind::Turing,
            states: states.iter().map(|s| s.to_string()).collect(),
            alphabet: alphabet.iter().map(|s| s.to_string()).collect(),
            blank: blank.to_string(),
            start: start.to_string(),
            accept: accept.to_string(),
            reject: reject.to_string(),
            branching: 2,
            transitions: BTreeMap::new(),
        }
    }

    /// Adds one branch `q, s -> next, write, mv`.
    pub fn add(&mut self, q: &str, s: &str, next: &str, write: &str, mv: Move) -> &mut Self {
        self.transitions
            .entry((q.to_string(), s.to_string()))
            .or_default()
            .push(Transition {
                next: next.to_string(),
                write: write.to_string(),
                mv,
            });
        self
    }

    pub fn deterministic(&self) -> bool {
        self.transitions.values().all(|t| t.len() <= 1)
    }

    pub fn branches(&self, q: &str, s: &str) -> &[Transition] {
        self.transitions
            .get(&(q.to_string(), s.to_string()))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn validate(&self) -> Result<()> {
        let states: BTreeSet<&str> = self.states.iter().map(String::as_str).collect();
        let symbols: BTreeSet<&str> = self.alphabet.iter().map(String::as_str).collect();
        if states.len() != self.states.len() || symbols.len() != self.alphabet.len() {
            return Err(Error::Config("duplicate state or symbol".into()));
        }
        for name in self.states.iter().chain(&self.alphabet) {
            if !valid_name(name) {
                return Err(Error::Config(format!("invalid name {name:?}")));
            }
        }
        for (what, q) in [
            ("start", &self.start),
            ("accept", &self.accept),
            ("reject", &self.reject),
        ] {
            if !states.contains(q.as_str()) {
                return Err(Error::Config(format!("{what} state {q:?} not declared")));
            }
        }
        if self.accept == self.reject {
            return Err(Error::Config("accept and reject must differ".into()));
        }
        if !symbols.contains(self.blank.as_str()) {
            return Err(Error::Config(format!("blank {:?} not in alphabet", self.blank)));
        }
        if self.kind == MachineKind::Counter {
            for s in ["0", "1"] {
                if !symbols.contains(s) {
                    return Err(Error::Config("counter machines need symbols 0 and 1".into()));
                }
            }
            if !self.transitions.is_empty() {
                return Err(Error::Config("counter machines take no transitions".into()));
            }
        }
        for ((q, s), branches) in &self.transitions {
            if !states.contains(q.as_str()) || !symbols.contains(s.as_str()) {
                return Err(Error::Config(format!("transition from unknown ({q}, {s})")));
            }
            if *q == self.accept || *q == self.reject {
                return Err(Error::Config(format!("halting state {q} has outgoing transitions")));
            }
            if branches.len() > self.branching {
                return Err(Error::Config(format!(
                    "({q}, {s}) has {} branches, declared bound is {}",
                    branches.len(),
                    self.branching
                )));
            }
            for t in branches {
                if !states.contains(t.next.as_str()) || !symbols.contains(t.write.as_str()) {
                    return Err(Error::Config(format!(
                        "transition to unknown ({}, {})",
                        t.next, t.write
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<TMSpec> {
        let mut spec = TMSpec::new("machine", &[], &[], "_", "", "", "");
        spec.blank.clear();
        let mut seen_branching = false;
        for (i, raw) in text.lines().enumerate() {
            let ln = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some((lhs, rhs)) = line.split_once("->") {
                let (q, s) = pair(lhs).ok_or_else(|| parse_err(ln, "expected `q,s` before ->"))?;
                let parts: Vec<&str> = rhs.split(',').map(str::trim).collect();
                if parts.len() != 3 {
                    return Err(parse_err(ln, "expected `q',s',{L|R|S}` after ->"));
                }
                let mv = Move::parse(parts[2]).ok_or_else(|| parse_err(ln, "move must be L, R or S"))?;
                spec.add(&q, &s, parts[0], parts[1], mv);
                continue;
            }
            let (key, value) = line
                .split_once(':')
                .ok_or_else(|| parse_err(ln, "expected `key: value` or a transition"))?;
            let value = value.trim();
            let list = || -> Vec<String> {
                value
                    .split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|s| !s.is_empty())
                    .map(str::to_string)
                    .collect()
            };
            match key.trim() {
                "name" => spec.name = value.to_string(),
                "kind" => {
                    spec.kind = match value {
                        "turing" => MachineKind::Turing,
                        "counter" => MachineKind::Counter,
                        other => return Err(parse_err(ln, format!("unknown kind {other:?}"))),
                    }
                }
                "states" => spec.states = list(),
                "alphabet" => spec.alphabet = list(),
                "blank" => spec.blank = value.to_string(),
                "start" => spec.start = value.to_string(),
                "accept" => spec.accept = value.to_string(),
                "reject" => spec.reject = value.to_string(),
                "branching" => {
                    spec.branching = value
                        .parse()
                        .map_err(|_| parse_err(ln, "branching must be a positive integer"))?;
                    seen_branching = true;
                }
                other => return Err(parse_err(ln, format!("unknown key {other:?}"))),
            }
        }
        if spec.blank.is_empty() {
            spec.blank = "_".to_string();
        }
        if !seen_branching {
            spec.branching = spec.transitions.values().map(Vec::len).max().unwrap_or(1).max(2);
        }
        spec.validate().map_err(|e| parse_err(0, e.to_string()))?;
        Ok(spec)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "name: {}", self.name);
        if self.kind == MachineKind::Counter {
            out.push_str("kind: counter\n");
        }
        let _ = writeln!(out, "states: {}", self.states.join(" "));
        let _ = writeln!(out, "alphabet: {}", self.alphabet.join(" "));
        let _ = writeln!(out, "blank: {}", self.blank);
        let _ = writeln!(out, "start: {}", self.start);
        let _ = writeln!(out, "accept: {}", self.accept);
        let _ = writeln!(out, "reject: {}", self.reject);
        let _ = writeln!(out, "branching: {}", self.branching);
        for ((q, s), branches) in &self.transitions {
            for t in branches {
                let _ = writeln!(out, "{q},{s} -> {},{},{}", t.next, t.write, t.mv.as_str());
            }
        }
        out
    }
}

fn pair(s: &str) -> Option<(String, String)> {
    let (a, b) = s.split_once(',')?;
    let (a, b) = (a.trim(), b.trim());
    (!a.is_empty() && !b.is_empty()).then(|| (a.to_string(), b.to_string()))
}

/// Splits an input word into symbols: whitespace or comma separated when
/// either occurs, otherwise one symbol per character.
pub fn parse_input(input: &str) -> Vec<String> {
    if input.contains(|c: char| c.is_whitespace() || c == ',') {
        input
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(str::to_string)
            .collect()
    } else {
        input.chars().map(|c| c.to_string()).collect()
    }
}

/// The row-parallel binary counter.
pub fn builtin_counter() -> TMSpec {
    let mut m = TMSpec::new(
        "counter",
        &["count", "done", "fail"],
        &["_", "0", "1"],
        "_",
        "count",
        "done",
        "fail",
    );
    m.kind = MachineKind::Counter;
    m.branching = 1;
    m
}

/// Accepts on its first step whatever it reads.
pub fn always_accept() -> TMSpec {
    let mut m = TMSpec::new("accept", &["q", "yes", "no"], &["_", "0", "1"], "_", "q", "yes", "no");
    for s in ["_", "0", "1"] {
        m.add("q", s, "yes", s, Move::S);
    }
    m
}

/// Rejects on its first step whatever it reads.
pub fn always_reject() -> TMSpec {
    let mut m = TMSpec::new("reject", &["q", "yes", "no"], &["_", "0", "1"], "_", "q", "yes", "no");
    for s in ["_", "0", "1"] {
        m.add("q", s, "no", s, Move::S);
    }
    m
}

/// Accepts iff the input holds an odd number of 1s.
pub fn parity() -> TMSpec {
    let mut m = TMSpec::new(
        "parity",
        &["even", "odd", "yes", "no"],
        &["_", "0", "1"],
        "_",
        "even",
        "yes",
        "no",
    );
    m.add("even", "0", "even", "0", Move::R)
        .add("even", "1", "odd", "1", Move::R)
        .add("odd", "0", "odd", "0", Move::R)
        .add("odd", "1", "even", "1", Move::R)
        .add("even", "_", "no", "_", Move::S)
        .add("odd", "_", "yes", "_", Move::S);
    m
}

/// Accepts iff the input ends in 1.
pub fn ends_in_one() -> TMSpec {
    let mut m = TMSpec::new(
        "ends1",
        &["scan", "back", "yes", "no"],
        &["_", "0", "1"],
        "_",
        "scan",
        "yes",
        "no",
    );
    m.add("scan", "0", "scan", "0", Move::R)
        .add("scan", "1", "scan", "1", Move::R)
        .add("scan", "_", "back", "_", Move::L)
        .add("back", "1", "yes", "1", Move::S)
        .add("back", "0", "no", "0", Move::S)
        .add("back", "_", "no", "_", Move::S);
    m
}

/// Nondeterministically guesses a position holding 1; accepts iff one
/// exists.
pub fn guess_one() -> TMSpec {
    let mut m = TMSpec::new(
        "guess1",
        &["scan", "yes", "no"],
        &["_", "0", "1"],
        "_",
        "scan",
        "yes",
        "no",
    );
    m.add("scan", "0", "scan", "0", Move::R)
        .add("scan", "1", "scan", "1", Move::R)
        .add("scan", "1", "yes", "1", Move::S)
        .add("scan", "_", "no", "_", Move::S);
    m
}

/// Writes a 1, steps right and left again, then accepts. Exercises moves in
/// both directions on an otherwise blank tape.
pub fn wiggle() -> TMSpec {
    let mut m = TMSpec::new(
        "wiggle",
        &["a", "b", "c", "yes", "no"],
        &["_", "0", "1"],
        "_",
        "a",
        "yes",
        "no",
    );
    for s in ["_", "0", "1"] {
        m.add("a", s, "b", "1", Move::R);
        m.add("b", s, "c", "0", Move::L);
        m.add("c", s, "yes", s, Move::L);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        for m in [parity(), guess_one(), builtin_counter(), wiggle()] {
            let back = TMSpec::parse(&m.to_text()).unwrap();
            assert_eq!(back, m);
        }
    }

    #[test]
    fn parse_reports_unknown_move() {
        let text = "states: a b c\nalphabet: _ 1\nstart: a\naccept: b\nreject: c\na,_ -> b,1,X\n";
        assert!(matches!(TMSpec::parse(text), Err(Error::Parse { line: 6, .. })));
    }

    #[test]
    fn halting_states_have_no_transitions() {
        let mut m = parity();
        m.add("yes", "0", "no", "0", Move::S);
        assert!(m.validate().is_err());
    }

    #[test]
    fn determinism_flag() {
        assert!(parity().deterministic());
        assert!(!guess_one().deterministic());
    }

    #[test]
    fn input_splitting() {
        assert_eq!(parse_input("101"), vec!["1", "0", "1"]);
        assert_eq!(parse_input("ab, c"), vec!["ab", "c"]);
    }
}
