//! Direct simulation: unbounded reference runs and bounded windows with
//! wall bounce, the latter mirroring what the tiles can express.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};

use super::spec::{MachineKind, Move, TMSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Accepted,
    Rejected,
    Timeout,
}

/// One configuration: tape cells `lo..lo + cells.len()` (everything else
/// blank), head position and control state, all as indices into the
/// machine's state/alphabet lists.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Snapshot {
    pub lo: i64,
    pub cells: Vec<usize>,
    pub head: i64,
    pub state: usize,
}

impl Snapshot {
    pub fn symbol_at(&self, pos: i64) -> usize {
        let i = pos - self.lo;
        if i < 0 || i >= self.cells.len() as i64 {
            0
        } else {
            self.cells[i as usize]
        }
    }

    /// Non-blank portion of the tape as symbol names, blanks inside kept.
    pub fn tape_string(&self, m: &TMSpec) -> String {
        let sym = Machine::symbols(m);
        let first = self.cells.iter().position(|&c| c != 0);
        let last = self.cells.iter().rposition(|&c| c != 0);
        match (first, last) {
            (Some(a), Some(b)) => self.cells[a..=b].iter().map(|&c| sym[c].as_str()).collect(),
            _ => String::new(),
        }
    }

    fn normalise(mut self) -> Snapshot {
        while self.cells.first() == Some(&0) {
            self.cells.remove(0);
            self.lo += 1;
        }
        while self.cells.last() == Some(&0) {
            self.cells.pop();
        }
        if self.cells.is_empty() {
            self.lo = 0;
        }
        self
    }

    fn write(&mut self, pos: i64, sym: usize) {
        if self.cells.is_empty() {
            self.lo = pos;
        }
        while pos < self.lo {
            self.cells.insert(0, 0);
            self.lo -= 1;
        }
        while pos >= self.lo + self.cells.len() as i64 {
            self.cells.push(0);
        }
        self.cells[(pos - self.lo) as usize] = sym;
    }
}

/// Index form of a machine. Symbol 0 is always the blank.
#[derive(Debug, Clone)]
pub struct Machine {
    pub symbols: Vec<String>,
    pub states: Vec<String>,
    pub start: usize,
    pub accept: usize,
    pub reject: usize,
    pub kind: MachineKind,
    /// `(next state, written symbol, move)` per `state * |symbols| + symbol`.
    pub delta: Vec<Vec<(usize, usize, Move)>>,
}

impl Machine {
    pub fn symbols(m: &TMSpec) -> Vec<String> {
        let mut out = vec![m.blank.clone()];
        out.extend(m.alphabet.iter().filter(|s| **s != m.blank).cloned());
        out
    }

    pub fn new(m: &TMSpec) -> Result<Machine> {
        m.validate()?;
        let symbols = Machine::symbols(m);
        let sym_ix: HashMap<&str, usize> = symbols.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let st_ix: HashMap<&str, usize> = m.states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let ns = symbols.len();
        let mut delta = vec![Vec::new(); m.states.len() * ns];
        for ((q, s), branches) in &m.transitions {
            let slot = &mut delta[st_ix[q.as_str()] * ns + sym_ix[s.as_str()]];
            for t in branches {
                slot.push((st_ix[t.next.as_str()], sym_ix[t.write.as_str()], t.mv));
            }
        }
        Ok(Machine {
            start: st_ix[m.start.as_str()],
            accept: st_ix[m.accept.as_str()],
            reject: st_ix[m.reject.as_str()],
            states: m.states.clone(),
            symbols,
            kind: m.kind,
            delta,
        })
    }

    pub fn symbol(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == name)
    }

    pub fn branches(&self, state: usize, sym: usize) -> &[(usize, usize, Move)] {
        &self.delta[state * self.symbols.len() + sym]
    }

    pub fn halted(&self, state: usize, sym: usize) -> bool {
        match self.kind {
            MachineKind::Counter => state == self.accept || state == self.reject,
            MachineKind::Turing => self.branches(state, sym).is_empty(),
        }
    }

    fn initial(&self, input: &[usize]) -> Snapshot {
        Snapshot {
            lo: 0,
            cells: input.to_vec(),
            head: 0,
            state: self.start,
        }
        .normalise()
    }

    /// Successor configurations (empty when halted).
    fn step(&self, c: &Snapshot) -> Vec<Snapshot> {
        let sym = c.symbol_at(c.head);
        if self.halted(c.state, sym) {
            return Vec::new();
        }
        if self.kind == MachineKind::Counter {
            let mut next = c.clone();
            let (zero, one) = (self.symbol("0").unwrap(), self.symbol("1").unwrap());
            let mut pos = c.head;
            loop {
                if next.symbol_at(pos) == one {
                    next.write(pos, zero);
                    pos -= 1;
                } else {
                    next.write(pos, one);
                    break;
                }
            }
            return vec![next.normalise()];
        }
        self.branches(c.state, sym)
            .iter()
            .map(|&(q, w, mv)| {
                let mut next = c.clone();
                next.write(c.head, w);
                next.head += mv.delta();
                next.state = q;
                next.normalise()
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub outcome: Outcome,
    /// Transitions taken along the reported path.
    pub steps: usize,
    /// The reported path: an accepting one when the run accepts, otherwise
    /// the first path in branch order. Ends where that path halts.
    pub trace: Vec<Snapshot>,
}

/// Default cap on the number of distinct configurations explored per step.
pub const DEFAULT_FRONTIER_BUDGET: usize = 1 << 20;

/// Exact simulation on an unbounded tape, exploring every branch; accepted
/// iff some path reaches the accept state within `max_steps` transitions.
pub fn run_reference(m: &TMSpec, input: &[String], max_steps: usize) -> Result<RunResult> {
    run_reference_with_budget(m, input, max_steps, DEFAULT_FRONTIER_BUDGET)
}

pub fn run_reference_with_budget(m: &TMSpec, input: &[String], max_steps: usize, budget: usize) -> Result<RunResult> {
    if max_steps == 0 {
        return Err(Error::Config("max_steps must be at least 1".into()));
    }
    let mach = Machine::new(m)?;
    let mut word = Vec::with_capacity(input.len());
    for s in input {
        word.push(
            mach.symbol(s)
                .ok_or_else(|| Error::Config(format!("input symbol {s:?} not in alphabet")))?,
        );
    }
    // arena of (snapshot, parent)
    let mut arena: Vec<(Snapshot, usize)> = vec![(mach.initial(&word), usize::MAX)];
    let mut frontier = vec![0usize];
    let mut halted_paths: Vec<usize> = Vec::new();
    let path_to = |arena: &Vec<(Snapshot, usize)>, mut i: usize| {
        let mut out = Vec::new();
        while i != usize::MAX {
            out.push(arena[i].0.clone());
            i = arena[i].1;
        }
        out.reverse();
        out
    };
    if arena[0].0.state == mach.accept {
        return Ok(RunResult {
            outcome: Outcome::Accepted,
            steps: 0,
            trace: path_to(&arena, 0),
        });
    }
    for step in 1..=max_steps {
        let mut next = Vec::new();
        let mut seen = HashSet::new();
        for &i in &frontier {
            let succ = mach.step(&arena[i].0);
            if succ.is_empty() {
                halted_paths.push(i);
                continue;
            }
            for s in succ {
                if seen.insert(s.clone()) {
                    let accepted = s.state == mach.accept;
                    arena.push((s, i));
                    let id = arena.len() - 1;
                    if accepted {
                        return Ok(RunResult {
                            outcome: Outcome::Accepted,
                            steps: step,
                            trace: path_to(&arena, id),
                        });
                    }
                    next.push(id);
                }
            }
        }
        if next.len() > budget {
            return Err(Error::Resource(format!(
                "{} configurations at step {step} exceed the budget of {budget}",
                next.len()
            )));
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    let outcome = if frontier.is_empty() {
        Outcome::Rejected
    } else {
        Outcome::Timeout
    };
    let report = frontier.first().or(halted_paths.first()).copied().unwrap_or(0);
    let trace = path_to(&arena, report);
    Ok(RunResult {
        outcome,
        steps: trace.len() - 1,
        trace,
    })
}

/// Content of one cell of a bounded window row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellContent {
    pub symbol: usize,
    pub state: Option<usize>,
}

pub type WindowRow = Vec<CellContent>;

fn window_successors(mach: &Machine, row: &WindowRow) -> Vec<WindowRow> {
    let head = row.iter().position(|c| c.state.is_some()).expect("row carries a head");
    let q = row[head].state.unwrap();
    let sym = row[head].symbol;
    if mach.halted(q, sym) {
        return vec![row.clone()];
    }
    let width = row.len();
    if mach.kind == MachineKind::Counter {
        let (zero, one) = (mach.symbol("0").unwrap(), mach.symbol("1").unwrap());
        let mut next = row.clone();
        let mut pos = head as i64;
        while pos >= 0 {
            let c = &mut next[pos as usize];
            if c.symbol == one {
                c.symbol = zero;
                pos -= 1;
            } else {
                c.symbol = one;
                break;
            }
        }
        return vec![next];
    }
    let mut out = Vec::new();
    for &(q2, w, mv) in mach.branches(q, sym) {
        let mut next = row.clone();
        next[head] = CellContent { symbol: w, state: None };
        let target = head as i64 + mv.delta();
        let target = if target < 0 || target >= width as i64 {
            head
        } else {
            target as usize
        };
        next[target].state = Some(q2);
        if !out.contains(&next) {
            out.push(next);
        }
    }
    out
}

/// All distinct computation histories on a tape of `width` cells with the
/// head starting at `head` on a blank tape, `steps` transitions long
/// (`steps + 1` rows). Moves past either end leave the head in place; halted
/// configurations are copied forward.
pub fn window_paths(m: &TMSpec, width: usize, head: usize, steps: usize, budget: usize) -> Result<Vec<Vec<WindowRow>>> {
    let mach = Machine::new(m)?;
    if head >= width {
        return Err(Error::Config("head outside the window".into()));
    }
    let mut first = vec![CellContent { symbol: 0, state: None }; width];
    first[head].state = Some(mach.start);
    let mut paths = vec![vec![first]];
    for _ in 0..steps {
        let mut next = Vec::new();
        for p in &paths {
            for row in window_successors(&mach, p.last().unwrap()) {
                let mut q = p.clone();
                q.push(row);
                next.push(q);
                if next.len() > budget {
                    return Err(Error::Resource(format!("more than {budget} window paths")));
                }
            }
        }
        paths = next;
    }
    Ok(paths)
}

/// Outcome of the bounded window run: accepted iff some history shows the
/// accept state in its final row.
pub fn run_window(m: &TMSpec, width: usize, head: usize, steps: usize) -> Result<Outcome> {
    let mach = Machine::new(m)?;
    let mut first = vec![CellContent { symbol: 0, state: None }; width];
    if head >= width {
        return Err(Error::Config("head outside the window".into()));
    }
    first[head].state = Some(mach.start);
    let mut rows: HashSet<WindowRow> = HashSet::from([first]);
    for _ in 0..steps {
        let mut next = HashSet::new();
        for r in &rows {
            next.extend(window_successors(&mach, r));
        }
        if next.len() > DEFAULT_FRONTIER_BUDGET {
            return Err(Error::Resource("window frontier exceeds budget".into()));
        }
        rows = next;
    }
    let state_of = |r: &WindowRow| r.iter().find_map(|c| c.state).unwrap();
    if rows.iter().any(|r| state_of(r) == mach.accept) {
        Ok(Outcome::Accepted)
    } else if rows.iter().all(|r| {
        let h = r.iter().find(|c| c.state.is_some()).unwrap();
        mach.halted(h.state.unwrap(), h.symbol)
    }) {
        Ok(Outcome::Rejected)
    } else {
        Ok(Outcome::Timeout)
    }
}

#[cfg(test)]
mod tests {
    use super::super::spec::{always_accept, builtin_counter, guess_one, parity, parse_input};
    use super::*;

    #[test]
    fn always_accept_takes_one_step() {
        let r = run_reference(&always_accept(), &parse_input("0110"), 10).unwrap();
        assert_eq!(r.outcome, Outcome::Accepted);
        assert_eq!(r.steps, 1);
    }

    #[test]
    fn counter_tape_after_five_steps() {
        let m = builtin_counter();
        let r = run_reference(&m, &[], 5).unwrap();
        assert_eq!(r.outcome, Outcome::Timeout);
        assert_eq!(r.trace[0].tape_string(&m), "");
        assert_eq!(r.trace[5].tape_string(&m), "101");
        let r = run_reference(&m, &[], 16).unwrap();
        assert_eq!(r.trace[16].tape_string(&m), "10000");
        assert_eq!(r.trace[16].cells.len(), 5);
    }

    #[test]
    fn nondeterministic_branch_accepts() {
        let r = run_reference(&guess_one(), &parse_input("0010"), 10).unwrap();
        assert_eq!(r.outcome, Outcome::Accepted);
        let r = run_reference(&guess_one(), &parse_input("000"), 10).unwrap();
        assert_eq!(r.outcome, Outcome::Rejected);
    }

    #[test]
    fn parity_results() {
        for (w, want) in [
            ("", Outcome::Rejected),
            ("1", Outcome::Accepted),
            ("1011", Outcome::Accepted),
            ("11", Outcome::Rejected),
        ] {
            assert_eq!(
                run_reference(&parity(), &parse_input(w), 20).unwrap().outcome,
                want,
                "{w}"
            );
        }
        assert_eq!(
            run_reference(&parity(), &parse_input("1111"), 2).unwrap().outcome,
            Outcome::Timeout
        );
    }

    #[test]
    fn window_bounce_keeps_head_inside() {
        let paths = window_paths(&parity(), 3, 2, 4, 10).unwrap();
        assert_eq!(paths.len(), 1);
        for row in &paths[0] {
            assert_eq!(row.iter().filter(|c| c.state.is_some()).count(), 1);
        }
    }
}
