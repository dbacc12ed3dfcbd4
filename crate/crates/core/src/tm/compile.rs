//! Turing machines as Wang tiles on the contracted free-cell lattice of a
//! Robinson square.
//!
//! A level-n square hosts `2^n + 1` tape cells (the free columns) and
//! `2^n + 1` time rows (the free rows). The compiled layer is laid out on a
//! framed grid of `(2^n + 3)` x `(2^n + 3)` tiles: row 0 is the border's
//! bottom edge emitting `s0` and a single `s0q0` at the centre, columns 0 and
//! `2^n + 2` are the side walls, the top row is the border's top edge. The
//! south edge of a TM tile in row `t` carries the configuration at time
//! `t - 1`, its north edge the configuration one step later.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::wang::{Configuration, EdgeLabel, Tile, TileSet};

use super::sim::{CellContent, Machine, WindowRow};
use super::spec::{MachineKind, Move, TMSpec};

pub const BLANK_TOKEN: &str = "s0";
pub const INIT_TOKEN: &str = "s0q0";

const RESERVED: [&str; 2] = [BLANK_TOKEN, INIT_TOKEN];

const GAP: &str = "-";
const CARRY: &str = "c";
const LEFT_WALL: &str = "[";
const RIGHT_WALL: &str = "]";
const WALL_V: &str = "@w";
const OUTER: &str = "@x";
const BOTTOM_L: &str = "@bl";
const BOTTOM_R: &str = "@br";
const TOP: &str = "@tb";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TileRole {
    /// Interior tile executing one step at one tape cell.
    Cell,
    /// Bottom edge left or right of the centre, emits `s0`.
    Bottom,
    /// Bottom edge centre, emits `s0q0`.
    Centre,
    LeftWall,
    RightWall,
    /// Top edge: the border tiles above the last computation row.
    Top,
    Corner,
}

#[derive(Debug, Clone)]
pub struct CompiledMachine {
    pub spec: TMSpec,
    pub machine: Machine,
    pub tiles: TileSet,
    pub roles: Vec<TileRole>,
    /// Tiles whose north edge carries the head in a state other than accept.
    pub reject_marker: Vec<bool>,
    /// Smallest level the composite machine is claimed correct at.
    pub n0: u32,
    token_of: Vec<Vec<String>>,
    by_south: HashMap<u32, Vec<usize>>,
    top_by_south: HashMap<u32, usize>,
    bottom: usize,
    bottom_r: usize,
    centre: usize,
    corners: [usize; 4],
    left_wall: usize,
    right_wall: usize,
    left_code: u32,
    right_code: u32,
}

/// Edge token of one tape cell.
pub fn content_token(m: &Machine, c: CellContent) -> String {
    match c.state {
        None if c.symbol == 0 => BLANK_TOKEN.to_string(),
        None => m.symbols[c.symbol].clone(),
        Some(q) if c.symbol == 0 && q == m.start => INIT_TOKEN.to_string(),
        Some(q) => format!("{}@{}", token_symbol(m, c.symbol), m.states[q]),
    }
}

fn token_symbol(m: &Machine, s: usize) -> &str {
    if s == 0 {
        BLANK_TOKEN
    } else {
        &m.symbols[s]
    }
}

struct Builder {
    tiles: Vec<Tile>,
    roles: Vec<TileRole>,
    seen: HashSet<[String; 4]>,
}

impl Builder {
    fn push(&mut self, role: TileRole, n: &str, e: &str, s: &str, w: &str) -> usize {
        let key = [n.to_string(), e.to_string(), s.to_string(), w.to_string()];
        if !self.seen.insert(key) {
            return self
                .tiles
                .iter()
                .position(|t| {
                    t.north.token(0) == n && t.east.token(0) == e && t.south.token(0) == s && t.west.token(0) == w
                })
                .unwrap();
        }
        let id = self.tiles.len();
        self.tiles.push(Tile::new(
            id,
            EdgeLabel::single(n),
            EdgeLabel::single(e),
            EdgeLabel::single(s),
            EdgeLabel::single(w),
        ));
        self.roles.push(role);
        id
    }
}

/// Compiles `m` with `n0 = 1`.
pub fn compile(m: &TMSpec) -> Result<CompiledMachine> {
    compile_with_n0(m, 1)
}

pub fn compile_with_n0(m: &TMSpec, n0: u32) -> Result<CompiledMachine> {
    for name in m.states.iter().chain(&m.alphabet) {
        if RESERVED.contains(&name.as_str()) {
            return Err(Error::Compile(format!("{name:?} is a reserved tile token")));
        }
    }
    let mach = Machine::new(m).map_err(|e| Error::Compile(e.to_string()))?;
    let ns = mach.symbols.len();
    let contents: Vec<CellContent> = (0..ns)
        .map(|s| CellContent { symbol: s, state: None })
        .chain((0..mach.states.len()).flat_map(|q| {
            (0..ns).map(move |s| CellContent {
                symbol: s,
                state: Some(q),
            })
        }))
        .collect();
    let tok = |c: CellContent| content_token(&mach, c);
    let mut b = Builder {
        tiles: Vec::new(),
        roles: Vec::new(),
        seen: HashSet::new(),
    };
    // (left wall?, right wall?)
    let walls = [(false, false), (true, false), (false, true)];
    for &(wl, wr) in &walls {
        let west = if wl { LEFT_WALL } else { GAP };
        let east = if wr { RIGHT_WALL } else { GAP };
        if mach.kind == MachineKind::Counter {
            counter_tiles(&mach, &mut b, wl, wr);
            continue;
        }
        for s in 0..ns {
            let plain = tok(CellContent { symbol: s, state: None });
            b.push(TileRole::Cell, &plain, east, &plain, west);
            for q in 0..mach.states.len() {
                let arrived = tok(CellContent {
                    symbol: s,
                    state: Some(q),
                });
                if !wl {
                    b.push(TileRole::Cell, &arrived, east, &plain, &format!(">{}", mach.states[q]));
                }
                if !wr {
                    b.push(TileRole::Cell, &arrived, &format!("<{}", mach.states[q]), &plain, west);
                }
                if mach.halted(q, s) {
                    b.push(TileRole::Cell, &arrived, east, &arrived, west);
                    continue;
                }
                for &(q2, w, mv) in mach.branches(q, s) {
                    let stay = tok(CellContent {
                        symbol: w,
                        state: Some(q2),
                    });
                    let left = tok(CellContent { symbol: w, state: None });
                    match mv {
                        Move::S => b.push(TileRole::Cell, &stay, east, &arrived, west),
                        Move::R if wr => b.push(TileRole::Cell, &stay, east, &arrived, west),
                        Move::R => b.push(TileRole::Cell, &left, &format!(">{}", mach.states[q2]), &arrived, west),
                        Move::L if wl => b.push(TileRole::Cell, &stay, east, &arrived, west),
                        Move::L => b.push(TileRole::Cell, &left, east, &arrived, &format!("<{}", mach.states[q2])),
                    };
                }
            }
        }
    }
    let blank = BLANK_TOKEN;
    let bottom = b.push(TileRole::Bottom, blank, BOTTOM_L, OUTER, BOTTOM_L);
    let bottom_r = b.push(TileRole::Bottom, blank, BOTTOM_R, OUTER, BOTTOM_R);
    let centre = b.push(TileRole::Centre, INIT_TOKEN, BOTTOM_R, OUTER, BOTTOM_L);
    let left_wall = b.push(TileRole::LeftWall, WALL_V, LEFT_WALL, WALL_V, OUTER);
    let right_wall = b.push(TileRole::RightWall, WALL_V, OUTER, WALL_V, RIGHT_WALL);
    let corners = [
        b.push(TileRole::Corner, WALL_V, BOTTOM_L, OUTER, OUTER),
        b.push(TileRole::Corner, WALL_V, OUTER, OUTER, BOTTOM_R),
        b.push(TileRole::Corner, OUTER, TOP, WALL_V, OUTER),
        b.push(TileRole::Corner, OUTER, OUTER, WALL_V, TOP),
    ];
    let mut top_tokens: Vec<String> = contents.iter().map(|&c| tok(c)).collect();
    top_tokens.dedup();
    for t in &top_tokens {
        b.push(TileRole::Top, OUTER, TOP, t, TOP);
    }
    let tiles = TileSet::new(format!("tm-{}", m.name.replace(char::is_whitespace, "_")), b.tiles)?;
    let roles = b.roles;
    let accept_suffix = format!("@{}", mach.states[mach.accept]);
    let start_is_accept = mach.start == mach.accept;
    let reject_marker: Vec<bool> = tiles
        .tiles()
        .iter()
        .zip(&roles)
        .map(|(t, r)| {
            let n = t.north.token(0);
            let head = n.contains('@') || n == INIT_TOKEN;
            let accepting = n.ends_with(&accept_suffix) || (n == INIT_TOKEN && start_is_accept);
            *r == TileRole::Cell && head && !accepting
        })
        .collect();
    let mut by_south: HashMap<u32, Vec<usize>> = HashMap::new();
    let mut top_by_south = HashMap::new();
    for (id, r) in roles.iter().enumerate() {
        let s = tiles.edge_codes(id)[2];
        match r {
            TileRole::Cell => by_south.entry(s).or_default().push(id),
            TileRole::Top => {
                top_by_south.insert(s, id);
            }
            _ => {}
        }
    }
    let left_code = tiles.edge_codes(left_wall)[1];
    let right_code = tiles.edge_codes(right_wall)[3];
    let token_of = tiles
        .tiles()
        .iter()
        .map(|t| t.edges().iter().map(|e| e.token(0).to_string()).collect())
        .collect();
    Ok(CompiledMachine {
        spec: m.clone(),
        machine: mach,
        tiles,
        roles,
        reject_marker,
        n0,
        token_of,
        by_south,
        top_by_south,
        bottom,
        bottom_r,
        centre,
        corners,
        left_wall,
        right_wall,
        left_code,
        right_code,
    })
}

fn counter_tiles(m: &Machine, b: &mut Builder, wl: bool, wr: bool) {
    let (zero, one) = (m.symbol("0").unwrap(), m.symbol("1").unwrap());
    let tok = |c: CellContent| content_token(m, c);
    let west_of = |carry: bool| {
        if wl {
            LEFT_WALL
        } else if carry {
            CARRY
        } else {
            GAP
        }
    };
    let east_in: &[&str] = if wr { &[RIGHT_WALL] } else { &[GAP, CARRY] };
    let ns = m.symbols.len();
    for s in 0..ns {
        let plain = tok(CellContent { symbol: s, state: None });
        for &e in east_in {
            if e == CARRY {
                let (out, carry) = if s == one { (zero, true) } else { (one, false) };
                b.push(
                    TileRole::Cell,
                    &tok(CellContent {
                        symbol: out,
                        state: None,
                    }),
                    e,
                    &plain,
                    west_of(carry),
                );
            } else {
                b.push(TileRole::Cell, &plain, e, &plain, west_of(false));
            }
        }
        for q in 0..m.states.len() {
            let here = tok(CellContent {
                symbol: s,
                state: Some(q),
            });
            let east = if wr { RIGHT_WALL } else { GAP };
            if m.halted(q, s) {
                b.push(TileRole::Cell, &here, east, &here, west_of(false));
            } else {
                let (out, carry) = if s == one { (zero, true) } else { (one, false) };
                b.push(
                    TileRole::Cell,
                    &tok(CellContent {
                        symbol: out,
                        state: Some(q),
                    }),
                    east,
                    &here,
                    west_of(carry),
                );
            }
        }
    }
}

/// Side of the tape (and number of time rows) at level `n`.
pub fn square_width(n: u32) -> usize {
    (1usize << n) + 1
}

impl CompiledMachine {
    pub fn tile_tokens(&self, id: usize) -> &[String] {
        &self.token_of[id]
    }

    /// Bottom, wall and corner tiles of the framed level-n grid, with the
    /// top row and the TM rows left as `usize::MAX`.
    pub fn frame(&self, n: u32) -> Configuration {
        let w = square_width(n);
        let side = w + 2;
        let mut c = Configuration::filled(side, side, usize::MAX);
        let mid = 1 + w / 2;
        for x in 1..=w {
            let t = match x.cmp(&mid) {
                std::cmp::Ordering::Less => self.bottom,
                std::cmp::Ordering::Equal => self.centre,
                std::cmp::Ordering::Greater => self.bottom_r,
            };
            c.set(x, 0, t);
        }
        for y in 1..side - 1 {
            c.set(0, y, self.left_wall);
            c.set(side - 1, y, self.right_wall);
        }
        c.set(0, 0, self.corners[0]);
        c.set(side - 1, 0, self.corners[1]);
        c.set(0, side - 1, self.corners[2]);
        c.set(side - 1, side - 1, self.corners[3]);
        c
    }

    /// All rows of TM tiles whose south edges read `south` (codes), in
    /// tile-id order.
    pub fn row_successors(&self, south: &[u32]) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(south.len());
        self.extend_row(south, self.left_code, &mut cur, &mut out);
        out
    }

    fn extend_row(&self, south: &[u32], west: u32, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let j = cur.len();
        if j == south.len() {
            if west == self.right_code {
                out.push(cur.clone());
            }
            return;
        }
        let Some(cands) = self.by_south.get(&south[j]) else {
            return;
        };
        for &t in cands {
            let c = self.tiles.edge_codes(t);
            if c[3] != west {
                continue;
            }
            cur.push(t);
            self.extend_row(south, c[1], cur, out);
            cur.pop();
        }
    }

    /// Every valid framed level-n configuration, in depth-first order over
    /// the rows. Errors once more than `budget` are found.
    pub fn histories(&self, n: u32, budget: usize) -> Result<Vec<Configuration>> {
        let mut out = Vec::new();
        self.search(n, &mut |c| {
            out.push(c.clone());
            if out.len() > budget {
                Err(Error::Resource(format!("more than {budget} square histories")))
            } else {
                Ok(true)
            }
        })?;
        Ok(out)
    }

    /// Depth-first enumeration of valid framed configurations; the visitor
    /// returns `Ok(false)` to stop.
    pub fn search<F>(&self, n: u32, visit: &mut F) -> Result<()>
    where
        F: FnMut(&Configuration) -> Result<bool>,
    {
        let mut c = self.frame(n);
        let w = square_width(n);
        let south: Vec<u32> = (1..=w).map(|x| self.tiles.edge_codes(c.get(x, 0))[0]).collect();
        self.search_rows(&mut c, 1, &south, visit)?;
        Ok(())
    }

    fn search_rows<F>(&self, c: &mut Configuration, y: usize, south: &[u32], visit: &mut F) -> Result<bool>
    where
        F: FnMut(&Configuration) -> Result<bool>,
    {
        let w = south.len();
        if y == w + 1 {
            for (j, &s) in south.iter().enumerate() {
                let top = *self
                    .top_by_south
                    .get(&s)
                    .ok_or_else(|| Error::Compile("no top edge tile for a final token".into()))?;
                c.set(j + 1, y, top);
            }
            return visit(c);
        }
        for row in self.row_successors(south) {
            let north: Vec<u32> = row.iter().map(|&t| self.tiles.edge_codes(t)[0]).collect();
            for (j, &t) in row.iter().enumerate() {
                c.set(j + 1, y, t);
            }
            if !self.search_rows(c, y + 1, &north, visit)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Number of Π_NO penalties in a framed configuration: reject-marker
    /// tiles directly below a top edge tile.
    pub fn pi_no(&self, c: &Configuration) -> usize {
        let top = c.height() - 1;
        (0..c.width())
            .filter(|&x| {
                let (below, above) = (c.get(x, top - 1), c.get(x, top));
                below < self.roles.len() && self.reject_marker[below] && self.roles.get(above) == Some(&TileRole::Top)
            })
            .count()
    }

    /// Decodes the tape contents of a framed configuration: entry `t` is the
    /// configuration at time `t`, read off the south edges of TM row `t + 1`
    /// (the last entry from the top edge row).
    pub fn decode(&self, c: &Configuration) -> Result<Vec<WindowRow>> {
        let w = c.width() - 2;
        let mut rows = Vec::new();
        for y in 1..c.height() {
            let mut row = Vec::with_capacity(w);
            for x in 1..=w {
                let tok = &self.token_of[c.get(x, y)][2];
                row.push(self.parse_content(tok)?);
            }
            rows.push(row);
        }
        Ok(rows)
    }

    pub fn parse_content(&self, tok: &str) -> Result<CellContent> {
        let m = &self.machine;
        let sym = |s: &str| {
            if s == BLANK_TOKEN {
                Some(0)
            } else {
                m.symbol(s).filter(|&i| i != 0)
            }
        };
        let bad = || Error::Compile(format!("{tok:?} is not a content token"));
        if tok == INIT_TOKEN {
            return Ok(CellContent {
                symbol: 0,
                state: Some(m.start),
            });
        }
        match tok.split_once('@') {
            Some((s, q)) => Ok(CellContent {
                symbol: sym(s).ok_or_else(bad)?,
                state: Some(m.states.iter().position(|x| x == q).ok_or_else(bad)?),
            }),
            None => Ok(CellContent {
                symbol: sym(tok).ok_or_else(bad)?,
                state: None,
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::spec::{always_accept, builtin_counter, parity};
    use super::*;
    use crate::wang::energy_raw;

    #[test]
    fn histories_are_valid_tilings() {
        for m in [always_accept(), parity(), builtin_counter()] {
            let cm = compile(&m).unwrap();
            let hs = cm.histories(2, 10).unwrap();
            assert_eq!(hs.len(), 1, "{}", m.name);
            assert_eq!(energy_raw(&cm.tiles, &hs[0]).unwrap(), 0);
        }
    }

    #[test]
    fn reserved_names_are_rejected() {
        let mut m = parity();
        m.alphabet.push("s0q0".into());
        assert!(matches!(compile(&m), Err(Error::Compile(_))));
        let mut m = parity();
        m.states.push("s0".into());
        assert!(matches!(compile(&m), Err(Error::Compile(_))));
    }

    #[test]
    fn content_tokens_round_trip() {
        let cm = compile(&parity()).unwrap();
        for s in 0..3 {
            for q in [None, Some(0), Some(2)] {
                let c = CellContent { symbol: s, state: q };
                assert_eq!(cm.parse_content(&content_token(&cm.machine, c)).unwrap(), c);
            }
        }
    }
}
