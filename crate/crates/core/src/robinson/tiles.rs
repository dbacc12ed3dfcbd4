//! Edge tokens of the marked Robinson tiles and the derived tile set.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::wang::{Configuration, EdgeLabel, Tile, TileSet};

use super::geometry::{
    blocked, col_side, colour_of, edge_on_side, line_level, owner, ring_level, row_side, Colour, Side, MAX_PHASE,
    ORIGIN,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Layer {
    Robinson,
    Dash,
    Obstruction,
    Tm,
}

impl Layer {
    pub const ALL: [Layer; 4] = [Layer::Robinson, Layer::Dash, Layer::Obstruction, Layer::Tm];

    pub fn name(self) -> &'static str {
        match self {
            Layer::Robinson => "robinson",
            Layer::Dash => "dash",
            Layer::Obstruction => "obstruction",
            Layer::Tm => "tm",
        }
    }

    pub fn parse(name: &str) -> Result<Layer> {
        Layer::ALL
            .into_iter()
            .find(|l| l.name() == name)
            .ok_or_else(|| Error::Config(format!("unknown layer {name:?}")))
    }

    fn mask(self) -> u32 {
        match self {
            Layer::Robinson => 0x0f,
            Layer::Dash => 0x10,
            Layer::Obstruction => 0x20,
            Layer::Tm => 0x40,
        }
    }
}

/// Parses a comma separated layer list such as `robinson,dash,obstruction`.
pub fn parse_layers(list: &str) -> Result<Vec<Layer>> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(Layer::parse)
        .collect()
}

// Edge code bits: 0-1 side, 2 red, 3 on a square side, 4 dash parity,
// 5 obstruction signal, 6 tm wire.
const ON: u32 = 0x08;
const RED: u32 = 0x04;
const DASH: u32 = 0x10;
const OBST: u32 = 0x20;
const WIRE: u32 = 0x40;

fn side_bits(s: Side) -> u32 {
    match s {
        Side::Bottom => 0,
        Side::Top => 1,
        Side::Left => 2,
        Side::Right => 3,
    }
}

fn bits_side(b: u32) -> Side {
    match b & 3 {
        0 => Side::Bottom,
        1 => Side::Top,
        2 => Side::Left,
        _ => Side::Right,
    }
}

/// Full edge code of the east edge of canonical cell `(u, v)`.
fn east_code(u: i64, v: i64, ctx: &CellInfo, east: &CellInfo) -> u32 {
    let mut code = line_code(v, u, row_side(v));
    if v & 1 == 1 {
        code |= DASH;
    }
    code | signal_bits(ctx, east, v)
}

/// Full edge code of the north edge of canonical cell `(u, v)`.
fn north_code(u: i64, v: i64, ctx: &CellInfo, north: &CellInfo) -> u32 {
    let mut code = line_code(u, v, col_side(u));
    if u & 1 == 1 {
        code |= DASH;
    }
    code | signal_bits(ctx, north, u)
}

fn line_code(w: i64, a: i64, side: Side) -> u32 {
    let mut code = 0;
    if colour_of(line_level(w)) == Colour::Red {
        code |= RED;
    }
    if edge_on_side(w, a) {
        code |= ON | side_bits(side);
    }
    code
}

#[derive(Clone, Copy)]
struct CellInfo {
    ring: bool,
    owner: u32,
}

fn cell_info(u: i64, v: i64) -> CellInfo {
    let ring = ring_level(u, v).is_some();
    CellInfo {
        ring,
        owner: if ring { 0 } else { owner(u, v) },
    }
}

/// Obstruction and wire bits of the edge between two cells; `w` is the
/// row (for east edges) or column (for north edges) the edge runs across.
fn signal_bits(a: &CellInfo, b: &CellInfo, w: i64) -> u32 {
    if a.ring && b.ring {
        return 0;
    }
    let ctx = if a.ring { b.owner } else { a.owner };
    if blocked(w, ctx) {
        OBST
    } else {
        WIRE
    }
}

/// Packs the four edge codes `[n, e, s, w]` of a tile into one key.
fn pack(codes: [u32; 4]) -> u32 {
    codes[0] | codes[1] << 8 | codes[2] << 16 | codes[3] << 24
}

fn unpack(key: u32) -> [u32; 4] {
    [key & 0xff, (key >> 8) & 0xff, (key >> 16) & 0xff, key >> 24]
}

/// Per-tile classification read off the robinson tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TileClass {
    pub cross: Option<CrossOrientation>,
    pub cross_colour: Option<Colour>,
    /// Direction from the principal side into its square, for arms.
    pub arm: Option<Side>,
    /// Side of a red border this arm lies on.
    pub red_side: Option<Side>,
    pub h_line: Option<(Colour, Side)>,
    pub v_line: Option<(Colour, Side)>,
    pub west_on: bool,
    pub east_on: bool,
    pub south_on: bool,
    pub north_on: bool,
    /// Obstruction flags on the horizontal (E/W) and vertical (N/S) edges.
    pub h_signal: [bool; 2],
    pub v_signal: [bool; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CrossOrientation {
    UR,
    UL,
    DL,
    DR,
}

impl TileClass {
    fn from_key(key: u32) -> TileClass {
        let [n, e, s, w] = unpack(key);
        let on = |c: u32| c & ON != 0;
        let colour = |c: u32| if c & RED != 0 { Colour::Red } else { Colour::Green };
        let line = |a: u32, b: u32| {
            if on(a) {
                Some((colour(a), bits_side(a)))
            } else if on(b) {
                Some((colour(b), bits_side(b)))
            } else {
                None
            }
        };
        let (west_on, east_on, south_on, north_on) = (on(w), on(e), on(s), on(n));
        let h_line = line(w, e);
        let v_line = line(s, n);
        let cross = if west_on != east_on && south_on != north_on {
            Some(match (east_on, north_on) {
                (true, true) => CrossOrientation::UR,
                (false, true) => CrossOrientation::UL,
                (false, false) => CrossOrientation::DL,
                (true, false) => CrossOrientation::DR,
            })
        } else {
            None
        };
        let cross_colour = cross.map(|_| colour(e | w));
        let (arm, red_side) = if cross.is_some() {
            (None, None)
        } else {
            let red = [h_line, v_line]
                .into_iter()
                .flatten()
                .find(|(c, _)| *c == Colour::Red)
                .map(|(_, s)| s);
            (red.or(h_line.map(|l| l.1)).or(v_line.map(|l| l.1)), red)
        };
        TileClass {
            cross,
            cross_colour,
            arm,
            red_side,
            h_line,
            v_line,
            west_on,
            east_on,
            south_on,
            north_on,
            h_signal: [w & OBST != 0, e & OBST != 0],
            v_signal: [s & OBST != 0, n & OBST != 0],
        }
    }

    pub fn is_arm(&self) -> bool {
        self.arm.is_some()
    }

    pub fn red_double_arrow(&self) -> bool {
        self.red_side.is_some()
    }

    pub fn has_h_signal(&self) -> bool {
        self.h_signal[0] || self.h_signal[1]
    }

    pub fn has_v_signal(&self) -> bool {
        self.v_signal[0] || self.v_signal[1]
    }

    /// Whether this tile continues a red side segment `side` in both
    /// directions along the segment.
    pub fn red_side_through(&self, side: Side) -> bool {
        match side {
            Side::Bottom | Side::Top => self.west_on && self.east_on && self.h_line == Some((Colour::Red, side)),
            Side::Left | Side::Right => self.south_on && self.north_on && self.v_line == Some((Colour::Red, side)),
        }
    }
}

/// The marked Robinson tiles restricted to a set of layers.
#[derive(Debug)]
pub struct RobinsonTileSet {
    base: TileSet,
    layers: Vec<Layer>,
    mask: u32,
    keys: Vec<u32>,
    lookup: HashMap<u32, usize>,
    classes: Vec<TileClass>,
}

impl RobinsonTileSet {
    pub fn base(&self) -> &TileSet {
        &self.base
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn layer_index(&self, layer: Layer) -> Option<usize> {
        self.layers.iter().position(|&l| l == layer)
    }

    pub fn has_layer(&self, layer: Layer) -> bool {
        self.layers.contains(&layer)
    }

    pub fn class(&self, id: usize) -> &TileClass {
        &self.classes[id]
    }

    pub fn classes(&self) -> &[TileClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    /// Tile id realised at canonical cell `(u, v)`.
    pub fn tile_at(&self, u: i64, v: i64) -> Option<usize> {
        self.lookup.get(&(raw_key(u, v) & self.full_mask())).copied()
    }

    fn full_mask(&self) -> u32 {
        let m = self.mask;
        m | m << 8 | m << 16 | m << 24
    }

    /// Tiles with the same robinson and dash markings as `id` but different
    /// obstruction or wire markings.
    pub fn obstruction_variants(&self, id: usize) -> Vec<usize> {
        let keep = 0x1f;
        let keep = keep | keep << 8 | keep << 16 | keep << 24;
        let base = self.keys[id] & keep;
        (0..self.keys.len())
            .filter(|&t| t != id && self.keys[t] & keep == base)
            .collect()
    }
}

fn raw_key(u: i64, v: i64) -> u32 {
    let c = cell_info(u, v);
    let n = north_code(u, v, &c, &cell_info(u, v + 1));
    let e = east_code(u, v, &c, &cell_info(u + 1, v));
    let s = north_code(u, v - 1, &cell_info(u, v - 1), &c);
    let w = east_code(u - 1, v, &cell_info(u - 1, v), &c);
    pack([n, e, s, w])
}

/// Windows (phase, size) scanned to collect the realised local patterns.
fn derivation_windows() -> Vec<((i64, i64), usize)> {
    let mut out = vec![((0, 0), 1024)];
    let far = [12u32, 13, 20, 21];
    for &a in &far {
        for &b in &far {
            out.push((((1i64 << a) - 160, (1i64 << b) - 160), 320));
        }
    }
    out
}

fn derive(layers: Vec<Layer>) -> RobinsonTileSet {
    let mask: u32 = layers.iter().map(|l| l.mask()).sum();
    let full = mask | mask << 8 | mask << 16 | mask << 24;
    let mut keys = BTreeSet::new();
    for ((dx, dy), size) in derivation_windows() {
        for y in 0..size as i64 {
            for x in 0..size as i64 {
                keys.insert(raw_key(x + dx + ORIGIN, y + dy + ORIGIN) & full);
            }
        }
    }
    let keys: Vec<u32> = keys.into_iter().collect();
    let lookup = keys.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let tiles = keys
        .iter()
        .enumerate()
        .map(|(id, &key)| {
            let [n, e, s, w] = unpack(key);
            Tile::new(
                id,
                label(n, &layers, false),
                label(e, &layers, true),
                label(s, &layers, false),
                label(w, &layers, true),
            )
        })
        .collect();
    let name: Vec<&str> = layers.iter().map(|l| l.name()).collect();
    let base =
        TileSet::new(format!("robinson-{}", name.join("+")), tiles).expect("derived robinson tiles are well formed");
    let classes = keys.iter().map(|&k| TileClass::from_key(k)).collect();
    RobinsonTileSet {
        base,
        layers,
        mask,
        keys,
        lookup,
        classes,
    }
}

/// Token strings of one edge; `horizontal` marks east/west edges.
fn label(code: u32, layers: &[Layer], horizontal: bool) -> EdgeLabel {
    let tokens = layers.iter().map(|layer| match layer {
        Layer::Robinson => {
            let red = code & RED != 0;
            if code & ON != 0 {
                format!("{}{}", if red { 'R' } else { 'G' }, bits_side(code).glyph())
            } else {
                (if red { "r." } else { "g." }).to_string()
            }
        }
        Layer::Dash => format!("d{}", (code & DASH != 0) as u8),
        Layer::Obstruction => {
            if code & OBST == 0 {
                "-".to_string()
            } else if horizontal {
                "H".to_string()
            } else {
                "V".to_string()
            }
        }
        Layer::Tm => (if code & WIRE != 0 { "t" } else { "-" }).to_string(),
    });
    EdgeLabel::new(tokens)
}

/// The closed tile set for the requested layers. Results are cached per
/// layer set.
pub fn build_tileset(layers: &[Layer]) -> Result<Arc<RobinsonTileSet>> {
    let set: BTreeSet<Layer> = layers.iter().copied().collect();
    if !set.contains(&Layer::Robinson) || !set.contains(&Layer::Dash) {
        return Err(Error::Config("layer set must include robinson and dash".into()));
    }
    if set.contains(&Layer::Tm) && !set.contains(&Layer::Obstruction) {
        return Err(Error::Config("tm layer requires the obstruction layer".into()));
    }
    let layers: Vec<Layer> = set.into_iter().collect();
    static CACHE: OnceLock<Mutex<HashMap<Vec<Layer>, Arc<RobinsonTileSet>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(ts) = cache.lock().unwrap().get(&layers) {
        return Ok(ts.clone());
    }
    let ts = Arc::new(derive(layers.clone()));
    Ok(cache.lock().unwrap().entry(layers).or_insert(ts).clone())
}

/// Restriction of the canonical tiling to a `width` x `height` window
/// shifted by `phase`.
pub fn generate_tiling(ts: &RobinsonTileSet, width: usize, height: usize, phase: (i64, i64)) -> Result<Configuration> {
    if phase.0.abs() > MAX_PHASE || phase.1.abs() > MAX_PHASE {
        return Err(Error::Config(format!("phase components must lie within +-{MAX_PHASE}")));
    }
    let mut cells = Vec::with_capacity(width * height);
    for y in 0..height as i64 {
        for x in 0..width as i64 {
            let (u, v) = (x + phase.0 + ORIGIN, y + phase.1 + ORIGIN);
            let id = ts.tile_at(u, v).ok_or_else(|| Error::Analysis {
                x,
                y,
                msg: "local pattern missing from the derived tile set".into(),
            })?;
            cells.push(id);
        }
    }
    Configuration::from_cells(width, height, cells)
}
