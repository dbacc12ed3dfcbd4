//! Wang tiles with layered edge labels, tile sets with precomputed matching
//! tables, finite configurations and defect extraction.
//!
//! Coordinates: `x` grows to the east, `y` grows to the north, and the
//! configuration grid is stored row-major starting from row `y = 0`.
//! The outermost edges of a configuration are unconstrained.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use sha2::{Digest, Sha256};

use crate::error::{parse_err, Error, Result};

/// Per-layer tokens on one tile edge. Tokens compare by exact equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeLabel(Vec<String>);

impl EdgeLabel {
    pub fn new<I, S>(tokens: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        EdgeLabel(tokens.into_iter().map(Into::into).collect())
    }

    pub fn single(token: impl Into<String>) -> Self {
        EdgeLabel(vec![token.into()])
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn tokens(&self) -> &[String] {
        &self.0
    }

    pub fn token(&self, layer: usize) -> &str {
        &self.0[layer]
    }
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.join(","))
    }
}

/// Layer-wise conjunction of token equality.
pub fn labels_match(a: &EdgeLabel, b: &EdgeLabel) -> Result<bool> {
    if a.arity() != b.arity() {
        return Err(Error::Arity(a.arity(), b.arity()));
    }
    Ok(a.0 == b.0)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tile {
    pub id: usize,
    pub north: EdgeLabel,
    pub east: EdgeLabel,
    pub south: EdgeLabel,
    pub west: EdgeLabel,
}

impl Tile {
    pub fn new(id: usize, north: EdgeLabel, east: EdgeLabel, south: EdgeLabel, west: EdgeLabel) -> Self {
        Tile {
            id,
            north,
            east,
            south,
            west,
        }
    }

    pub fn edges(&self) -> [&EdgeLabel; 4] {
        [&self.north, &self.east, &self.south, &self.west]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    /// `a` west of `b`.
    Horizontal,
    /// `a` south of `b`.
    Vertical,
}

/// A tile set. Edge labels are interned so that the matching relations
/// reduce to integer comparisons; `r_horz`/`r_vert` enumerate them.
#[derive(Debug, Clone)]
pub struct TileSet {
    name: String,
    tiles: Vec<Tile>,
    arity: usize,
    // [north, east, south, west] label codes per tile
    codes: Vec<[u32; 4]>,
}

impl TileSet {
    /// Builds the matching tables. Tile ids must be exactly `0..d` in order
    /// and every edge must carry the same number of layers.
    pub fn new(name: impl Into<String>, tiles: Vec<Tile>) -> Result<Self> {
        let name = name.into();
        if name.is_empty() || name.contains(char::is_whitespace) {
            return Err(Error::Config(format!("invalid tile set name {name:?}")));
        }
        let arity = tiles.first().map(|t| t.north.arity()).unwrap_or(0);
        for (i, t) in tiles.iter().enumerate() {
            if t.id != i {
                return Err(Error::UnknownTile(t.id));
            }
            for e in t.edges() {
                if e.arity() != arity {
                    return Err(Error::Arity(arity, e.arity()));
                }
                for tok in e.tokens() {
                    validate_token(tok)?;
                }
            }
        }
        let mut intern: HashMap<&EdgeLabel, u32> = HashMap::new();
        let mut codes = Vec::with_capacity(tiles.len());
        for t in &tiles {
            let mut c = [0u32; 4];
            for (slot, e) in c.iter_mut().zip(t.edges()) {
                let next = intern.len() as u32;
                *slot = *intern.entry(e).or_insert(next);
            }
            codes.push(c);
        }
        Ok(TileSet {
            name,
            tiles,
            arity,
            codes,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn tiles(&self) -> &[Tile] {
        &self.tiles
    }

    pub fn tile(&self, id: usize) -> Result<&Tile> {
        self.tiles.get(id).ok_or(Error::UnknownTile(id))
    }

    pub fn check_pair(&self, a: usize, b: usize, orientation: Orientation) -> Result<bool> {
        let d = self.len();
        if a >= d {
            return Err(Error::UnknownTile(a));
        }
        if b >= d {
            return Err(Error::UnknownTile(b));
        }
        Ok(self.allowed(a, b, orientation))
    }

    /// Table lookup without bounds reporting; ids must be valid.
    #[inline]
    pub fn allowed(&self, a: usize, b: usize, orientation: Orientation) -> bool {
        match orientation {
            Orientation::Horizontal => self.codes[a][1] == self.codes[b][3],
            Orientation::Vertical => self.codes[a][0] == self.codes[b][2],
        }
    }

    /// Interned label codes `[north, east, south, west]` of a tile.
    pub fn edge_codes(&self, id: usize) -> [u32; 4] {
        self.codes[id]
    }

    /// Ordered pairs `(a, b)` allowed with `a` west of `b`.
    pub fn r_horz(&self) -> Vec<(usize, usize)> {
        self.relation(Orientation::Horizontal)
    }

    /// Ordered pairs `(a, b)` allowed with `a` south of `b`.
    pub fn r_vert(&self) -> Vec<(usize, usize)> {
        self.relation(Orientation::Vertical)
    }

    fn relation(&self, orientation: Orientation) -> Vec<(usize, usize)> {
        let (from, to) = match orientation {
            Orientation::Horizontal => (1, 3),
            Orientation::Vertical => (0, 2),
        };
        let mut by_code: HashMap<u32, Vec<usize>> = HashMap::new();
        for (id, c) in self.codes.iter().enumerate() {
            by_code.entry(c[to]).or_default().push(id);
        }
        let mut out = Vec::new();
        for (a, c) in self.codes.iter().enumerate() {
            if let Some(bs) = by_code.get(&c[from]) {
                out.extend(bs.iter().map(|&b| (a, b)));
            }
        }
        out
    }

    /// Canonical text form; identical tile sets give identical bytes.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "tileset {} layers={} tiles={}\n",
            self.name,
            self.arity,
            self.tiles.len()
        );
        for t in &self.tiles {
            out.push_str(&format!(
                "{} N:{} E:{} S:{} W:{}\n",
                t.id, t.north, t.east, t.south, t.west
            ));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "empty tile set file"))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 4 || parts[0] != "tileset" {
            return Err(parse_err(hline, "expected `tileset <name> layers=<k> tiles=<d>`"));
        }
        let layers: usize = parse_kv(parts[2], "layers", hline)?;
        let count: usize = parse_kv(parts[3], "tiles", hline)?;
        let mut tiles = Vec::with_capacity(count);
        for (ln, line) in lines {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 5 {
                return Err(parse_err(ln, "expected `<id> N:.. E:.. S:.. W:..`"));
            }
            let id: usize = fields[0]
                .parse()
                .map_err(|_| parse_err(ln, format!("bad tile id {:?}", fields[0])))?;
            let mut edges = Vec::with_capacity(4);
            for (field, key) in fields[1..].iter().zip(["N:", "E:", "S:", "W:"]) {
                let body = field
                    .strip_prefix(key)
                    .ok_or_else(|| parse_err(ln, format!("expected {key} field")))?;
                let label = EdgeLabel::new(body.split(','));
                if label.arity() != layers {
                    return Err(parse_err(
                        ln,
                        format!("edge has {} layers, header says {layers}", label.arity()),
                    ));
                }
                edges.push(label);
            }
            let mut it = edges.into_iter();
            let (n, e, s, w) = (
                it.next().unwrap(),
                it.next().unwrap(),
                it.next().unwrap(),
                it.next().unwrap(),
            );
            tiles.push(Tile::new(id, n, e, s, w));
        }
        if tiles.len() != count {
            return Err(parse_err(
                hline,
                format!("header declares {count} tiles, found {}", tiles.len()),
            ));
        }
        TileSet::new(parts[1], tiles).map_err(|e| parse_err(hline, e.to_string()))
    }

    /// First 16 hex digits of the SHA-256 of the canonical text.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_text().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    /// Smallest tile id that clashes with every existing neighbour of cell
    /// `(x, y)` in `c`, if one exists.
    pub fn clashing_at(&self, c: &Configuration, x: usize, y: usize) -> Option<usize> {
        let (w, h) = (c.width(), c.height());
        (0..self.len()).find(|&t| {
            (x == 0 || !self.allowed(c.get(x - 1, y), t, Orientation::Horizontal))
                && (x + 1 >= w || !self.allowed(t, c.get(x + 1, y), Orientation::Horizontal))
                && (y == 0 || !self.allowed(c.get(x, y - 1), t, Orientation::Vertical))
                && (y + 1 >= h || !self.allowed(t, c.get(x, y + 1), Orientation::Vertical))
        })
    }
}

fn parse_kv(field: &str, key: &str, line: usize) -> Result<usize> {
    field
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| parse_err(line, format!("expected {key}=<n>")))
}

fn validate_token(tok: &str) -> Result<()> {
    if tok.is_empty() || tok.contains(|c: char| c.is_whitespace() || c == ',' || c == ':') {
        return Err(Error::Config(format!("invalid edge token {tok:?}")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    width: usize,
    height: usize,
    cells: Vec<usize>,
}

impl Configuration {
    pub fn filled(width: usize, height: usize, id: usize) -> Self {
        Configuration {
            width,
            height,
            cells: vec![id; width * height],
        }
    }

    pub fn from_cells(width: usize, height: usize, cells: Vec<usize>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Dimension("configuration must be at least 1x1".into()));
        }
        if cells.len() != width * height {
            return Err(Error::Dimension(format!(
                "{} cells for a {width}x{height} grid",
                cells.len()
            )));
        }
        Ok(Configuration { width, height, cells })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> usize {
        self.cells[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, id: usize) {
        self.cells[y * self.width + x] = id;
    }

    pub fn validate(&self, ts: &TileSet) -> Result<()> {
        match self.cells.iter().find(|&&id| id >= ts.len()) {
            Some(&id) => Err(Error::UnknownTile(id)),
            None => Ok(()),
        }
    }

    /// `tiling <hash> <w> <h>` followed by one line of ids per row, row 0 first.
    pub fn to_text(&self, ts: &TileSet) -> String {
        let mut out = format!("tiling {} {} {}\n", ts.hash(), self.width, self.height);
        for row in self.cells.chunks(self.width) {
            let line: Vec<String> = row.iter().map(|id| id.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses a tiling file and returns the recorded tile set hash with it.
    pub fn parse(text: &str) -> Result<(String, Configuration)> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "empty tiling file"))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 4 || parts[0] != "tiling" {
            return Err(parse_err(hl, "expected `tiling <hash> <width> <height>`"));
        }
        let width: usize = parts[2].parse().map_err(|_| parse_err(hl, "bad width"))?;
        let height: usize = parts[3].parse().map_err(|_| parse_err(hl, "bad height"))?;
        let mut cells = Vec::with_capacity(width * height);
        for (ln, line) in lines {
            for tok in line.split_whitespace() {
                cells.push(tok.parse().map_err(|_| parse_err(ln, format!("bad tile id {tok:?}")))?);
            }
        }
        let c = Configuration::from_cells(width, height, cells).map_err(|e| parse_err(hl, e.to_string()))?;
        Ok((parts[1].to_string(), c))
    }
}

/// A violated adjacency, identified by the west/south cell of the pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DefectPoint {
    pub x: usize,
    pub y: usize,
    pub orientation: Orientation,
}

impl DefectPoint {
    /// Position on the dual lattice in doubled coordinates, so that cell
    /// centres sit at even coordinates and edge midpoints at odd ones.
    pub fn doubled(&self) -> (i64, i64) {
        let (x, y) = (2 * self.x as i64, 2 * self.y as i64);
        match self.orientation {
            Orientation::Horizontal => (x + 1, y),
            Orientation::Vertical => (x, y + 1),
        }
    }

    /// The two cells of the pair.
    pub fn cells(&self) -> [(usize, usize); 2] {
        match self.orientation {
            Orientation::Horizontal => [(self.x, self.y), (self.x + 1, self.y)],
            Orientation::Vertical => [(self.x, self.y), (self.x, self.y + 1)],
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DefectSet {
    points: BTreeSet<DefectPoint>,
}

impl DefectSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &DefectPoint> {
        self.points.iter()
    }

    pub fn contains(&self, p: &DefectPoint) -> bool {
        self.points.contains(p)
    }

    pub fn doubled_points(&self) -> Vec<(i64, i64)> {
        self.points.iter().map(DefectPoint::doubled).collect()
    }

    /// Cells touched by at least one defect.
    pub fn touched_cells(&self) -> HashSet<(usize, usize)> {
        self.points.iter().flat_map(|p| p.cells()).collect()
    }
}

impl FromIterator<DefectPoint> for DefectSet {
    fn from_iter<T: IntoIterator<Item = DefectPoint>>(iter: T) -> Self {
        DefectSet {
            points: iter.into_iter().collect(),
        }
    }
}

pub fn defects(ts: &TileSet, c: &Configuration) -> Result<DefectSet> {
    c.validate(ts)?;
    let (w, h) = (c.width(), c.height());
    let mut points = BTreeSet::new();
    for y in 0..h {
        for x in 0..w {
            let a = c.get(x, y);
            if x + 1 < w && !ts.allowed(a, c.get(x + 1, y), Orientation::Horizontal) {
                points.insert(DefectPoint {
                    x,
                    y,
                    orientation: Orientation::Horizontal,
                });
            }
            if y + 1 < h && !ts.allowed(a, c.get(x, y + 1), Orientation::Vertical) {
                points.insert(DefectPoint {
                    x,
                    y,
                    orientation: Orientation::Vertical,
                });
            }
        }
    }
    Ok(DefectSet { points })
}

/// Number of violated adjacent pairs.
pub fn energy_raw(ts: &TileSet, c: &Configuration) -> Result<u64> {
    c.validate(ts)?;
    let (w, h) = (c.width(), c.height());
    let mut count = 0u64;
    for y in 0..h {
        for x in 0..w {
            let a = c.get(x, y);
            if x + 1 < w && !ts.allowed(a, c.get(x + 1, y), Orientation::Horizontal) {
                count += 1;
            }
            if y + 1 < h && !ts.allowed(a, c.get(x, y + 1), Orientation::Vertical) {
                count += 1;
            }
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform(name: &str, tok: &str) -> Tile {
        let l = EdgeLabel::single(tok);
        let _ = name;
        Tile::new(0, l.clone(), l.clone(), l.clone(), l)
    }

    /// Two tiles that clash with everything, including themselves.
    fn hostile_pair() -> TileSet {
        let t0 = Tile::new(
            0,
            EdgeLabel::single("a"),
            EdgeLabel::single("b"),
            EdgeLabel::single("c"),
            EdgeLabel::single("d"),
        );
        let t1 = Tile::new(
            1,
            EdgeLabel::single("e"),
            EdgeLabel::single("f"),
            EdgeLabel::single("g"),
            EdgeLabel::single("h"),
        );
        TileSet::new("hostile", vec![t0, t1]).unwrap()
    }

    #[test]
    fn blank_tile_matches_itself() {
        let ts = TileSet::new("blank", vec![uniform("blank", "x")]).unwrap();
        assert!(ts.check_pair(0, 0, Orientation::Horizontal).unwrap());
        assert!(ts.check_pair(0, 0, Orientation::Vertical).unwrap());
    }

    #[test]
    fn unknown_id_is_rejected() {
        let ts = TileSet::new("blank", vec![uniform("blank", "x")]).unwrap();
        assert_eq!(ts.check_pair(0, 3, Orientation::Horizontal), Err(Error::UnknownTile(3)));
    }

    #[test]
    fn arity_mismatch_is_an_error() {
        let a = EdgeLabel::new(["x", "y"]);
        let b = EdgeLabel::single("x");
        assert_eq!(labels_match(&a, &b), Err(Error::Arity(2, 1)));
        let bad = Tile::new(0, a.clone(), a.clone(), a, b);
        assert!(matches!(TileSet::new("bad", vec![bad]), Err(Error::Arity(2, 1))));
    }

    #[test]
    fn fully_hostile_three_by_three_violates_every_pair() {
        let ts = hostile_pair();
        let c = Configuration::from_cells(3, 3, vec![0, 1, 0, 1, 1, 0, 0, 0, 1]).unwrap();
        assert_eq!(energy_raw(&ts, &c).unwrap(), 12);
        assert_eq!(defects(&ts, &c).unwrap().len(), 12);
    }

    #[test]
    fn single_cell_has_no_defects() {
        let ts = hostile_pair();
        let c = Configuration::filled(1, 1, 1);
        assert!(defects(&ts, &c).unwrap().is_empty());
    }

    #[test]
    fn text_round_trip_is_byte_stable() {
        let ts = hostile_pair();
        let text = ts.to_text();
        let back = TileSet::parse(&text).unwrap();
        assert_eq!(back.to_text(), text);
        assert_eq!(back.hash(), ts.hash());
        let c = Configuration::from_cells(2, 2, vec![0, 1, 1, 0]).unwrap();
        let (hash, c2) = Configuration::parse(&c.to_text(&ts)).unwrap();
        assert_eq!(hash, ts.hash());
        assert_eq!(c2, c);
    }

    #[test]
    fn relations_agree_with_label_predicate() {
        let ts = hostile_pair();
        let mixed = TileSet::new(
            "mixed",
            vec![
                Tile::new(
                    0,
                    EdgeLabel::single("a"),
                    EdgeLabel::single("b"),
                    EdgeLabel::single("a"),
                    EdgeLabel::single("b"),
                ),
                Tile::new(
                    1,
                    EdgeLabel::single("b"),
                    EdgeLabel::single("a"),
                    EdgeLabel::single("a"),
                    EdgeLabel::single("b"),
                ),
                Tile::new(
                    2,
                    EdgeLabel::single("a"),
                    EdgeLabel::single("a"),
                    EdgeLabel::single("b"),
                    EdgeLabel::single("a"),
                ),
            ],
        )
        .unwrap();
        for set in [&ts, &mixed] {
            let horz = set.r_horz();
            let vert = set.r_vert();
            for a in set.tiles() {
                for b in set.tiles() {
                    let h = labels_match(&a.east, &b.west).unwrap();
                    let v = labels_match(&a.north, &b.south).unwrap();
                    assert_eq!(horz.contains(&(a.id, b.id)), h);
                    assert_eq!(vert.contains(&(a.id, b.id)), v);
                    assert_eq!(set.check_pair(a.id, b.id, Orientation::Horizontal).unwrap(), h);
                }
            }
        }
    }

    #[test]
    fn parse_reports_bad_header() {
        assert!(matches!(
            TileSet::parse("tiles foo\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }
}
