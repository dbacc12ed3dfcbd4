//! Text and image renderings of Robinson configurations.
//!
//! Every format marks defects and outlines complete borders; `highlight`
//! chooses what is emphasised on top of that. Output depends only on the
//! inputs, so rendering twice gives identical bytes.

use std::collections::BTreeSet;
use std::fmt::Write;

use tilesed::robinson::{find_borders, free_cells, BorderRecord, Colour, Layer, RobinsonTileSet, Side, TileClass};
use tilesed::wang::{defects, Configuration, DefectSet};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Ascii,
    Svg,
    Ppm,
}

impl std::str::FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Format> {
        match s {
            "ascii" => Ok(Format::Ascii),
            "svg" => Ok(Format::Svg),
            "ppm" => Ok(Format::Ppm),
            _ => Err(CliError::Config(format!("unsupported render format {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Highlight {
    Borders,
    FreeCells,
    /// Only defects and border outlines, other glyphs dimmed.
    Defects,
}

impl std::str::FromStr for Highlight {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Highlight> {
        match s {
            "borders" => Ok(Highlight::Borders),
            "free-cells" => Ok(Highlight::FreeCells),
            "defects" => Ok(Highlight::Defects),
            _ => Err(CliError::Config(format!("unknown highlight {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderSpec {
    layers: BTreeSet<Layer>,
    pub highlight: Highlight,
    pub format: Format,
}

impl RenderSpec {
    pub fn new(layers: &[Layer], highlight: Highlight, format: Format) -> CliResult<RenderSpec> {
        if layers.is_empty() {
            return Err(CliError::Config("at least one layer must be rendered".into()));
        }
        Ok(RenderSpec {
            layers: layers.iter().copied().collect(),
            highlight,
            format,
        })
    }

    pub fn ascii(layers: &[Layer]) -> CliResult<RenderSpec> {
        RenderSpec::new(layers, Highlight::Borders, Format::Ascii)
    }

    fn shows(&self, ts: &RobinsonTileSet, l: Layer) -> bool {
        self.layers.contains(&l) && ts.has_layer(l)
    }
}

/// What a renderer needs besides the tiles.
struct Overlay {
    defects: DefectSet,
    touched: BTreeSet<(usize, usize)>,
    borders: Vec<BorderRecord>,
    /// Cell to the smallest complete border level whose ring holds it.
    ring: Vec<Option<u32>>,
    free: BTreeSet<(usize, usize)>,
}

fn overlay(ts: &RobinsonTileSet, c: &Configuration, spec: &RenderSpec) -> CliResult<Overlay> {
    let defects = defects(ts.base(), c)?;
    let touched = defects.touched_cells().into_iter().collect();
    let borders = find_borders(ts, c);
    let mut ring = vec![None; c.width() * c.height()];
    for b in &borders {
        for (x, y) in b.ring_cells() {
            let slot = &mut ring[y * c.width() + x];
            *slot = Some(slot.map_or(b.n, |m: u32| m.min(b.n)));
        }
    }
    let mut free = BTreeSet::new();
    if spec.highlight == Highlight::FreeCells {
        for b in &borders {
            // damaged squares have no well-defined free cells
            if let Ok(m) = free_cells(ts, c, b) {
                free.extend(m.free_cells().into_iter().flatten());
            }
        }
    }
    Ok(Overlay {
        defects,
        touched,
        borders,
        ring,
        free,
    })
}

pub fn render(ts: &RobinsonTileSet, c: &Configuration, spec: &RenderSpec) -> CliResult<Vec<u8>> {
    c.validate(ts.base())?;
    let ov = overlay(ts, c, spec)?;
    Ok(match spec.format {
        Format::Ascii => ascii(ts, c, spec, &ov).into_bytes(),
        Format::Svg => svg(ts, c, spec, &ov).into_bytes(),
        Format::Ppm => ppm(ts, c, spec, &ov),
    })
}

fn token(ts: &RobinsonTileSet, id: usize, layer: Layer, edge: usize) -> &str {
    let i = ts.layer_index(layer).expect("layer present");
    ts.base().tiles()[id].edges()[edge].token(i)
}

fn robinson_glyph(k: &TileClass) -> char {
    match (k.cross, k.arm) {
        (Some(_), _) => '+',
        (None, Some(side)) => side.glyph(),
        (None, None) => '.',
    }
}

fn tm_wire(ts: &RobinsonTileSet, id: usize) -> bool {
    (0..4).any(|e| token(ts, id, Layer::Tm, e) == "t")
}

fn dash_marks(ts: &RobinsonTileSet, id: usize) -> (bool, bool) {
    (
        token(ts, id, Layer::Dash, 0) == "d1",
        token(ts, id, Layer::Dash, 1) == "d1",
    )
}

fn base_glyph(ts: &RobinsonTileSet, id: usize, spec: &RenderSpec) -> char {
    let k = ts.class(id);
    if spec.shows(ts, Layer::Tm) && tm_wire(ts, id) {
        return 't';
    }
    if spec.shows(ts, Layer::Obstruction) {
        match (k.has_h_signal(), k.has_v_signal()) {
            (true, true) => return '#',
            (true, false) => return '~',
            (false, true) => return '!',
            _ => {}
        }
    }
    if spec.shows(ts, Layer::Robinson) {
        return robinson_glyph(k);
    }
    if spec.shows(ts, Layer::Dash) {
        return match dash_marks(ts, id) {
            (true, true) => ':',
            (true, false) => '\'',
            (false, true) => ',',
            (false, false) => '.',
        };
    }
    '.'
}

/// One row per lattice row, top row first. Defect cells are `X`, ring cells
/// of complete borders carry their level digit.
fn ascii(ts: &RobinsonTileSet, c: &Configuration, spec: &RenderSpec, ov: &Overlay) -> String {
    let mut out = String::with_capacity((c.width() + 1) * c.height());
    for y in (0..c.height()).rev() {
        for x in 0..c.width() {
            let ch = if ov.touched.contains(&(x, y)) {
                'X'
            } else if let Some(n) = ov.ring[y * c.width() + x] {
                char::from_digit(n % 36, 36).unwrap()
            } else if ov.free.contains(&(x, y)) {
                'o'
            } else if spec.highlight == Highlight::Defects {
                '.'
            } else {
                base_glyph(ts, c.get(x, y), spec)
            };
            out.push(ch);
        }
        out.push('\n');
    }
    out
}

const CELL: i64 = 12;

fn colour_name(c: Colour) -> &'static str {
    match c {
        Colour::Red => "#c0392b",
        Colour::Green => "#27ae60",
    }
}

fn level_colour(n: u32) -> &'static str {
    const P: [&str; 6] = ["#8e44ad", "#2980b9", "#d35400", "#16a085", "#7f8c8d", "#2c3e50"];
    P[(n as usize - 1) % P.len()]
}

fn svg(ts: &RobinsonTileSet, c: &Configuration, spec: &RenderSpec, ov: &Overlay) -> String {
    let (w, h) = (c.width() as i64, c.height() as i64);
    // cell (x, y) occupies [x, x+1] x [y, y+1], y pointing up
    let px = |x: i64| x * CELL;
    let py = |y: i64| (h - y) * CELL;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
        w * CELL,
        h * CELL,
        w * CELL,
        h * CELL
    );
    let _ = writeln!(s, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    if !ov.free.is_empty() {
        let _ = writeln!(s, "<g class=\"free\" fill=\"#f7dc6f\">");
        for &(x, y) in &ov.free {
            let (x, y) = (x as i64, y as i64);
            let _ = writeln!(
                s,
                "<rect x=\"{}\" y=\"{}\" width=\"{CELL}\" height=\"{CELL}\"/>",
                px(x),
                py(y + 1)
            );
        }
        let _ = writeln!(s, "</g>");
    }
    let dim = spec.highlight == Highlight::Defects;
    let _ = writeln!(
        s,
        "<g class=\"tiles\" fill=\"none\" stroke-linecap=\"round\"{}>",
        if dim { " opacity=\"0.25\"" } else { "" }
    );
    let half = CELL / 2;
    for y in 0..h {
        for x in 0..w {
            let id = c.get(x as usize, y as usize);
            let k = ts.class(id);
            let (cx, cy) = (px(x) + half, py(y + 1) + half);
            if spec.shows(ts, Layer::Robinson) {
                let arms = [
                    (k.west_on, k.h_line, (px(x), cy)),
                    (k.east_on, k.h_line, (px(x + 1), cy)),
                    (k.south_on, k.v_line, (cx, py(y))),
                    (k.north_on, k.v_line, (cx, py(y + 1))),
                ];
                for (on, line, (ex, ey)) in arms {
                    if let (true, Some((col, _))) = (on, line) {
                        let _ = writeln!(
                            s,
                            "<polyline points=\"{cx},{cy} {ex},{ey}\" stroke=\"{}\" stroke-width=\"2\"/>",
                            colour_name(col)
                        );
                    }
                }
                if let Some(side) = k.arm {
                    let (dx, dy) = match side {
                        Side::Bottom => (0, -1),
                        Side::Top => (0, 1),
                        Side::Left => (1, 0),
                        Side::Right => (-1, 0),
                    };
                    // chevron pointing from the principal side into the square
                    let a = 3;
                    let tip = (cx + dx * a, cy + dy * a);
                    let l = (cx - dx * a + dy * a, cy - dy * a + dx * a);
                    let r = (cx - dx * a - dy * a, cy - dy * a - dx * a);
                    let _ = writeln!(
                        s,
                        "<polyline class=\"arrow\" points=\"{},{} {},{} {},{}\" stroke=\"black\"/>",
                        l.0, l.1, tip.0, tip.1, r.0, r.1
                    );
                }
            }
            if spec.shows(ts, Layer::Dash) {
                let (north, east) = dash_marks(ts, id);
                if north {
                    let _ = writeln!(
                        s,
                        "<line class=\"dash\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"gray\"/>",
                        cx - 2,
                        py(y + 1),
                        cx + 2,
                        py(y + 1)
                    );
                }
                if east {
                    let _ = writeln!(
                        s,
                        "<line class=\"dash\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"gray\"/>",
                        px(x + 1),
                        cy - 2,
                        px(x + 1),
                        cy + 2
                    );
                }
            }
            if spec.shows(ts, Layer::Obstruction) {
                if k.has_h_signal() {
                    let _ = writeln!(
                        s,
                        "<line class=\"signal\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#3498db\" stroke-width=\"1\"/>",
                        px(x),
                        cy + 2,
                        px(x + 1),
                        cy + 2
                    );
                }
                if k.has_v_signal() {
                    let _ = writeln!(
                        s,
                        "<line class=\"signal\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#3498db\" stroke-width=\"1\"/>",
                        cx + 2,
                        py(y),
                        cx + 2,
                        py(y + 1)
                    );
                }
            }
            if spec.shows(ts, Layer::Tm) && tm_wire(ts, id) {
                let _ = writeln!(
                    s,
                    "<text class=\"tm\" x=\"{}\" y=\"{}\" font-size=\"6\" fill=\"#555\">t</text>",
                    px(x) + 1,
                    py(y) - 1
                );
            }
        }
    }
    let _ = writeln!(s, "</g>");
    for b in &ov.borders {
        let (x0, y0) = (b.corner.0 as i64, b.corner.1 as i64);
        let side = b.span() as i64 + 1;
        let _ = writeln!(
            s,
            "<rect class=\"border border-{}\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"/>",
            b.n,
            px(x0),
            py(y0 + side),
            side * CELL,
            side * CELL,
            level_colour(b.n)
        );
    }
    for p in ov.defects.iter() {
        let (dx, dy) = p.doubled();
        // doubled coordinate d sits at (d + 1) / 2 cells from the origin
        let x = (dx + 1) * CELL / 2;
        let y = (2 * h - dy - 1) * CELL / 2;
        let _ = writeln!(
            s,
            "<circle class=\"defect\" cx=\"{x}\" cy=\"{y}\" r=\"4\" fill=\"black\"/>"
        );
    }
    let _ = writeln!(s, "</svg>");
    s
}

const PX: usize = 3;

/// Binary PPM with a 3x3 pixel block per cell: the centre carries the tile,
/// the edge pixels the line segments leaving it.
fn ppm(ts: &RobinsonTileSet, c: &Configuration, spec: &RenderSpec, ov: &Overlay) -> Vec<u8> {
    let (w, h) = (c.width() * PX, c.height() * PX);
    let mut img = vec![[255u8; 3]; w * h];
    let rgb = |c: Colour| match c {
        Colour::Red => [192, 57, 43],
        Colour::Green => [39, 174, 96],
    };
    for y in 0..c.height() {
        for x in 0..c.width() {
            let id = c.get(x, y);
            let k = ts.class(id);
            let mut put = |i: usize, j: usize, col: [u8; 3]| {
                // j counts pixel rows upward within the block
                let row = (c.height() - 1 - y) * PX + (PX - 1 - j);
                img[row * w + x * PX + i] = col;
            };
            let back = if ov.touched.contains(&(x, y)) {
                Some([0, 0, 0])
            } else if let Some(n) = ov.ring[y * c.width() + x] {
                Some(if n % 2 == 1 { [250, 219, 216] } else { [214, 234, 248] })
            } else if ov.free.contains(&(x, y)) {
                Some([247, 220, 111])
            } else {
                None
            };
            if let Some(col) = back {
                for i in 0..PX {
                    for j in 0..PX {
                        put(i, j, col);
                    }
                }
            }
            if ov.touched.contains(&(x, y)) || spec.highlight == Highlight::Defects {
                continue;
            }
            if spec.shows(ts, Layer::Robinson) {
                if let Some((col, _)) = k.h_line {
                    if k.west_on {
                        put(0, 1, rgb(col));
                    }
                    if k.east_on {
                        put(2, 1, rgb(col));
                    }
                }
                if let Some((col, _)) = k.v_line {
                    if k.south_on {
                        put(1, 0, rgb(col));
                    }
                    if k.north_on {
                        put(1, 2, rgb(col));
                    }
                }
                let centre = k.cross_colour.or(k.h_line.map(|l| l.0)).or(k.v_line.map(|l| l.0));
                if let Some(col) = centre {
                    put(1, 1, rgb(col));
                }
            }
            if spec.shows(ts, Layer::Obstruction) && (k.has_h_signal() || k.has_v_signal()) {
                put(0, 0, [52, 152, 219]);
            }
            if spec.shows(ts, Layer::Tm) && tm_wire(ts, id) {
                put(2, 2, [85, 85, 85]);
            }
            if spec.shows(ts, Layer::Dash) {
                let (north, east) = dash_marks(ts, id);
                if north || east {
                    put(0, 2, [128, 128, 128]);
                }
            }
        }
    }
    let mut out = format!("P6\n{w} {h}\n255\n").into_bytes();
    out.extend(img.into_iter().flatten());
    out
}
