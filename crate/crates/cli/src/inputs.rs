//! Loading machines, tile sets and tilings named on the command line.

use std::path::Path;
use std::sync::Arc;

use tilesed::robinson::{build_tileset, Layer, RobinsonTileSet};
use tilesed::tm::{always_accept, always_reject, builtin_counter, ends_in_one, guess_one, parity, wiggle, TMSpec};
use tilesed::wang::{Configuration, TileSet};

use crate::error::{CliError, CliResult};

pub const BUILTINS: [&str; 7] = [
    "counter",
    "accept",
    "reject",
    "parity",
    "ends_in_one",
    "guess_one",
    "wiggle",
];

pub fn builtin(name: &str) -> Option<TMSpec> {
    Some(match name {
        "counter" => builtin_counter(),
        "accept" => always_accept(),
        "reject" => always_reject(),
        "parity" => parity(),
        "ends_in_one" => ends_in_one(),
        "guess_one" => guess_one(),
        "wiggle" => wiggle(),
        _ => return None,
    })
}

pub fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn write(path: &Path, text: &[u8]) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// `builtin:NAME` or a machine file.
pub fn machine(arg: &str) -> CliResult<TMSpec> {
    match arg.strip_prefix("builtin:") {
        Some(name) => builtin(name).ok_or_else(|| {
            CliError::Config(format!(
                "unknown builtin machine {name:?}; known: {}",
                BUILTINS.join(", ")
            ))
        }),
        None => Ok(TMSpec::parse(&read(Path::new(arg))?)?),
    }
}

/// Every layer set the Robinson builder accepts.
pub fn layer_sets() -> Vec<Vec<Layer>> {
    vec![
        vec![Layer::Robinson, Layer::Dash],
        vec![Layer::Robinson, Layer::Dash, Layer::Obstruction],
        vec![Layer::Robinson, Layer::Dash, Layer::Obstruction, Layer::Tm],
    ]
}

/// A tiling file together with the Robinson tile set whose hash its header
/// names.
pub fn robinson_tiling(path: &Path) -> CliResult<(Arc<RobinsonTileSet>, Configuration)> {
    let (hash, c) = Configuration::parse(&read(path)?)?;
    for layers in layer_sets() {
        let ts = build_tileset(&layers)?;
        if ts.base().hash() == hash {
            c.validate(ts.base())?;
            return Ok((ts, c));
        }
    }
    Err(CliError::Config(format!(
        "{}: tile set {hash} is not a Robinson layer set; pass --tileset",
        path.display()
    )))
}

/// A tiling file checked against an explicit tile set file.
pub fn tiling_with(path: &Path, tileset: &Path) -> CliResult<(TileSet, Configuration)> {
    let ts = TileSet::parse(&read(tileset)?)?;
    let (hash, c) = Configuration::parse(&read(path)?)?;
    if hash != ts.hash() {
        return Err(CliError::Config(format!(
            "tiling names tile set {hash} but {} hashes to {}",
            tileset.display(),
            ts.hash()
        )));
    }
    c.validate(&ts)?;
    Ok((ts, c))
}

/// `WxH` or a single side.
pub fn size(s: &str) -> Result<(usize, usize), String> {
    let parse = |t: &str| t.trim().parse::<usize>().ok().filter(|&v| v > 0);
    let (w, h) = match s.split_once(['x', 'X']) {
        Some((w, h)) => (parse(w), parse(h)),
        None => (parse(s), parse(s)),
    };
    w.zip(h)
        .ok_or_else(|| format!("expected WxH with positive sides, got {s:?}"))
}

/// `dx,dy`.
pub fn phase(s: &str) -> Result<(i64, i64), String> {
    let bad = || format!("expected dx,dy, got {s:?}");
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

/// `lo..hi` (inclusive) or a single count.
pub fn range(s: &str) -> Result<(usize, usize), String> {
    let bad = || format!("expected lo..hi, got {s:?}");
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (
            a.trim().parse().map_err(|_| bad())?,
            b.trim().parse().map_err(|_| bad())?,
        ),
        None => {
            let v = s.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo == 0 || lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}
