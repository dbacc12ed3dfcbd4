//! Turing machines: descriptions, reference simulation, compilation into
//! tiles running on the free cells of Robinson squares, and the instance
//! pipeline.

mod compile;
mod pipeline;
mod sim;
mod spec;

use std::collections::BTreeMap;

pub use compile::{
    compile, compile_with_n0, content_token, square_width, CompiledMachine, TileRole, BLANK_TOKEN, INIT_TOKEN,
};
pub use pipeline::{compose_pipeline, pipeline_input, specialise, InstanceIndexer};
pub use sim::{
    run_reference, run_reference_with_budget, run_window, window_paths, CellContent, Machine, Outcome, RunResult,
    Snapshot, WindowRow, DEFAULT_FRONTIER_BUDGET,
};
pub use spec::{
    always_accept, always_reject, builtin_counter, ends_in_one, guess_one, parity, parse_input, wiggle, MachineKind,
    Move, TMSpec, Transition,
};

use crate::error::{Error, Result};
use crate::robinson::{check_obstruction, free_cells, BorderRecord, RobinsonTileSet};
use crate::wang::{defects, Configuration};

/// TM-layer content of one square: free cell `(x, y)` to the tape cell it
/// carries at the time of its free row.
pub type SquareLayer = BTreeMap<(usize, usize), CellContent>;

/// Machine `m` as it runs inside level-`n` squares: specialised to `x_n`.
pub fn level_machine(m: &TMSpec, indexer: InstanceIndexer, n: u32) -> Result<TMSpec> {
    if m.kind == MachineKind::Counter {
        return Ok(m.clone());
    }
    let x = indexer
        .instance(n)
        .ok_or_else(|| Error::Config(format!("level {n} is below n0 = {}", indexer.n0)))?;
    specialise(m, &x)
}

/// Every valid TM-layer assignment of the square bounded by `b`, placed on
/// its free cells. The border must be complete, defect free inside, and
/// carry a correct obstruction layer.
pub fn square_layers(
    ts: &RobinsonTileSet,
    c: &Configuration,
    b: &BorderRecord,
    cm: &CompiledMachine,
    budget: usize,
) -> Result<Vec<SquareLayer>> {
    let bad = |msg: &str| Error::Analysis {
        x: b.corner.0 as i64,
        y: b.corner.1 as i64,
        msg: msg.to_string(),
    };
    if !b.complete {
        return Err(bad("border is incomplete"));
    }
    let inside = defects(ts.base(), c)?
        .iter()
        .any(|p| p.cells().iter().any(|&(x, y)| b.contains(x, y)));
    if inside {
        return Err(bad("square contains a defect"));
    }
    if !check_obstruction(ts, c, b) {
        return Err(bad("obstruction layer is not correct"));
    }
    let map = free_cells(ts, c, b)?;
    let dim = square_width(b.n);
    if map.dim() != dim || map.free_cols.len() != dim {
        return Err(bad("free rows and columns do not match the level"));
    }
    let mut out = Vec::new();
    for h in cm.histories(b.n, budget)? {
        let rows = cm.decode(&h)?;
        let mut layer = SquareLayer::new();
        for (t, &y) in map.free_rows.iter().enumerate() {
            for (j, &x) in map.free_cols.iter().enumerate() {
                layer.insert((x, y), rows[t][j]);
            }
        }
        out.push(layer);
    }
    Ok(out)
}
