//! Robinson tilings: the marked tile set, the canonical hierarchical tiling,
//! border detection, free rows/columns and the obstruction layer.

mod borders;
pub mod geometry;
mod tiles;

pub use borders::{
    check_obstruction, find_all_borders, find_borders, free_cells, inner_borders, BorderRecord, FreeCellMap,
};
pub use geometry::{predicted_borders, predicted_corners, Colour, Side, ORIGIN};
pub use tiles::{build_tileset, generate_tiling, parse_layers, CrossOrientation, Layer, RobinsonTileSet, TileClass};

/// All four layers.
pub fn full_layers() -> Vec<Layer> {
    Layer::ALL.to_vec()
}

/// Census of complete n-borders per level for an `l` x `l` window, as the
/// pair `((floor(l / 2^(2n+1)) - 1)^2, (floor(l / 2^(2n+1)) + 1)^2)`.
pub fn census_bounds(l: usize, n: u32) -> (i64, i64) {
    let q = (l >> (2 * n + 1)) as i64;
    ((q - 1).max(0).pow(2), (q + 1).pow(2))
}
