//! Small tile sets for exercising the solvers.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::wang::{EdgeLabel, Tile, TileSet};

fn tile(id: usize, n: &str, e: &str, s: &str, w: &str) -> Tile {
    Tile::new(
        id,
        EdgeLabel::single(n),
        EdgeLabel::single(e),
        EdgeLabel::single(s),
        EdgeLabel::single(w),
    )
}

/// One tile matching itself on every side.
pub fn blank() -> TileSet {
    TileSet::new("blank", vec![tile(0, "a", "a", "a", "a")]).unwrap()
}

/// Two tiles with no allowed adjacency in either orientation.
pub fn incompatible() -> TileSet {
    TileSet::new(
        "incompatible",
        vec![tile(0, "n0", "e0", "s0", "w0"), tile(1, "n1", "e1", "s1", "w1")],
    )
    .unwrap()
}

/// Four tiles `a + 2b` whose valid tilings are exactly the checkerboards
/// with `a = x mod 2`, `b = y mod 2` up to phase.
pub fn checkerboard() -> TileSet {
    let mut tiles = Vec::new();
    for b in 0..2 {
        for a in 0..2 {
            tiles.push(tile(
                a + 2 * b,
                &format!("v{a}{b}"),
                &format!("h{a}{b}"),
                &format!("v{a}{}", 1 - b),
                &format!("h{}{b}", 1 - a),
            ));
        }
    }
    TileSet::new("checkerboard", tiles).unwrap()
}

/// `d` tiles with edge labels drawn from `colours` values, seeded.
pub fn random(d: usize, colours: usize, seed: u64) -> TileSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pick = || format!("c{}", rng.gen_range(0..colours.max(1)));
    let tiles = (0..d)
        .map(|i| {
            let (n, e, s, w) = (pick(), pick(), pick(), pick());
            tile(i, &n, &e, &s, &w)
        })
        .collect();
    TileSet::new(format!("random-{d}-{colours}-{seed}"), tiles).unwrap()
}
