use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tilesed::robinson::{
    build_tileset, census_bounds, check_obstruction, find_borders, free_cells, full_layers, generate_tiling,
    predicted_borders, predicted_corners, Layer,
};
use tilesed::wang::{defects, energy_raw, Configuration};

#[test]
fn derived_set_covers_random_phases() {
    let ts = build_tileset(&full_layers()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..40 {
        let phase = (
            rng.gen_range(-(1i64 << 34)..1 << 34),
            rng.gen_range(-(1i64 << 34)..1 << 34),
        );
        let c = generate_tiling(&ts, 48, 48, phase).unwrap();
        assert_eq!(energy_raw(ts.base(), &c).unwrap(), 0, "phase {phase:?}");
    }
}

#[test]
fn census_matches_geometry_exactly() {
    let ts = build_tileset(&[Layer::Robinson, Layer::Dash]).unwrap();
    for (l, phase) in [(32, (0, 0)), (64, (3, 11)), (128, (-17, 40)), (100, (5, 5))] {
        let c = generate_tiling(&ts, l, l, phase).unwrap();
        let found = find_borders(&ts, &c);
        for n in 1..=3u32 {
            let mut got: Vec<_> = found.iter().filter(|b| b.n == n).map(|b| b.corner).collect();
            got.sort();
            let mut want = predicted_corners(n, l, l, phase);
            want.sort();
            assert_eq!(got, want, "L={l} n={n} phase={phase:?}");
            assert_eq!(got.len() as i64, predicted_borders(n, l, l, phase));
            if (1usize << (2 * n)) < l {
                let (lo, hi) = census_bounds(l, n);
                assert!(lo <= got.len() as i64 && got.len() as i64 <= hi);
            }
        }
    }
}

#[test]
fn complete_borders_are_cell_disjoint() {
    let ts = build_tileset(&[Layer::Robinson, Layer::Dash]).unwrap();
    let c = generate_tiling(&ts, 90, 90, (2, 9)).unwrap();
    let borders = find_borders(&ts, &c);
    let mut owner = vec![usize::MAX; 90 * 90];
    for (i, b) in borders.iter().enumerate() {
        for (x, y) in b.ring_cells() {
            assert_eq!(
                owner[y * 90 + x],
                usize::MAX,
                "rings {i} and {} share ({x},{y})",
                owner[y * 90 + x]
            );
            owner[y * 90 + x] = i;
        }
    }
}

#[test]
fn blank_configuration_has_no_borders() {
    let ts = build_tileset(&[Layer::Robinson, Layer::Dash]).unwrap();
    let plain = ts
        .classes()
        .iter()
        .position(|c| c.cross.is_none() && c.arm.is_none())
        .unwrap();
    let c = Configuration::filled(30, 30, plain);
    assert!(find_borders(&ts, &c).is_empty());
}

#[test]
fn one_border_has_three_free_rows() {
    let ts = build_tileset(&full_layers()).unwrap();
    let c = generate_tiling(&ts, 16, 16, (0, 0)).unwrap();
    let b = find_borders(&ts, &c).into_iter().find(|b| b.n == 1).unwrap();
    let map = free_cells(&ts, &c, &b).unwrap();
    assert_eq!(map.free_rows.len(), 3);
    assert_eq!(map.free_cols.len(), 3);
    assert!(check_obstruction(&ts, &c, &b));
}

#[test]
fn every_border_of_a_generated_tiling_is_obstruction_correct() {
    let ts = build_tileset(&full_layers()).unwrap();
    let c = generate_tiling(&ts, 160, 160, (-9, 4)).unwrap();
    let borders = find_borders(&ts, &c);
    assert!(borders.iter().any(|b| b.n == 3));
    for b in &borders {
        let map = free_cells(&ts, &c, b).unwrap();
        assert_eq!(map.dim(), (1 << b.n) + 1);
        assert!(check_obstruction(&ts, &c, b), "{b:?}");
    }
}

#[test]
fn flipped_obstruction_token_is_detected() {
    let ts = build_tileset(&full_layers()).unwrap();
    let c = generate_tiling(&ts, 40, 40, (0, 0)).unwrap();
    let b = find_borders(&ts, &c).into_iter().find(|b| b.n == 2).unwrap();
    let inner = tilesed::robinson::inner_borders(&ts, &c, &b);
    let mut tried = 0;
    for y in 8..23 {
        for x in 8..23 {
            if inner.iter().any(|r| r.contains(x, y)) {
                continue;
            }
            for t in ts.obstruction_variants(c.get(x, y)) {
                let mut d = c.clone();
                d.set(x, y, t);
                assert!(!check_obstruction(&ts, &d, &b), "variant {t} at ({x},{y})");
                tried += 1;
            }
        }
    }
    assert!(tried > 0);
}

#[test]
fn defect_that_breaks_an_inner_border_blocks_free_cell_inference() {
    let ts = build_tileset(&full_layers()).unwrap();
    let mut c = generate_tiling(&ts, 40, 40, (0, 0)).unwrap();
    let b = find_borders(&ts, &c).into_iter().find(|b| b.n == 2).unwrap();
    // the four 1-borders inside sit at corners (9,9), (17,9), (9,17), (17,17);
    // break the bottom side of two that share a row band
    for (x, y) in [(11, 9), (19, 9)] {
        let t = ts.base().clashing_at(&c, x, y).unwrap();
        c.set(x, y, t);
    }
    assert!(!defects(ts.base(), &c).unwrap().is_empty());
    let err = free_cells(&ts, &c, &b).unwrap_err();
    assert!(matches!(err, tilesed::Error::Analysis { .. }));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn generated_windows_are_valid(w in 1usize..40, h in 1usize..40, dx in -5000i64..5000, dy in -5000i64..5000) {
        let ts = build_tileset(&full_layers()).unwrap();
        let c = generate_tiling(&ts, w, h, (dx, dy)).unwrap();
        prop_assert_eq!(energy_raw(ts.base(), &c).unwrap(), 0);
    }

    #[test]
    fn borders_are_phase_equivariant(dx in 0i64..64, dy in 0i64..64) {
        let ts = build_tileset(&[Layer::Robinson, Layer::Dash]).unwrap();
        let big = 96usize;
        let base = generate_tiling(&ts, big, big, (0, 0)).unwrap();
        let shifted = generate_tiling(&ts, big - 64, big - 64, (dx, dy)).unwrap();
        let mut want: Vec<_> = find_borders(&ts, &base)
            .into_iter()
            .filter(|b| {
                let (x, y) = (b.corner.0 as i64 - dx, b.corner.1 as i64 - dy);
                x >= 0 && y >= 0 && x + b.span() as i64 <= (big - 65) as i64 && y + b.span() as i64 <= (big - 65) as i64
            })
            .map(|b| (b.n, (b.corner.0 as i64 - dx) as usize, (b.corner.1 as i64 - dy) as usize))
            .collect();
        let mut got: Vec<_> = find_borders(&ts, &shifted).into_iter().map(|b| (b.n, b.corner.0, b.corner.1)).collect();
        want.sort();
        got.sort();
        prop_assert_eq!(got, want);
    }
}
