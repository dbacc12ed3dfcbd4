//! One test per acceptance criterion. Each prints `criterion N: PASS` or
//! `criterion N: FAIL` before asserting.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tilesed::deficit::{border_intersection_sweep, delaunay, frame_cut_sweep, incircle, orient, run_trials, Point};
use tilesed::gsed::{alpha_exact, decide, extract, series_value, thresholds_for, OutcomeSeries};
use tilesed::hamiltonian::{
    energy_density_bounds, grid_decompose_check, ground_state_brute, ground_state_transfer, rational,
    restricted_square_energy, square_hamiltonian, toys, LocalHamiltonian, DEFAULT_LAMBDA, SQUARE_SEARCH_BUDGET,
};
use tilesed::robinson::{
    build_tileset, census_bounds, find_borders, free_cells, full_layers, generate_tiling, predicted_borders,
};
use tilesed::tm::{
    always_accept, always_reject, builtin_counter, compile, ends_in_one, guess_one, level_machine, parity, parse_input,
    run_reference, square_layers, square_width, wiggle, CellContent, InstanceIndexer, Outcome, Snapshot, TMSpec,
    WindowRow,
};
use tilesed::wang::energy_raw;

fn report(n: u32, ok: bool, detail: &str) {
    println!("criterion {n}: {}", if ok { "PASS" } else { "FAIL" });
    if !detail.is_empty() {
        println!("  {detail}");
    }
    assert!(ok, "criterion {n} failed: {detail}");
}

fn within(start: Instant, secs: u64) -> bool {
    start.elapsed() < Duration::from_secs(secs)
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Outcome bit of level `n` by direct simulation of `m` on `x_n`.
fn direct_bit(m: &TMSpec, n: u32) -> u8 {
    let x = InstanceIndexer::default().instance(n).unwrap();
    let r = run_reference(m, &parse_input(&x), square_width(n) - 2 * x.len()).unwrap();
    u8::from(r.outcome != Outcome::Accepted)
}

#[test]
fn criterion_01_valid_tilings_have_zero_energy() {
    let start = Instant::now();
    let ts = build_tileset(&full_layers()).unwrap();
    let mut ok = true;
    for l in [15, 63, 255] {
        let c = generate_tiling(&ts, l, l, (0, 0)).unwrap();
        ok &= energy_raw(ts.base(), &c).unwrap() == 0;
    }
    let t = start.elapsed();
    report(1, ok && within(start, 5), &format!("sizes 15, 63, 255 in {t:?}"));
}

#[test]
fn criterion_02_border_census() {
    let start = Instant::now();
    let ts = build_tileset(&full_layers()).unwrap();
    let mut ok = true;
    let mut checked = 0;
    for l in [32usize, 64, 128] {
        for phase in [(0, 0), (5, 11), (-17, 40), (63, 1)] {
            let c = generate_tiling(&ts, l, l, phase).unwrap();
            let borders = find_borders(&ts, &c);
            for n in [1u32, 2] {
                let count = borders.iter().filter(|b| b.n == n).count() as i64;
                let (lo, hi) = census_bounds(l, n);
                ok &= lo <= count && count <= hi;
                ok &= count == predicted_borders(n, l, l, phase);
                checked += 1;
            }
        }
    }
    report(
        2,
        ok && within(start, 10),
        &format!("{checked} (L, n, phase) cases in {:?}", start.elapsed()),
    );
}

/// Reference trace of `m` from a blank tape on a `w`-cell window with the
/// head starting at the centre; halted rows repeat.
fn windowed(m: &TMSpec, w: usize, rows: usize) -> Vec<WindowRow> {
    let r = run_reference(m, &[], rows - 1).unwrap();
    let centre = (w / 2) as i64;
    let place = |s: &Snapshot| -> WindowRow {
        (0..w as i64)
            .map(|x| CellContent {
                symbol: s.symbol_at(x - centre),
                state: (x - centre == s.head).then_some(s.state),
            })
            .collect()
    };
    let mut out: Vec<WindowRow> = r.trace.iter().map(place).collect();
    while out.len() < rows {
        out.push(out.last().unwrap().clone());
    }
    out
}

#[test]
fn criterion_03_tm_layers_follow_the_reference() {
    let start = Instant::now();
    let ts = build_tileset(&full_layers()).unwrap();
    let c = generate_tiling(&ts, 160, 160, (3, 9)).unwrap();
    let borders = find_borders(&ts, &c);
    let ix = InstanceIndexer::default();
    let mut ok = true;
    let mut squares = 0;
    for m in [builtin_counter(), parity(), ends_in_one(), always_accept(), wiggle()] {
        for b in borders.iter().filter(|b| b.n == 2 || b.n == 3) {
            let lm = level_machine(&m, ix, b.n).unwrap();
            let cm = compile(&lm).unwrap();
            let layers = square_layers(&ts, &c, b, &cm, 4).unwrap();
            let w = square_width(b.n);
            let want = windowed(&lm, w, w);
            let map = free_cells(&ts, &c, b).unwrap();
            ok &= layers.len() == 1;
            for (t, &y) in map.free_rows.iter().enumerate() {
                let row: Vec<CellContent> = map.free_cols.iter().map(|&x| layers[0][&(x, y)].clone()).collect();
                ok &= row == want[t];
                ok &= row.iter().filter(|c| c.state.is_some()).count() == 1;
                if t == 0 {
                    ok &= row
                        .iter()
                        .enumerate()
                        .all(|(j, c)| c.symbol == 0 && c.state == (j == w / 2).then_some(cm.machine.start));
                }
            }
            squares += 1;
        }
    }
    ok &= squares >= 20;
    report(
        3,
        ok && within(start, 30),
        &format!("{squares} squares in {:?}", start.elapsed()),
    );
}

#[test]
fn criterion_04_restricted_square_energy() {
    let start = Instant::now();
    let ix = InstanceIndexer::default();
    let mut ok = true;
    let mut cases = 0;
    for m in [
        always_accept(),
        always_reject(),
        parity(),
        ends_in_one(),
        guess_one(),
        wiggle(),
    ] {
        for n in [2u32, 3] {
            let cm = compile(&level_machine(&m, ix, n).unwrap()).unwrap();
            let e = restricted_square_energy(&cm, n, rational(DEFAULT_LAMBDA), SQUARE_SEARCH_BUDGET)
                .unwrap()
                .energy;
            ok &= e == rational(direct_bit(&m, n) as i64);
            cases += 1;
        }
    }
    report(
        4,
        ok && within(start, 60),
        &format!("{cases} (machine, n) cases in {:?}", start.elapsed()),
    );
}

#[test]
fn criterion_05_solver_crosscheck() {
    let start = Instant::now();
    let mut ok = true;
    let mut sets = 0;
    let mut largest = 0;
    let sizes = [(3usize, 4usize), (4, 3), (3, 3), (2, 4), (2, 3), (1, 4)];
    for seed in 0..60u64 {
        let d = 2 + (seed % 5) as usize;
        let ts = toys::random(d, 2 + (seed % 2) as usize, seed);
        let h = LocalHamiltonian::from_tileset(&ts, q(3, 2), |t| t == 0, |t| t + 1 == d).unwrap();
        let &(w, hh) = sizes
            .iter()
            .find(|&&(w, hh)| (d as f64).powi((w * hh) as i32) <= 2e7)
            .unwrap();
        let b = ground_state_brute(&h, w, hh).unwrap();
        let t = ground_state_transfer(&h, w, hh).unwrap();
        ok &= b.energy == t.energy;
        largest = largest.max(w * hh);
        sets += 1;
    }
    for seed in 0..4 {
        let h =
            LocalHamiltonian::from_tileset(&toys::random(3, 2, 500 + seed), rational(1), |_| false, |_| false).unwrap();
        ok &= grid_decompose_check(&h, 2, 2).unwrap().holds();
    }
    report(
        5,
        ok && sets >= 50 && largest == 12 && within(start, 120),
        &format!(
            "{sets} tile sets, largest lattice {largest} cells, in {:?}",
            start.elapsed()
        ),
    );
}

#[test]
fn criterion_06_series_and_thresholds() {
    let start = Instant::now();
    let one = series_value(&OutcomeSeries::fixed(&[1]), 20).unwrap();
    let all = series_value(&OutcomeSeries::constant(1), 20).unwrap();
    let t = thresholds_for(1, &[]).unwrap();
    let alpha = alpha_exact(1, &[]).unwrap();
    let ok = one.lower.to_rational() == q(1, 64)
        && all.upper == q(1, 60)
        && all.lower.to_rational() < q(1, 60)
        && t.alpha.to_rational() == q(1, 512)
        && t.beta.to_rational() == q(1, 64)
        && alpha == q(1, 960)
        && t.alpha.to_rational() > alpha;
    report(
        6,
        ok && within(start, 1),
        &format!("a1 = {}, beta1 = {}", t.alpha, t.beta),
    );
}

#[test]
fn criterion_07_extraction_roundtrip() {
    let start = Instant::now();
    let k = 6u32;
    let ix = InstanceIndexer::default();
    let mut recovered_ok = true;
    let mut max_bits = 0;
    for m in [parity(), ends_in_one(), always_reject(), guess_one()] {
        let s = OutcomeSeries::tiles_default(&m, ix);
        let mut queries = 0;
        let t = extract(k, &mut |p| {
            queries += 1;
            decide(&s, p, k)
        })
        .unwrap();
        let direct: Vec<u8> = (1..=k).map(|n| direct_bit(&m, n)).collect();
        recovered_ok &= t.recovered == direct && queries == k;
        max_bits = max_bits.max(t.max_bit_length());
    }
    let bits_ok = max_bits <= 4 * k as u64 + 4;
    report(
        7,
        recovered_ok && bits_ok && within(start, 60),
        &format!(
            "recovered bits match simulation: {recovered_ok}; longest query {max_bits} bits against a limit of {}",
            4 * k + 4
        ),
    );
}

#[test]
fn criterion_08_deficit_bounds() {
    let start = Instant::now();
    let ts = build_tileset(&full_layers()).unwrap();
    let trials = run_trials(&ts, 256, (1, 20), 1000, 42).unwrap();
    let ok = trials.len() == 1000
        && trials
            .iter()
            .all(|t| t.report.holds() && t.report.defects >= 1 && t.injected >= 1);
    let min_slack = (0..4)
        .map(|i| trials.iter().map(|t| t.report.slack()[i]).min().unwrap())
        .collect::<Vec<_>>();
    let max_d = trials.iter().map(|t| t.report.defects).max().unwrap();
    report(
        8,
        ok && within(start, 600),
        &format!(
            "1000 trials, |D| up to {max_d}, least slack {min_slack:?}, in {:?}",
            start.elapsed()
        ),
    );
}

/// Independent in-circle test through the exact circumcentre.
fn strictly_inside(a: Point, b: Point, c: Point, d: Point) -> bool {
    let f = |p: Point| (BigInt::from(p.0), BigInt::from(p.1));
    let (a, b, c, d) = (f(a), f(b), f(c), f(d));
    let den = BigInt::from(2) * (&a.0 * (&b.1 - &c.1) + &b.0 * (&c.1 - &a.1) + &c.0 * (&a.1 - &b.1));
    let sq = |p: &(BigInt, BigInt)| &p.0 * &p.0 + &p.1 * &p.1;
    let ux = sq(&a) * (&b.1 - &c.1) + sq(&b) * (&c.1 - &a.1) + sq(&c) * (&a.1 - &b.1);
    let uy = sq(&a) * (&c.0 - &b.0) + sq(&b) * (&a.0 - &c.0) + sq(&c) * (&b.0 - &a.0);
    let dist = |p: &(BigInt, BigInt)| {
        let dx = &p.0 * &den - &ux;
        let dy = &p.1 * &den - &uy;
        &dx * &dx + &dy * &dy
    };
    dist(&d) < dist(&a)
}

#[test]
fn criterion_09_delaunay_and_counting_lemmas() {
    let start = Instant::now();
    let mut ok = true;
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(3..=50);
        let pts: Vec<Point> = (0..n).map(|_| (rng.gen_range(0..80), rng.gen_range(0..80))).collect();
        let t = delaunay(&pts);
        let v = &t.vertices;
        for tr in &t.triangles {
            for (k, &p) in v.iter().enumerate() {
                if !tr.contains(&k) {
                    ok &= !strictly_inside(v[tr[0]], v[tr[1]], v[tr[2]], p);
                    ok &= incircle(v[tr[0]], v[tr[1]], v[tr[2]], p) <= 0;
                }
            }
        }
        let colinear = (2..v.len()).all(|k| orient(v[0], v[1], v[k]) == 0);
        ok &= colinear || t.edges.len() <= 3 * v.len() - 6;
    }
    let mut worst = Vec::new();
    for m in 1..=3 {
        let r = border_intersection_sweep(m, 3);
        ok &= r.holds();
        worst.push(format!("borders m={m}: {}/{}", r.max_observed, r.bound));
    }
    for l in 1..=3 {
        for m in 1..=l {
            let r = frame_cut_sweep(m, l);
            ok &= r.holds();
            worst.push(format!("frames m={m} l={l}: {}/{}", r.max_observed, r.bound));
        }
    }
    report(
        9,
        ok && within(start, 60),
        &format!("{} in {:?}", worst.join(", "), start.elapsed()),
    );
}

#[test]
fn criterion_10_finite_size_convergence() {
    let start = Instant::now();
    let cm = compile(&parity()).unwrap();
    let h = square_hamiltonian(&cm, rational(DEFAULT_LAMBDA)).unwrap();
    let series = OutcomeSeries::simulated(&parity(), InstanceIndexer::default())
        .bits(8)
        .unwrap();
    let mut ok = true;
    let mut ratios = Vec::new();
    for l in [64usize, 128] {
        let a = energy_density_bounds(&h, &series, l).unwrap().width().to_rational();
        let b = energy_density_bounds(&h, &series, 2 * l).unwrap().width().to_rational();
        ok &= b <= a.clone() * q(3, 5);
        ratios.push(format!("{:.4}", num_traits::ToPrimitive::to_f64(&(b / a)).unwrap()));
    }
    report(
        10,
        ok && within(start, 30),
        &format!("width ratios {}", ratios.join(", ")),
    );
}
