use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tilesed::deficit::{
    border_intersection_sweep, count_frame_cuts, decompose, delaunay, frame_cut_sweep, inject_defects,
    measure_deficits, run_trials, FrameSet, Point,
};
use tilesed::robinson::{build_tileset, full_layers, generate_tiling, predicted_borders, Layer};
use tilesed::wang::defects;

/// Positive when `d` is strictly inside the circumcircle of `a, b, c`,
/// computed with exact rationals from the circumcentre.
fn strictly_inside(a: Point, b: Point, c: Point, d: Point) -> bool {
    let f = |p: Point| (p.0 as i128, p.1 as i128);
    let (a, b, c, d) = (f(a), f(b), f(c), f(d));
    let den = 2 * (a.0 * (b.1 - c.1) + b.0 * (c.1 - a.1) + c.0 * (a.1 - b.1));
    let sq = |p: (i128, i128)| p.0 * p.0 + p.1 * p.1;
    let ux = sq(a) * (b.1 - c.1) + sq(b) * (c.1 - a.1) + sq(c) * (a.1 - b.1);
    let uy = sq(a) * (c.0 - b.0) + sq(b) * (a.0 - c.0) + sq(c) * (b.0 - a.0);
    // centre = (ux, uy) / den; compare squared distances times den^2
    let dist = |p: (i128, i128)| (p.0 * den - ux).pow(2) + (p.1 * den - uy).pow(2);
    dist(d) < dist(a)
}

/// Boundary vertices of the convex hull, counting points on hull edges.
fn hull_boundary(pts: &[Point]) -> usize {
    let cross = |o: Point, a: Point, b: Point| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    pts.iter()
        .filter(|&&p| {
            // p is on the boundary iff some line through p has all points on one closed side
            pts.iter().any(|&q| {
                q != p && {
                    let l = pts.iter().map(|&r| cross(p, q, r));
                    let v: Vec<i64> = l.collect();
                    v.iter().all(|&s| s >= 0) || v.iter().all(|&s| s <= 0)
                }
            })
        })
        .count()
}

fn segments_cross(a: Point, b: Point, c: Point, d: Point) -> bool {
    let o = |p: Point, q: Point, r: Point| ((q.0 - p.0) * (r.1 - p.1) - (q.1 - p.1) * (r.0 - p.0)).signum();
    o(a, b, c) * o(a, b, d) < 0 && o(c, d, a) * o(c, d, b) < 0
}

fn random_points(seed: u64, n: usize, range: i64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<Point> = (0..n)
        .map(|_| (rng.gen_range(0..range), rng.gen_range(0..range)))
        .collect();
    v.sort();
    v.dedup();
    v
}

#[test]
fn delaunay_against_all_triples() {
    for seed in 0..30 {
        let pts = random_points(seed, 3 + (seed as usize * 7) % 48, 60);
        let t = delaunay(&pts);
        let v = &t.vertices;
        for tr in &t.triangles {
            for (k, &p) in v.iter().enumerate() {
                if !tr.contains(&k) {
                    assert!(!strictly_inside(v[tr[0]], v[tr[1]], v[tr[2]], p), "seed {seed}");
                }
            }
        }
        let n = v.len();
        assert!(t.edges.len() <= 3 * n - 6 || n < 3);
        assert_eq!(t.edges.len(), 3 * n - 3 - hull_boundary(v), "seed {seed}");
        for (i, e) in t.edges.iter().enumerate() {
            for f in &t.edges[i + 1..] {
                assert!(!segments_cross(v[e.0], v[e.1], v[f.0], v[f.1]));
            }
        }
    }
}

#[test]
fn cocircular_points_are_triangulated_deterministically() {
    let octagon = [(2, 0), (4, 0), (6, 2), (6, 4), (4, 6), (2, 6), (0, 4), (0, 2)];
    let t = delaunay(&octagon);
    assert_eq!(t.edges.len(), 8 + 5);
    let mut rev = octagon;
    rev.reverse();
    assert_eq!(delaunay(&rev).edges, t.edges);
}

#[test]
fn frame_cut_lemma_holds_exhaustively() {
    for l in 1..=3 {
        for m in 1..=l {
            let r = frame_cut_sweep(m, l);
            assert!(r.holds(), "{r:?}");
        }
    }
}

#[test]
fn border_intersection_lemma_holds_for_short_edges() {
    for m in 1..=2 {
        let r = border_intersection_sweep(m, 3);
        assert!(r.holds(), "{r:?}");
    }
}

#[test]
fn frame_cuts_of_a_short_edge_inside_one_frame() {
    let fs = FrameSet::new(1, 40, 40, (0, 0));
    // cells (3, 3) and (3, 4) sit inside the border square at (1, 1)
    let t = delaunay(&[(6, 7), (6, 5)]);
    let cuts = count_frame_cuts(&t, &[fs]);
    assert_eq!(cuts[0].edges, vec![(0, 1, 0)]);
}

#[test]
fn defect_free_tiling_is_one_domain() {
    let ts = build_tileset(&[Layer::Robinson, Layer::Dash]).unwrap();
    let c = generate_tiling(&ts, 40, 40, (3, 5)).unwrap();
    let d = decompose(&defects(ts.base(), &c).unwrap(), 40, 40, 2);
    assert_eq!(d.levels.len(), 2);
    for lv in &d.levels {
        assert_eq!(lv.domains.len(), 1);
        assert!(lv.undomains.is_empty());
        assert_eq!(lv.domains[0].len(), 1600);
    }
}

#[test]
fn nearby_defects_open_an_undomain() {
    let ts = build_tileset(&[Layer::Robinson, Layer::Dash]).unwrap();
    let mut c = generate_tiling(&ts, 40, 40, (0, 0)).unwrap();
    for (x, y) in [(10, 10), (13, 10)] {
        let t = ts.base().clashing_at(&c, x, y).unwrap();
        c.set(x, y, t);
    }
    let ds = defects(ts.base(), &c).unwrap();
    let d = decompose(&ds, 40, 40, 2);
    let l1 = d.level(1).unwrap();
    for x in 10..=13 {
        assert!(!l1.in_domain[10 * 40 + x], "cell ({x}, 10)");
    }
    assert!(l1
        .undomains
        .iter()
        .any(|u| u.contains(&(11, 10)) && u.contains(&(12, 10))));
    assert!(d.nested());
}

#[test]
fn domains_nest_and_keep_defects_apart() {
    let ts = build_tileset(&[Layer::Robinson, Layer::Dash]).unwrap();
    for seed in 0..4 {
        let base = generate_tiling(&ts, 64, 64, (seed as i64, 7)).unwrap();
        let c = inject_defects(ts.base(), &base, 3 + seed as usize, seed).unwrap();
        let ds = defects(ts.base(), &c).unwrap();
        let d = decompose(&ds, 64, 64, 3);
        assert!(d.nested(), "seed {seed}");
        for lv in &d.levels {
            let total: usize = lv.domains.iter().chain(&lv.undomains).map(Vec::len).sum();
            assert_eq!(total, 64 * 64);
            let limit = 2i64 << (2 * lv.n);
            for dom in &lv.domains {
                let inside: Vec<Point> = ds
                    .iter()
                    .filter(|p| {
                        p.cells()
                            .iter()
                            .all(|c| dom.binary_search_by_key(&(c.1, c.0), |&(x, y)| (y, x)).is_ok())
                    })
                    .map(|p| p.doubled())
                    .collect();
                for (i, p) in inside.iter().enumerate() {
                    for q in &inside[i + 1..] {
                        assert!((p.0 - q.0).abs().max((p.1 - q.1).abs()) > limit);
                    }
                }
            }
        }
    }
}

#[test]
fn generated_tilings_have_no_deficit() {
    let ts = build_tileset(&full_layers()).unwrap();
    for phase in [(0, 0), (17, 90), (-40, 3)] {
        let c = generate_tiling(&ts, 96, 96, phase).unwrap();
        let r = measure_deficits(&ts, &c, phase).unwrap();
        assert_eq!(r.defects, 0);
        assert!(
            r.levels
                .iter()
                .all(|l| l.border_deficit == 0 && l.correct == l.predicted),
            "{r:?}"
        );
        assert!(r.deficit >= 0 && r.tdeficit == r.deficit, "{r:?}");
    }
    let c = generate_tiling(&ts, 96, 96, (0, 0)).unwrap();
    let best = (0..128)
        .flat_map(|y| (0..128).map(move |x| (x, y)))
        .max_by_key(|&p| (1..=2).map(|n| predicted_borders(n, 32, 32, p)).sum::<i64>())
        .unwrap();
    let r = measure_deficits(&ts, &generate_tiling(&ts, 32, 32, best).unwrap(), best).unwrap();
    assert_eq!(r.deficit, 0);
    assert!(measure_deficits(&ts, &c, (0, 0)).unwrap().holds());
}

#[test]
fn injection_locality() {
    let ts = build_tileset(&full_layers()).unwrap();
    let c = generate_tiling(&ts, 48, 48, (2, 2)).unwrap();
    for seed in 0..20 {
        let one = inject_defects(ts.base(), &c, 1, seed).unwrap();
        let k = defects(ts.base(), &one).unwrap().len();
        assert!((1..=4).contains(&k), "seed {seed}: {k}");
    }
}

#[test]
fn seeded_trials_respect_the_bounds() {
    let ts = build_tileset(&full_layers()).unwrap();
    let a = run_trials(&ts, 64, (1, 6), 12, 5).unwrap();
    assert_eq!(a, run_trials(&ts, 64, (1, 6), 12, 5).unwrap());
    for t in &a {
        assert!(t.report.defects >= 1);
        assert!(t.report.holds(), "{:?}", t.report);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn delaunay_edge_count_bound(seed in any::<u64>(), n in 3usize..40) {
        let pts = random_points(seed, n, 30);
        let t = delaunay(&pts);
        let v = t.vertices.len();
        if v >= 3 {
            prop_assert!(t.edges.len() <= 3 * v - 6 || t.triangles.is_empty());
        }
    }
}
