//! Defect graphs and their Delaunay triangulations, on doubled integer
//! coordinates with exact predicates.

use std::cmp::Ordering;
use std::collections::BTreeSet;

pub type Point = (i64, i64);

/// Twice the signed area of `abc`; positive when counter-clockwise.
pub fn orient(a: Point, b: Point, c: Point) -> i128 {
    let (ax, ay, bx, by, cx, cy) = (
        a.0 as i128,
        a.1 as i128,
        b.0 as i128,
        b.1 as i128,
        c.0 as i128,
        c.1 as i128,
    );
    (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
}

/// Positive when `d` lies strictly inside the circle through `a, b, c`
/// (any orientation), zero when on it.
pub fn incircle(a: Point, b: Point, c: Point, d: Point) -> i128 {
    let row = |p: Point| {
        let (x, y) = ((p.0 - d.0) as i128, (p.1 - d.1) as i128);
        (x, y, x * x + y * y)
    };
    let (a0, a1, a2) = row(a);
    let (b0, b1, b2) = row(b);
    let (c0, c1, c2) = row(c);
    let det = a0 * (b1 * c2 - b2 * c1) - a1 * (b0 * c2 - b2 * c0) + a2 * (b0 * c1 - b1 * c0);
    if orient(a, b, c) > 0 {
        det
    } else {
        -det
    }
}

/// Complete geometric graph on the defect points.
#[derive(Debug, Clone)]
pub struct DefectGraph {
    pub vertices: Vec<Point>,
    /// `(i, j, linf_length)` with `i < j`; lengths in doubled units.
    pub edges: Vec<(usize, usize, i64)>,
}

pub fn linf(a: Point, b: Point) -> i64 {
    (a.0 - b.0).abs().max((a.1 - b.1).abs())
}

pub fn defect_graph(points: &[Point]) -> DefectGraph {
    let mut edges = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            edges.push((i, j, linf(points[i], points[j])));
        }
    }
    DefectGraph {
        vertices: points.to_vec(),
        edges,
    }
}

#[derive(Debug, Clone)]
pub struct DelaunayTriangulation {
    pub vertices: Vec<Point>,
    pub edges: Vec<(usize, usize)>,
    /// Counter-clockwise vertex triples.
    pub triangles: Vec<[usize; 3]>,
}

/// Delaunay triangulation of distinct points. Triangles are found as the
/// triples with an empty circumcircle; points sharing one empty circle are
/// triangulated as a fan from their lexicographically least member.
/// Colinear input gives the path through the points in sorted order.
pub fn delaunay(points: &[Point]) -> DelaunayTriangulation {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort();
    pts.dedup();
    let n = pts.len();
    let mut edges = BTreeSet::new();
    let mut triangles = Vec::new();
    let colinear = (2..n).all(|k| orient(pts[0], pts[1], pts[k]) == 0);
    if colinear {
        for i in 1..n {
            edges.insert((i - 1, i));
        }
    } else {
        let mut groups: BTreeSet<Vec<usize>> = BTreeSet::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    if orient(pts[i], pts[j], pts[k]) == 0 {
                        continue;
                    }
                    let mut on = vec![i, j, k];
                    let mut empty = true;
                    for l in 0..n {
                        if l == i || l == j || l == k {
                            continue;
                        }
                        match incircle(pts[i], pts[j], pts[k], pts[l]).cmp(&0) {
                            Ordering::Greater => {
                                empty = false;
                                break;
                            }
                            Ordering::Equal => on.push(l),
                            Ordering::Less => {}
                        }
                    }
                    if empty {
                        on.sort_unstable();
                        groups.insert(on);
                    }
                }
            }
        }
        for g in groups {
            let p0 = g[0];
            let mut rest: Vec<usize> = g[1..].to_vec();
            rest.sort_by(|&a, &b| orient(pts[p0], pts[b], pts[a]).cmp(&0));
            for w in rest.windows(2) {
                triangles.push([p0, w[0], w[1]]);
                for &(a, b) in &[(p0, w[0]), (w[0], w[1]), (p0, w[1])] {
                    edges.insert((a.min(b), a.max(b)));
                }
            }
        }
    }
    DelaunayTriangulation {
        vertices: pts,
        edges: edges.into_iter().collect(),
        triangles,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_triangle() {
        let t = delaunay(&[(0, 0), (4, 0), (0, 4)]);
        assert_eq!(t.edges.len(), 3);
        assert_eq!(t.triangles.len(), 1);
    }

    #[test]
    fn square_gets_one_diagonal() {
        let t = delaunay(&[(0, 0), (2, 0), (0, 2), (2, 2)]);
        assert_eq!(t.edges.len(), 5);
        assert_eq!(t.triangles.len(), 2);
    }

    #[test]
    fn colinear_points_form_a_path() {
        let t = delaunay(&[(0, 0), (6, 3), (2, 1), (4, 2)]);
        assert_eq!(t.edges, vec![(0, 1), (1, 2), (2, 3)]);
        assert!(delaunay(&[(1, 1)]).edges.is_empty());
    }

    #[test]
    fn triangles_are_counter_clockwise() {
        let t = delaunay(&[(0, 0), (10, 1), (3, 7), (8, 9), (-4, 5)]);
        for tr in &t.triangles {
            assert!(orient(t.vertices[tr[0]], t.vertices[tr[1]], t.vertices[tr[2]]) > 0);
        }
    }
}
