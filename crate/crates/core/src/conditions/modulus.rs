//! Discrete modulus of topological quadrilaterals via Dirichlet energy:
//! solve the potential (0 on S0, 1 on S2, insulated S1/S3), then
//! modulus = 1 / energy. Finite-volume edge weights (half weight along the
//! insulated boundary) make grid-aligned rectangles exact.

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::linalg::WeightedGraph;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// A topological quadrilateral, in the shapes the experiments use.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum TopQuad {
    /// Polygonal region with four marked boundary arcs S0..S3 in
    /// counterclockwise order: `breaks[k]` is the vertex index where arc
    /// S_k starts (arcs run to the next break, cyclically).
    Polygon { vertices: Vec<Point>, breaks: [usize; 4] },
    /// Annulus r < |z - center| < R cut along the positive x-direction
    /// radius; S0 = inner circle, S2 = outer circle, the cut sides are
    /// insulated.
    CutAnnulus { center: Point, r: f64, big_r: f64 },
}

impl TopQuad {
    pub fn rectangle(l: f64, w: f64) -> TopQuad {
        // S0 = left short side, S2 = right: modulus l / w
        TopQuad::Polygon {
            vertices: vec![
                Point::new(0.0, 0.0),
                Point::new(l, 0.0),
                Point::new(l, w),
                Point::new(0.0, w),
            ],
            breaks: [3, 0, 1, 2], // S0: v3->v0 (left), S1: bottom, S2: right, S3: top
        }
    }

    pub fn scaled(&self, s: f64) -> TopQuad {
        match self {
            TopQuad::Polygon { vertices, breaks } => TopQuad::Polygon {
                vertices: vertices.iter().map(|p| Point::new(p.x * s, p.y * s)).collect(),
                breaks: *breaks,
            },
            TopQuad::CutAnnulus { center, r, big_r } => TopQuad::CutAnnulus {
                center: Point::new(center.x * s, center.y * s),
                r: r * s,
                big_r: big_r * s,
            },
        }
    }
}

/// Discrete modulus; `refinement` halves the grid spacing per unit: the
/// spacing is (smallest feature size) / 2^refinement.
pub fn modulus_quad(quad: &TopQuad, refinement: u32) -> Result<f64> {
    match quad {
        TopQuad::Polygon { vertices, breaks } => polygon_modulus(vertices, *breaks, refinement),
        TopQuad::CutAnnulus { center, r, big_r } => {
            if !(*r > 0.0 && big_r > r) {
                return Err(Error::invalid("cut annulus needs 0 < r < R"));
            }
            cut_annulus_modulus(*center, *r, *big_r, refinement)
        }
    }
}

fn polygon_modulus(vertices: &[Point], breaks: [usize; 4], refinement: u32) -> Result<f64> {
    if vertices.len() < 4 {
        return Err(Error::invalid("quad polygon needs >= 4 vertices"));
    }
    for w in breaks.windows(2) {
        if w[0] == w[1] {
            return Err(Error::invalid("degenerate marked arc"));
        }
    }
    let (lo, hi) = bbox(vertices);
    // feature scale: the shortest polygon edge (resolves narrow arms)
    let n = vertices.len();
    let min_edge = (0..n)
        .map(|i| vertices[i].dist(&vertices[(i + 1) % n]))
        .fold(f64::INFINITY, f64::min);
    if !(min_edge > 0.0) {
        return Err(Error::invalid("degenerate quad"));
    }
    let h = min_edge / (1u64 << refinement) as f64;
    let nx = ((hi.x - lo.x) / h).round() as i64;
    let ny = ((hi.y - lo.y) / h).round() as i64;

    let arc = |k: usize| -> Vec<(Point, Point)> {
        let start = breaks[k];
        let end = breaks[(k + 1) % 4];
        let n = vertices.len();
        let mut segs = Vec::new();
        let mut i = start;
        while i != end {
            let j = (i + 1) % n;
            segs.push((vertices[i], vertices[j]));
            i = j;
        }
        segs
    };
    let s0 = arc(0);
    let s2 = arc(2);

    let inside = |p: Point| point_in_polygon(vertices, p);
    let mut coords: Vec<(i64, i64)> = Vec::new();
    let mut index: HashMap<(i64, i64), usize> = HashMap::new();
    for j in 0..=ny {
        for i in 0..=nx {
            let p = node_pos(lo, h, i, j);
            if inside_or_boundary(vertices, p, 0.26 * h) {
                index.insert((i, j), coords.len());
                coords.push((i, j));
            }
        }
    }
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    for (&(i, j), &u) in &index {
        for (di, dj) in [(1i64, 0i64), (0, 1)] {
            if let Some(&v) = index.get(&(i + di, j + dj)) {
                let a = node_pos(lo, h, i, j);
                let b = node_pos(lo, h, i + di, j + dj);
                let m = Point::new((a.x + b.x) / 2.0, (a.y + b.y) / 2.0);
                // transverse dual-cell overlap: full, half, or dropped
                let t = Point::new(-(b.y - a.y) / 2.0, (b.x - a.x) / 2.0);
                let w = (u8::from(inside(Point::new(m.x + t.x, m.y + t.y)))
                    + u8::from(inside(Point::new(m.x - t.x, m.y - t.y)))) as f64
                    / 2.0;
                if w > 0.0 {
                    edges.push((u, v, w));
                }
            }
        }
    }
    let g = WeightedGraph::from_edges(coords.len(), &edges);
    let mut fixed = vec![false; coords.len()];
    let mut values = vec![0f64; coords.len()];
    let tol = 0.51 * h;
    for (k, &(i, j)) in coords.iter().enumerate() {
        let p = node_pos(lo, h, i, j);
        if dist_to_segs(&s0, p) < tol {
            fixed[k] = true;
            values[k] = 0.0;
        } else if dist_to_segs(&s2, p) < tol {
            fixed[k] = true;
            values[k] = 1.0;
        }
    }
    if !fixed.iter().any(|&f| f) {
        return Err(Error::invalid("marked arcs grabbed no grid nodes"));
    }
    let u = g.solve_dirichlet(&fixed, &values, None, 1e-11);
    let e = g.energy(&u);
    if !(e > 0.0) {
        return Err(Error::invalid("zero Dirichlet energy; arcs may coincide"));
    }
    Ok(1.0 / e)
}

fn cut_annulus_modulus(center: Point, r: f64, big_r: f64, refinement: u32) -> Result<f64> {
    let h = r / (1u64 << refinement.min(12)) as f64 * 4.0;
    // grid offset half a cell so no node sits exactly on the cut ray
    let reach = (big_r + 2.0 * h) / h;
    let n = reach.ceil() as i64;
    let mut index: HashMap<(i64, i64), usize> = HashMap::new();
    let mut coords: Vec<(i64, i64)> = Vec::new();
    let pos = |i: i64, j: i64| -> Point {
        Point::new(center.x + i as f64 * h, center.y + (j as f64 + 0.5) * h)
    };
    for j in -n..=n {
        for i in -n..=n {
            let p = pos(i, j);
            let d = p.dist(&center);
            if d <= big_r + 1.5 * h {
                index.insert((i, j), coords.len());
                coords.push((i, j));
            }
        }
    }
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    for (&(i, j), &u) in &index {
        for (di, dj) in [(1i64, 0i64), (0, 1)] {
            if let Some(&v) = index.get(&(i + di, j + dj)) {
                // the cut along the positive x-ray insulates vertical edges
                // crossing y = 0 at x > 0
                if dj == 1 {
                    let a = pos(i, j);
                    let b = pos(i, j + 1);
                    if a.y < center.y && b.y > center.y && a.x > center.x {
                        continue;
                    }
                }
                edges.push((u, v, 1.0));
            }
        }
    }
    let g = WeightedGraph::from_edges(coords.len(), &edges);
    let mut fixed = vec![false; coords.len()];
    let mut values = vec![0f64; coords.len()];
    for (k, &(i, j)) in coords.iter().enumerate() {
        let d = pos(i, j).dist(&center);
        if d <= r {
            fixed[k] = true;
            values[k] = 0.0;
        } else if d >= big_r {
            fixed[k] = true;
            values[k] = 1.0;
        }
    }
    let u = g.solve_dirichlet(&fixed, &values, None, 1e-11);
    let e = g.energy(&u);
    if !(e > 0.0) {
        return Err(Error::invalid("zero Dirichlet energy"));
    }
    Ok(1.0 / e)
}

fn node_pos(lo: Point, h: f64, i: i64, j: i64) -> Point {
    Point::new(lo.x + i as f64 * h, lo.y + j as f64 * h)
}

fn bbox(pts: &[Point]) -> (Point, Point) {
    let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in pts {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    }
    (lo, hi)
}

fn point_in_polygon(poly: &[Point], p: Point) -> bool {
    let mut inside = false;
    let n = poly.len();
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        if (a.y > p.y) != (b.y > p.y) {
            let t = (p.y - a.y) / (b.y - a.y);
            if p.x < a.x + t * (b.x - a.x) {
                inside = !inside;
            }
        }
    }
    inside
}

fn inside_or_boundary(poly: &[Point], p: Point, tol: f64) -> bool {
    if point_in_polygon(poly, p) {
        return true;
    }
    let n = poly.len();
    let segs: Vec<(Point, Point)> = (0..n).map(|i| (poly[i], poly[(i + 1) % n])).collect();
    dist_to_segs(&segs, p) <= tol
}

fn dist_to_segs(segs: &[(Point, Point)], p: Point) -> f64 {
    let mut best = f64::INFINITY;
    for &(a, b) in segs {
        let vx = b.x - a.x;
        let vy = b.y - a.y;
        let len2 = vx * vx + vy * vy;
        let t = if len2 == 0.0 {
            0.0
        } else {
            (((p.x - a.x) * vx + (p.y - a.y) * vy) / len2).clamp(0.0, 1.0)
        };
        let proj = Point::new(a.x + t * vx, a.y + t * vy);
        best = best.min(p.dist(&proj));
    }
    best
}
