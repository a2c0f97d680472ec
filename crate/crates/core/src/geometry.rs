//! Curves as parametrization-free objects: the reparametrization-invariant
//! polyline distance, the minimal-partition tortuosity functional, and
//! annulus-crossing counting.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Planar point in lattice units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    #[inline]
    pub fn dist(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    #[inline]
    pub fn dist2(&self, other: &Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }
}

/// Tolerance for "on the boundary circle" decisions; experiment radii are
/// chosen off the lattice-distance spectrum so this never flips a verdict.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Source metadata carried by every sampled curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveMeta {
    /// Model tag, e.g. "percolation"; "synthetic" for constructed curves.
    pub model: String,
    pub seed: u64,
    /// Lattice spacing of the source lattice (1.0 for synthetic curves).
    pub spacing: f64,
    /// Whether the producing sampler guarantees a simple curve.
    pub simple: bool,
}

impl Default for CurveMeta {
    fn default() -> Self {
        CurveMeta { model: "synthetic".into(), seed: 0, spacing: 1.0, simple: false }
    }
}

/// An ordered polyline with the implicit index parametrization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    points: Vec<Point>,
    pub meta: CurveMeta,
}

impl Curve {
    /// Build a curve, enforcing the type invariants: at least two points and
    /// no repeated consecutive point.
    pub fn new(points: Vec<Point>, meta: CurveMeta) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::invalid("curve needs at least 2 points"));
        }
        for w in points.windows(2) {
            if w[0] == w[1] {
                return Err(Error::invalid("consecutive curve points must be distinct"));
            }
        }
        Ok(Curve { points, meta })
    }

    pub fn from_xy(points: &[(f64, f64)]) -> Result<Self> {
        Curve::new(
            points.iter().map(|&(x, y)| Point::new(x, y)).collect(),
            CurveMeta::default(),
        )
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn first(&self) -> Point {
        self.points[0]
    }

    pub fn last(&self) -> Point {
        *self.points.last().unwrap()
    }

    pub fn reversed(&self) -> Curve {
        let mut points = self.points.clone();
        points.reverse();
        Curve { points, meta: self.meta.clone() }
    }

    /// Euclidean length of the polyline.
    pub fn arc_length(&self) -> f64 {
        self.points.windows(2).map(|w| w[0].dist(&w[1])).sum()
    }

    pub fn diameter(&self) -> f64 {
        diameter(&self.points)
    }

    /// Resample at spacing <= `step`, keeping the original vertices.
    pub fn resample(&self, step: f64) -> Vec<Point> {
        assert!(step > 0.0);
        let mut out = Vec::with_capacity(self.points.len());
        out.push(self.points[0]);
        for w in self.points.windows(2) {
            let d = w[0].dist(&w[1]);
            let n = (d / step).ceil() as usize;
            for i in 1..=n {
                let t = i as f64 / n as f64;
                out.push(Point::new(
                    w[0].x + t * (w[1].x - w[0].x),
                    w[0].y + t * (w[1].y - w[0].y),
                ));
            }
        }
        out
    }

    /// Exact check that no two non-adjacent segments intersect.
    ///
    /// O(n^2) with a bounding-box prefilter; meant for validation in tests
    /// and on sampler outputs marked simple, not for hot loops.
    pub fn is_simple(&self) -> bool {
        let p = &self.points;
        let n = p.len() - 1; // segment count
        for i in 0..n {
            for j in (i + 2)..n {
                // consecutive segments share an endpoint; the wrap pair (0, n-1) is
                // not adjacent for an open curve.
                if segments_intersect(p[i], p[i + 1], p[j], p[j + 1]) {
                    return false;
                }
            }
        }
        true
    }
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

fn on_segment(a: Point, b: Point, c: Point) -> bool {
    c.x >= a.x.min(b.x) - BOUNDARY_TOL
        && c.x <= a.x.max(b.x) + BOUNDARY_TOL
        && c.y >= a.y.min(b.y) - BOUNDARY_TOL
        && c.y <= a.y.max(b.y) + BOUNDARY_TOL
}

fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    if a.x.max(b.x) < c.x.min(d.x) - BOUNDARY_TOL
        || c.x.max(d.x) < a.x.min(b.x) - BOUNDARY_TOL
        || a.y.max(b.y) < c.y.min(d.y) - BOUNDARY_TOL
        || c.y.max(d.y) < a.y.min(b.y) - BOUNDARY_TOL
    {
        return false;
    }
    let d1 = orient(a, b, c);
    let d2 = orient(a, b, d);
    let d3 = orient(c, d, a);
    let d4 = orient(c, d, b);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1.abs() <= BOUNDARY_TOL && on_segment(a, b, c))
        || (d2.abs() <= BOUNDARY_TOL && on_segment(a, b, d))
        || (d3.abs() <= BOUNDARY_TOL && on_segment(c, d, a))
        || (d4.abs() <= BOUNDARY_TOL && on_segment(c, d, b))
}

/// Diameter of a point set.
pub fn diameter(points: &[Point]) -> f64 {
    let mut best = 0.0f64;
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            best = best.max(points[i].dist2(&points[j]));
        }
    }
    best.sqrt()
}

/// Annulus A(z0, r, R) = { z : r < |z - z0| < R }.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Annulus {
    pub center: Point,
    pub r: f64,
    pub big_r: f64,
}

impl Annulus {
    pub fn new(center: Point, r: f64, big_r: f64) -> Result<Self> {
        if !(r > 0.0 && big_r > r) {
            return Err(Error::invalid("annulus needs 0 < r < R"));
        }
        Ok(Annulus { center, r, big_r })
    }

    /// Region classification relative to the closed annulus.
    pub fn region(&self, p: Point) -> Region {
        let d = self.center.dist(&p);
        if d < self.r - BOUNDARY_TOL {
            Region::Inside
        } else if d > self.big_r + BOUNDARY_TOL {
            Region::Outside
        } else {
            Region::Within
        }
    }
}

/// Where a point sits relative to an annulus: inside the inner disc, within
/// the closed annulus, or outside the outer circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Inside,
    Within,
    Outside,
}

/// One counted crossing: the sub-curve index range and a minimality flag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    /// Index of the last point in the starting complement component.
    pub start: usize,
    /// Index of the first point in the opposite complement component.
    pub end: usize,
    /// Crossing direction: true for inside -> outside.
    pub outward: bool,
    /// No genuine sub-crossing exists within `start..=end`.
    pub minimal: bool,
}

/// Crossing statistics of a curve against one annulus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct CrossingCount {
    pub total: usize,
    pub crossings: Vec<Crossing>,
}

/// Parameters t in (0,1) where the segment p+t(q-p) meets |z-c| = rad.
fn circle_hits(p: Point, q: Point, center: Point, rad: f64, out: &mut Vec<f64>) {
    let dx = q.x - p.x;
    let dy = q.y - p.y;
    let fx = p.x - center.x;
    let fy = p.y - center.y;
    let a = dx * dx + dy * dy;
    let b = 2.0 * (fx * dx + fy * dy);
    let c = fx * fx + fy * fy - rad * rad;
    let disc = b * b - 4.0 * a * c;
    if disc <= 0.0 || a == 0.0 {
        return;
    }
    let sq = disc.sqrt();
    for t in [(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)] {
        if t > 1e-12 && t < 1.0 - 1e-12 {
            out.push(t);
        }
    }
}

/// The polyline with all segment/circle intersections inserted, so that
/// every region the curve visits is witnessed by a sample. Each sample
/// carries the index of the original vertex at or before it.
fn refine_against(pts: &[Point], a: &Annulus) -> Vec<(Point, usize)> {
    let mut out = Vec::with_capacity(pts.len());
    let mut ts = Vec::new();
    for i in 0..pts.len() - 1 {
        out.push((pts[i], i));
        ts.clear();
        circle_hits(pts[i], pts[i + 1], a.center, a.r, &mut ts);
        circle_hits(pts[i], pts[i + 1], a.center, a.big_r, &mut ts);
        ts.sort_by(f64::total_cmp);
        // midpoints of the cut sub-segments witness every region touched
        let mut prev = 0.0;
        for k in 0..=ts.len() {
            let next = if k == ts.len() { 1.0 } else { ts[k] };
            let tm = (prev + next) / 2.0;
            out.push((
                Point::new(
                    pts[i].x + tm * (pts[i + 1].x - pts[i].x),
                    pts[i].y + tm * (pts[i + 1].y - pts[i].y),
                ),
                i,
            ));
            prev = next;
        }
    }
    out.push((*pts.last().unwrap(), pts.len() - 1));
    out
}

/// Count maximal disjoint crossings of `a` made by `c`.
///
/// A crossing is a sub-curve whose endpoints lie outside the closed annulus
/// in different components of the complement. The scan walks the polyline
/// (refined with segment/circle intersections so regions cannot be skipped
/// within one segment), tracking the last complement component visited;
/// every switch yields one crossing.
pub fn count_crossings(c: &Curve, a: &Annulus) -> CrossingCount {
    let refined = refine_against(c.points(), a);
    let mut out = CrossingCount::default();
    let mut last_comp: Option<(Region, usize)> = None;
    for &(p, i) in &refined {
        let reg = a.region(p);
        if reg == Region::Within {
            continue;
        }
        if let Some((prev, j)) = last_comp {
            if prev != reg {
                out.crossings.push(Crossing {
                    start: j,
                    end: i,
                    outward: reg == Region::Outside,
                    minimal: true,
                });
            }
        }
        last_comp = Some((reg, i));
    }
    // Every crossing recorded by the scan runs from the last exit of one
    // component to the first entry of the other; its interior stays in the
    // closed annulus, so it has no genuine sub-crossing.
    out.total = out.crossings.len();
    out
}

/// d_X upper bound: discrete Frechet distance between the two polylines
/// resampled at spacing <= `refine`.
///
/// The value decreases to the reparametrization-invariant sup-distance as
/// `refine` tends to zero; it is symmetric and zero exactly when the
/// resampled point sequences admit an order-preserving matching within
/// numerical tolerance.
pub fn curve_distance(c1: &Curve, c2: &Curve, refine: f64) -> Result<f64> {
    if refine <= 0.0 {
        return Err(Error::invalid("refine must be positive"));
    }
    let p = c1.resample(refine);
    let q = c2.resample(refine);
    Ok(discrete_frechet(&p, &q))
}

/// Discrete Frechet distance between point sequences (Eiter-Mannila DP).
pub fn discrete_frechet(p: &[Point], q: &[Point]) -> f64 {
    assert!(!p.is_empty() && !q.is_empty());
    let m = q.len();
    let mut prev = vec![0.0f64; m];
    let mut row = vec![0.0f64; m];
    prev[0] = p[0].dist2(&q[0]);
    for j in 1..m {
        prev[j] = prev[j - 1].max(p[0].dist2(&q[j]));
    }
    for i in 1..p.len() {
        row[0] = prev[0].max(p[i].dist2(&q[0]));
        for j in 1..m {
            let reach = prev[j].min(prev[j - 1]).min(row[j - 1]);
            row[j] = reach.max(p[i].dist2(&q[j]));
        }
        std::mem::swap(&mut prev, &mut row);
    }
    prev[m - 1].sqrt()
}

/// M(gamma, l): minimal number of pieces in a partition of the curve with
/// every piece of diameter <= l, partitions anchored at polyline vertices.
///
/// Greedy maximal extension is optimal for vertex-anchored partitions: a
/// piece's feasibility is monotone under shrinking, so any optimal partition
/// can be normalized, piece by piece, to the greedy one without increasing
/// the piece count. A single segment longer than l (which no vertex
/// partition can split) is counted as ceil(len/l) uniform pieces.
pub fn tortuosity(c: &Curve, l: f64) -> Result<usize> {
    if l <= 0.0 {
        return Err(Error::invalid("piece diameter l must be positive"));
    }
    let pts = c.points();
    let l2 = l * l;
    let mut pieces = 0usize;
    let mut start = 0usize;
    while start + 1 < pts.len() {
        // extend the piece while its diameter stays <= l
        let mut end = start;
        let mut minx = pts[start].x;
        let mut maxx = minx;
        let mut miny = pts[start].y;
        let mut maxy = miny;
        'grow: while end + 1 < pts.len() {
            let cand = pts[end + 1];
            let nminx = minx.min(cand.x);
            let nmaxx = maxx.max(cand.x);
            let nminy = miny.min(cand.y);
            let nmaxy = maxy.max(cand.y);
            let box_diag2 = (nmaxx - nminx).powi(2) + (nmaxy - nminy).powi(2);
            if box_diag2 > l2 {
                // box diagonal bounds the diameter from above only; check pairs
                for k in start..=end {
                    if pts[k].dist2(&cand) > l2 {
                        break 'grow;
                    }
                }
            }
            end += 1;
            minx = nminx;
            maxx = nmaxx;
            miny = nminy;
            maxy = nmaxy;
        }
        if end == start {
            let seg = pts[start].dist(&pts[start + 1]);
            pieces += (seg / l).ceil() as usize;
            start += 1;
        } else {
            pieces += 1;
            start = end;
        }
    }
    Ok(pieces.max(1))
}
