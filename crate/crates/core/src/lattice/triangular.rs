//! Triangular-lattice admissible domains and their hexagonal dual.
//!
//! Sites live on the triangular lattice in axial coordinates (x, y),
//! embedded at x*e1 + y*e2 with e1 = (1,0), e2 = (1/2, sqrt(3)/2); each
//! site has the six neighbors (+-1,0), (0,+-1), (1,-1), (-1,1). Vertices of
//! the hexagonal dual are triangle faces; the interface samplers walk on
//! those.
//!
//! An admissible domain is cut out by two boundary arcs of fixed sites
//! (arc1 carries the open / "1" condition, arc2 the closed / "0" one)
//! meeting across the marked gaps a and b.

use super::{DomainSpec, LatticeKind, SiteGraph};
use crate::error::{Error, Result};
use crate::geometry::Point;
use std::collections::{HashMap, HashSet};

pub const NEIGHBORS: [(i32, i32); 6] = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)];

pub fn embed(x: i32, y: i32) -> Point {
    Point::new(x as f64 + y as f64 / 2.0, y as f64 * 3f64.sqrt() / 2.0)
}

/// A triangular face = a vertex of the hexagonal dual lattice.
/// Up-face (x,y) has corners (x,y), (x+1,y), (x,y+1); the down-face has
/// corners (x+1,y), (x,y+1), (x+1,y+1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TriFace {
    pub x: i32,
    pub y: i32,
    pub up: bool,
}

impl TriFace {
    pub fn corners(&self) -> [(i32, i32); 3] {
        if self.up {
            [(self.x, self.y), (self.x + 1, self.y), (self.x, self.y + 1)]
        } else {
            [(self.x + 1, self.y), (self.x, self.y + 1), (self.x + 1, self.y + 1)]
        }
    }

    /// The three dual neighbors, each paired with the shared lattice edge.
    pub fn neighbors(&self) -> [(TriFace, ((i32, i32), (i32, i32))); 3] {
        let (x, y) = (self.x, self.y);
        if self.up {
            [
                (TriFace { x, y, up: false }, ((x + 1, y), (x, y + 1))),
                (TriFace { x: x - 1, y, up: false }, ((x, y), (x, y + 1))),
                (TriFace { x, y: y - 1, up: false }, ((x, y), (x + 1, y))),
            ]
        } else {
            [
                (TriFace { x, y, up: true }, ((x + 1, y), (x, y + 1))),
                (TriFace { x: x + 1, y, up: true }, ((x + 1, y), (x + 1, y + 1))),
                (TriFace { x, y: y + 1, up: true }, ((x, y + 1), (x + 1, y + 1))),
            ]
        }
    }

    /// Face across a given corner pair (the shared lattice edge).
    pub fn across(&self, edge: ((i32, i32), (i32, i32))) -> TriFace {
        for (f, e) in self.neighbors() {
            if e == edge || (e.1, e.0) == edge {
                return f;
            }
        }
        unreachable!("edge {:?} not on face {:?}", edge, self)
    }

    pub fn center(&self) -> Point {
        let cs = self.corners();
        let ps: Vec<Point> = cs.iter().map(|&(x, y)| embed(x, y)).collect();
        Point::new(
            (ps[0].x + ps[1].x + ps[2].x) / 3.0,
            (ps[0].y + ps[1].y + ps[2].y) / 3.0,
        )
    }

    /// The corner that is not on `edge`.
    pub fn third_corner(&self, edge: ((i32, i32), (i32, i32))) -> (i32, i32) {
        *self
            .corners()
            .iter()
            .find(|&&c| c != edge.0 && c != edge.1)
            .expect("edge not on face")
    }
}

/// The two faces sharing a lattice edge.
pub fn faces_of_edge(e: ((i32, i32), (i32, i32))) -> [TriFace; 2] {
    let ((x1, y1), (x2, y2)) = e;
    let d = (x2 - x1, y2 - y1);
    // normalize to the three canonical directions
    let ((ax, ay), dir) = if matches!(d, (1, 0) | (-1, 0)) {
        (if d == (1, 0) { (x1, y1) } else { (x2, y2) }, 0)
    } else if matches!(d, (0, 1) | (0, -1)) {
        (if d == (0, 1) { (x1, y1) } else { (x2, y2) }, 1)
    } else if matches!(d, (1, -1) | (-1, 1)) {
        (if d == (1, -1) { (x1, y1) } else { (x2, y2) }, 2)
    } else {
        panic!("not a lattice edge: {e:?}");
    };
    match dir {
        // horizontal edge (a)-(a+e1): faces U(ax,ay) and D(ax,ay-1)
        0 => [
            TriFace { x: ax, y: ay, up: true },
            TriFace { x: ax, y: ay - 1, up: false },
        ],
        // edge (a)-(a+e2): faces U(ax,ay) and D(ax-1,ay)
        1 => [
            TriFace { x: ax, y: ay, up: true },
            TriFace { x: ax - 1, y: ay, up: false },
        ],
        // edge (a)-(a+e1-e2), a = upper-left end: shared by U(ax,ay-1), D(ax,ay-1)
        _ => [
            TriFace { x: ax, y: ay - 1, up: true },
            TriFace { x: ax, y: ay - 1, up: false },
        ],
    }
}

/// A directed hexagonal-lattice edge: the step between two adjacent faces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HexEdge {
    pub from: TriFace,
    pub to: TriFace,
}

/// Triangular-lattice admissible domain.
#[derive(Debug, Clone)]
pub struct TriDomain {
    pub interior: HashSet<(i32, i32)>,
    /// arc1, carrying boundary condition "open" (1).
    pub arc1: Vec<(i32, i32)>,
    /// arc2, carrying boundary condition "closed" (0).
    pub arc2: Vec<(i32, i32)>,
    fixed: HashMap<(i32, i32), bool>,
    sites: SiteGraph,
}

impl TriDomain {
    pub fn new(
        interior: HashSet<(i32, i32)>,
        arc1: Vec<(i32, i32)>,
        arc2: Vec<(i32, i32)>,
    ) -> Result<Self> {
        if arc1.is_empty() || arc2.is_empty() {
            return Err(Error::invalid("boundary arcs must be non-empty"));
        }
        for arc in [&arc1, &arc2] {
            for w in arc.windows(2) {
                let d = (w[1].0 - w[0].0, w[1].1 - w[0].1);
                if !NEIGHBORS.contains(&d) {
                    return Err(Error::invalid(format!("arc not a lattice path at {w:?}")));
                }
            }
        }
        for gap in [(arc1[0], arc2[0]), (*arc1.last().unwrap(), *arc2.last().unwrap())] {
            let d = (gap.1 .0 - gap.0 .0, gap.1 .1 - gap.0 .1);
            if !NEIGHBORS.contains(&d) {
                return Err(Error::invalid(
                    "arcs must meet across single lattice edges at a and b",
                ));
            }
        }
        let mut fixed = HashMap::new();
        for &s in &arc1 {
            fixed.insert(s, true);
        }
        for &s in &arc2 {
            if fixed.insert(s, false) == Some(true) {
                return Err(Error::invalid(format!("arcs overlap at {s:?}")));
            }
        }
        if interior.iter().any(|s| fixed.contains_key(s)) {
            return Err(Error::invalid("interior meets boundary arcs"));
        }
        let sites = build_site_graph(&interior, &fixed);
        Ok(TriDomain { interior, arc1, arc2, fixed, sites })
    }

    /// Rhombus with n columns and m rows of interior sites; a at the
    /// south-west gap, b at the north-east gap; west+north arc open,
    /// south+east arc closed. m = 0 gives the forced one-hexagon-wide
    /// corridor (no interior site).
    pub fn rhombus(n: i32, m: i32) -> TriDomain {
        assert!(n >= 1 && m >= 0);
        let mut interior = HashSet::new();
        for x in 0..n {
            for y in 0..m {
                interior.insert((x, y));
            }
        }
        let mut arc1 = Vec::new();
        for y in 0..=m {
            arc1.push((-1, y));
        }
        for x in 0..n {
            arc1.push((x, m));
        }
        let mut arc2 = Vec::new();
        for x in 0..=n {
            arc2.push((x, -1));
        }
        for y in 0..m {
            arc2.push((n, y));
        }
        TriDomain::new(interior, arc1, arc2).expect("rhombus construction")
    }

    pub fn fixed_color(&self, s: (i32, i32)) -> Option<bool> {
        self.fixed.get(&s).copied()
    }

    pub fn contains(&self, s: (i32, i32)) -> bool {
        self.interior.contains(&s) || self.fixed.contains_key(&s)
    }

    pub fn site_graph(&self) -> &SiteGraph {
        &self.sites
    }

    /// Marked gap at a: (arc1 endpoint, arc2 endpoint).
    pub fn a_gap(&self) -> ((i32, i32), (i32, i32)) {
        (self.arc1[0], self.arc2[0])
    }

    pub fn b_gap(&self) -> ((i32, i32), (i32, i32)) {
        (*self.arc1.last().unwrap(), *self.arc2.last().unwrap())
    }

    /// Boundary point a (midpoint of the a gap edge).
    pub fn a_point(&self) -> Point {
        let (s1, s2) = self.a_gap();
        mid(embed(s1.0, s1.1), embed(s2.0, s2.1))
    }

    pub fn b_point(&self) -> Point {
        let (s1, s2) = self.b_gap();
        mid(embed(s1.0, s1.1), embed(s2.0, s2.1))
    }

    /// Entry step at a: from the outside face into the domain.
    pub fn entry(&self) -> HexEdge {
        let gap = self.a_gap();
        let [f1, f2] = faces_of_edge(gap);
        // the inside face is the one whose third corner belongs to the domain
        let inside_is_f1 = self.contains(f1.third_corner(gap));
        let (from, to) = if inside_is_f1 { (f2, f1) } else { (f1, f2) };
        HexEdge { from, to }
    }

    /// True when the face lies beyond the b gap (walk termination).
    pub fn is_exit_face(&self, f: TriFace) -> bool {
        let gap = self.b_gap();
        let [f1, f2] = faces_of_edge(gap);
        let outside = if self.contains(f1.third_corner(gap)) { f2 } else { f1 };
        f == outside
    }

    /// At least one interior path from the a side to the b side must exist
    /// (the admissibility requirement on triangular domains).
    pub fn validate_connectivity(&self) -> Result<()> {
        if self.interior.is_empty() {
            return Ok(()); // forced corridor
        }
        let (a1, a2) = self.a_gap();
        let (b1, b2) = self.b_gap();
        let near = |g: (i32, i32)| -> Vec<(i32, i32)> {
            NEIGHBORS
                .iter()
                .map(|d| (g.0 + d.0, g.1 + d.1))
                .filter(|s| self.interior.contains(s))
                .collect()
        };
        let seeds: Vec<(i32, i32)> = near(a1).into_iter().chain(near(a2)).collect();
        let targets: HashSet<(i32, i32)> = near(b1).into_iter().chain(near(b2)).collect();
        if seeds.is_empty() || targets.is_empty() {
            return Err(Error::invalid("marked points not adjacent to the interior"));
        }
        let mut seen: HashSet<(i32, i32)> = seeds.iter().copied().collect();
        let mut stack = seeds;
        while let Some(s) = stack.pop() {
            if targets.contains(&s) {
                return Ok(());
            }
            for d in NEIGHBORS {
                let t = (s.0 + d.0, s.1 + d.1);
                if self.interior.contains(&t) && seen.insert(t) {
                    stack.push(t);
                }
            }
        }
        Err(Error::invalid("no interior path from a to b"))
    }

    pub fn to_spec(&self) -> DomainSpec {
        let all = self.interior.iter().chain(self.fixed.keys());
        let (mut x0, mut y0, mut x1, mut y1) = (i64::MAX, i64::MAX, i64::MIN, i64::MIN);
        for &(x, y) in all {
            x0 = x0.min(x as i64);
            y0 = y0.min(y as i64);
            x1 = x1.max(x as i64);
            y1 = y1.max(y as i64);
        }
        DomainSpec {
            lattice: LatticeKind::Triangular,
            bbox: [x0, y0, x1, y1],
            arc1: self.arc1.iter().map(|&(x, y)| [x as i64, y as i64]).collect(),
            arc2: self.arc2.iter().map(|&(x, y)| [x as i64, y as i64]).collect(),
            a: [self.arc1[0].0 as i64, self.arc1[0].1 as i64],
            b: [self.arc1.last().unwrap().0 as i64, self.arc1.last().unwrap().1 as i64],
            spacing: 1.0,
        }
    }

    pub fn from_spec(spec: &DomainSpec) -> Result<Self> {
        let arc1: Vec<(i32, i32)> = spec.arc1.iter().map(|&[x, y]| (x as i32, y as i32)).collect();
        let arc2: Vec<(i32, i32)> = spec.arc2.iter().map(|&[x, y]| (x as i32, y as i32)).collect();
        let boundary: HashSet<(i32, i32)> = arc1.iter().chain(&arc2).copied().collect();
        // flood-fill the bounded component adjacent to both arcs
        let [x0, y0, x1, y1] = spec.bbox;
        let mut interior = HashSet::new();
        let mut seen: HashSet<(i32, i32)> = HashSet::new();
        for x in x0..=x1 {
            for y in y0..=y1 {
                let s = (x as i32, y as i32);
                if boundary.contains(&s) || seen.contains(&s) {
                    continue;
                }
                // flood this component within the bbox
                let mut comp = Vec::new();
                let mut stack = vec![s];
                let mut touches_a1 = false;
                let mut touches_a2 = false;
                let mut escapes = false;
                seen.insert(s);
                while let Some(v) = stack.pop() {
                    comp.push(v);
                    for d in NEIGHBORS {
                        let t = (v.0 + d.0, v.1 + d.1);
                        if boundary.contains(&t) {
                            if arc1.contains(&t) {
                                touches_a1 = true;
                            } else {
                                touches_a2 = true;
                            }
                            continue;
                        }
                        if (t.0 as i64) < x0 || (t.0 as i64) > x1 || (t.1 as i64) < y0 || (t.1 as i64) > y1 {
                            escapes = true;
                            continue;
                        }
                        if seen.insert(t) {
                            stack.push(t);
                        }
                    }
                }
                if touches_a1 && touches_a2 && !escapes {
                    interior.extend(comp);
                }
            }
        }
        TriDomain::new(interior, arc1, arc2)
    }
}

fn mid(p: Point, q: Point) -> Point {
    Point::new((p.x + q.x) / 2.0, (p.y + q.y) / 2.0)
}

fn build_site_graph(interior: &HashSet<(i32, i32)>, fixed: &HashMap<(i32, i32), bool>) -> SiteGraph {
    let mut coords: Vec<(i32, i32)> = interior.iter().copied().collect();
    coords.sort_unstable();
    let mut boundary_coords: Vec<(i32, i32)> = fixed.keys().copied().collect();
    boundary_coords.sort_unstable();
    let n_int = coords.len();
    coords.extend(boundary_coords);
    let index: HashMap<(i32, i32), usize> =
        coords.iter().copied().enumerate().map(|(i, c)| (c, i)).collect();
    let mut edges = Vec::new();
    for (i, &(x, y)) in coords.iter().enumerate() {
        for d in [(1, 0), (0, 1), (1, -1)] {
            if let Some(&j) = index.get(&(x + d.0, y + d.1)) {
                edges.push((i, j));
            }
        }
    }
    let positions = coords.iter().map(|&(x, y)| embed(x, y)).collect();
    let boundary = (0..coords.len()).map(|i| i >= n_int).collect();
    SiteGraph::new(coords, positions, &edges, boundary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn face_adjacency_is_symmetric() {
        let f = TriFace { x: 2, y: -1, up: true };
        for (g, edge) in f.neighbors() {
            let back = g.across(edge);
            assert_eq!(back, f);
            // shared edge corners belong to both faces
            for c in [edge.0, edge.1] {
                assert!(f.corners().contains(&c));
                assert!(g.corners().contains(&c));
            }
        }
    }

    #[test]
    fn faces_of_edge_consistent_with_neighbors() {
        let f = TriFace { x: 0, y: 0, up: true };
        for (g, edge) in f.neighbors() {
            let pair = faces_of_edge(edge);
            assert!(pair.contains(&f) && pair.contains(&g), "{edge:?}");
        }
    }

    #[test]
    fn rhombus_is_admissible() {
        let d = TriDomain::rhombus(4, 3);
        assert_eq!(d.interior.len(), 12);
        d.validate_connectivity().unwrap();
        let (a1, a2) = d.a_gap();
        assert_eq!(a1, (-1, 0));
        assert_eq!(a2, (0, -1));
        let entry = d.entry();
        assert!(d.contains(entry.to.third_corner(((-1, 0), (0, -1)))));
        // roundtrip through the spec file format
        let spec = d.to_spec();
        let d2 = TriDomain::from_spec(&spec).unwrap();
        assert_eq!(d2.interior, d.interior);
    }

    #[test]
    fn corridor_has_no_interior() {
        let d = TriDomain::rhombus(5, 0);
        assert!(d.interior.is_empty());
        d.validate_connectivity().unwrap();
    }
}
