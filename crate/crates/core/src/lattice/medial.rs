//! Modified-medial domains for the FK model: an m x n box of faces with
//! the bottom side wired (the c1 arc) and the dual wiring of the other
//! three sides realized by a ring of permanently closed virtual edges.
//!
//! The domain is combinatorial: primal vertices (i, j) with 0 <= i <= m,
//! 0 <= j <= n; medial vertices sit at primal edge midpoints; the small
//! squares of the modified lattice appear only in the geometry export,
//! as quarter-offset corner points along the extracted interface.

use super::{DomainSpec, LatticeKind};
use crate::error::{Error, Result};
use crate::geometry::Point;
use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    /// Sampled by the FK dynamics.
    Random,
    /// Part of the wired arc c1: always open.
    Wired,
    /// Outside the primal graph, always closed; realizes the dual wiring
    /// of the free arc c2 for interface extraction.
    Virtual,
}

/// Primal edge between lattice vertices; `horizontal` runs toward +x.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MedialEdge {
    pub x: i32,
    pub y: i32,
    pub horizontal: bool,
}

impl MedialEdge {
    pub fn endpoints(&self) -> ((i32, i32), (i32, i32)) {
        if self.horizontal {
            ((self.x, self.y), (self.x + 1, self.y))
        } else {
            ((self.x, self.y), (self.x, self.y + 1))
        }
    }

    /// Midpoint in doubled coordinates (so everything stays integral).
    fn mid2(&self) -> (i32, i32) {
        if self.horizontal {
            (2 * self.x + 1, 2 * self.y)
        } else {
            (2 * self.x, 2 * self.y + 1)
        }
    }

    pub fn midpoint(&self) -> Point {
        let (x2, y2) = self.mid2();
        Point::new(x2 as f64 / 2.0, y2 as f64 / 2.0)
    }
}

#[derive(Debug, Clone)]
pub struct MedialDomain {
    /// Faces per row / column count: vertices run 0..=m by 0..=n.
    pub m: i32,
    pub n: i32,
    /// All primal + virtual edges, indexed.
    pub edges: Vec<MedialEdge>,
    pub kinds: Vec<EdgeKind>,
    /// Indices of Random edges (the FK state vector).
    pub random_edges: Vec<usize>,
    /// Indices of Wired edges.
    pub wired_edges: Vec<usize>,
    index: HashMap<MedialEdge, usize>,
    vertex_index: HashMap<(i32, i32), usize>,
}

impl MedialDomain {
    /// Dobrushin rectangle: m x n faces, bottom side wired from a = (0,0)
    /// to b = (m,0). n = 0 gives the forced corridor (no random edge).
    pub fn rectangle(m: i32, n: i32) -> Result<Self> {
        if m < 1 || n < 0 {
            return Err(Error::invalid("medial rectangle needs m >= 1, n >= 0"));
        }
        let mut edges = Vec::new();
        let mut kinds = Vec::new();
        // box edges
        for j in 0..=n {
            for i in 0..m {
                edges.push(MedialEdge { x: i, y: j, horizontal: true });
                kinds.push(if j == 0 { EdgeKind::Wired } else { EdgeKind::Random });
            }
        }
        for j in 0..n {
            for i in 0..=m {
                edges.push(MedialEdge { x: i, y: j, horizontal: false });
                kinds.push(EdgeKind::Random);
            }
        }
        // virtual ring: left and right spokes at every row, top spokes
        for j in 0..=n {
            edges.push(MedialEdge { x: -1, y: j, horizontal: true });
            kinds.push(EdgeKind::Virtual);
            edges.push(MedialEdge { x: m, y: j, horizontal: true });
            kinds.push(EdgeKind::Virtual);
        }
        for i in 0..=m {
            edges.push(MedialEdge { x: i, y: n, horizontal: false });
            kinds.push(EdgeKind::Virtual);
        }
        let index = edges.iter().copied().enumerate().map(|(k, e)| (e, k)).collect();
        let mut vertex_index = HashMap::new();
        for j in 0..=n {
            for i in 0..=m {
                let k = vertex_index.len();
                vertex_index.insert((i, j), k);
            }
        }
        let random_edges = kinds
            .iter()
            .enumerate()
            .filter(|(_, &k)| k == EdgeKind::Random)
            .map(|(i, _)| i)
            .collect();
        let wired_edges = kinds
            .iter()
            .enumerate()
            .filter(|(_, &k)| k == EdgeKind::Wired)
            .map(|(i, _)| i)
            .collect();
        Ok(MedialDomain { m, n, edges, kinds, random_edges, wired_edges, index, vertex_index })
    }

    pub fn n_vertices(&self) -> usize {
        self.vertex_index.len()
    }

    pub fn vertex_id(&self, v: (i32, i32)) -> Option<usize> {
        self.vertex_index.get(&v).copied()
    }

    pub fn edge_id(&self, e: MedialEdge) -> Option<usize> {
        self.index.get(&e).copied()
    }

    /// Primal (non-virtual) edges with endpoint vertex ids, aligned with
    /// `self.edges` indices.
    pub fn primal_edge_list(&self) -> Vec<(usize, (usize, usize))> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(i, _)| self.kinds[*i] != EdgeKind::Virtual)
            .map(|(i, e)| {
                let (u, v) = e.endpoints();
                (i, (self.vertex_id(u).unwrap(), self.vertex_id(v).unwrap()))
            })
            .collect()
    }

    pub fn a_point(&self) -> Point {
        Point::new(0.0, 0.0)
    }

    pub fn b_point(&self) -> Point {
        Point::new(self.m as f64, 0.0)
    }

    /// Trace the a -> b interface of a configuration.
    ///
    /// `open` gives the state of every edge by index (virtual edges must be
    /// closed, wired open). The walk moves between primal-edge midpoints;
    /// at an open edge the strand stays on its side of the edge, at a
    /// closed edge it stays on its side of the dual edge. Emitted points
    /// are the white-square corners (quarter offsets), which keeps the
    /// polyline simple even when a square is traversed twice.
    pub fn trace_interface(&self, open: &[bool]) -> Result<Vec<Point>> {
        let start = MedialEdge { x: -1, y: 0, horizontal: true };
        let stop = MedialEdge { x: self.m, y: 0, horizontal: true };
        let start_id = self.edge_id(start).unwrap();
        let stop_id = self.edge_id(stop).unwrap();
        debug_assert!(!open[start_id] && !open[stop_id]);

        let mut pts: Vec<Point> = vec![self.a_point()];
        if self.n == 0 {
            // corridor: the strand runs straight along the top of the wire
            for i in 0..self.m {
                pts.push(Point::new(i as f64 + 0.25, 0.25));
                pts.push(Point::new(i as f64 + 0.75, 0.25));
            }
            pts.push(self.b_point());
            return Ok(pts);
        }
        // directed medial step: from the start spoke's midpoint onto the
        // left boundary edge's midpoint, vertex (0,0) on the right
        let mut from = start.mid2();
        let mut at = MedialEdge { x: 0, y: 0, horizontal: false };
        let budget = 8 * self.edges.len() + 16;
        for _ in 0..budget {
            let here = at.mid2();
            let edge_idx = self
                .edge_id(at)
                .ok_or_else(|| Error::invalid(format!("walk left the domain at {at:?}")))?;
            if edge_idx == stop_id {
                pts.push(self.b_point());
                return Ok(pts);
            }
            // entry port: quarter-way from the midpoint toward `from`
            let dx = from.0 - here.0;
            let dy = from.1 - here.1;
            debug_assert!(dx.abs() == 1 && dy.abs() == 1);
            pts.push(Point::new(
                here.0 as f64 / 2.0 + dx as f64 * 0.125,
                here.1 as f64 / 2.0 + dy as f64 * 0.125,
            ));
            // pairing: open edge keeps the strand on one side of the edge;
            // closed edge keeps it on one side of the dual edge.
            // In doubled coordinates the edge runs along (for horizontal)
            // the x-axis: "side" is the sign of dy; "end" is the sign of dx.
            let (odx, ody) = if open[edge_idx] {
                if at.horizontal {
                    (-dx, dy) // same side (dy), other end
                } else {
                    (dx, -dy)
                }
            } else if at.horizontal {
                (dx, -dy) // same end (dx), other side
            } else {
                (-dx, dy)
            };
            pts.push(Point::new(
                here.0 as f64 / 2.0 + odx as f64 * 0.125,
                here.1 as f64 / 2.0 + ody as f64 * 0.125,
            ));
            let next2 = (here.0 + odx, here.1 + ody);
            let next_edge = edge_of_mid2(next2)
                .ok_or_else(|| Error::invalid(format!("no medial vertex at {next2:?}")))?;
            from = here;
            at = next_edge;
        }
        Err(Error::invalid("interface walk did not terminate"))
    }

    pub fn to_spec(&self) -> DomainSpec {
        let arc1: Vec<[i64; 2]> = (0..=self.m).map(|i| [i as i64, 0]).collect();
        let mut arc2 = vec![[0i64, 0]];
        for j in 1..=self.n {
            arc2.push([0, j as i64]);
        }
        for i in 1..=self.m {
            arc2.push([i as i64, self.n as i64]);
        }
        for j in (0..self.n).rev() {
            arc2.push([self.m as i64, j as i64]);
        }
        DomainSpec {
            lattice: LatticeKind::ModifiedMedial,
            bbox: [0, 0, self.m as i64, self.n as i64],
            arc1,
            arc2,
            a: [0, 0],
            b: [self.m as i64, 0],
            spacing: 1.0,
        }
    }

    pub fn from_spec(spec: &DomainSpec) -> Result<Self> {
        let [x0, y0, x1, y1] = spec.bbox;
        if x0 != 0 || y0 != 0 {
            return Err(Error::invalid("medial domain bbox must start at the origin"));
        }
        MedialDomain::rectangle(x1 as i32, y1 as i32)
    }
}

/// Inverse of `MedialEdge::mid2`.
fn edge_of_mid2(p: (i32, i32)) -> Option<MedialEdge> {
    let (x2, y2) = p;
    match (x2.rem_euclid(2), y2.rem_euclid(2)) {
        (1, 0) => Some(MedialEdge { x: (x2 - 1) / 2, y: y2 / 2, horizontal: true }),
        (0, 1) => Some(MedialEdge { x: x2 / 2, y: (y2 - 1) / 2, horizontal: false }),
        _ => None,
    }
}
