//! The interface explorer shared by percolation and the harmonic
//! explorer: a walk on the hexagonal dual of a triangular admissible
//! domain, keeping open sites on the left and closed sites on the right,
//! querying a color oracle the first time each site matters.

use super::site_color;
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::lattice::{TriDomain, TriFace};
use std::collections::HashMap;

/// Decides the color of interior sites the first time the interface needs
/// them. `true` = open (the arc1 side).
pub trait ColorOracle {
    fn color(&mut self, site: (i32, i32)) -> Result<bool>;

    /// Sites whose colors have been committed so far, with their colors.
    fn revealed(&self) -> Vec<((i32, i32), bool)>;
}

/// I.i.d. Bernoulli colors keyed by (seed, site): percolation.
pub struct HashColorOracle {
    seed: u64,
    p: f64,
    /// Conditioning overrides (kept colors from an observed prefix).
    pub overrides: HashMap<(i32, i32), bool>,
    queried: Vec<((i32, i32), bool)>,
}

impl HashColorOracle {
    pub fn new(seed: u64, p: f64) -> Self {
        HashColorOracle { seed, p, overrides: HashMap::new(), queried: Vec::new() }
    }
}

impl ColorOracle for HashColorOracle {
    fn color(&mut self, site: (i32, i32)) -> Result<bool> {
        let c = match self.overrides.get(&site) {
            Some(&c) => c,
            None => site_color(self.seed, site, self.p),
        };
        self.queried.push((site, c));
        Ok(c)
    }

    fn revealed(&self) -> Vec<((i32, i32), bool)> {
        self.queried.clone()
    }
}

/// One step of an interface run: the dual vertex visited, the directed
/// edge that entered it, and the site query it made (None when the pivot
/// site was boundary-fixed).
#[derive(Debug, Clone)]
pub struct InterfaceStep {
    pub face: TriFace,
    pub entered_by: crate::lattice::HexEdge,
    pub query: Option<((i32, i32), bool)>,
}

/// Walk the interface from a to b. Returns the visited hexagonal vertices
/// (triangular faces) with the per-step query log; the caller prepends and
/// appends the boundary points.
pub fn explore_interface(
    domain: &TriDomain,
    oracle: &mut impl ColorOracle,
) -> Result<Vec<TriFace>> {
    Ok(explore_from(domain, domain.entry(), oracle)?
        .into_iter()
        .map(|s| s.face)
        .collect())
}

/// As `explore_interface`, but starting mid-curve from `edge` (the slit
/// domain is carried implicitly by the oracle's committed colors).
pub fn explore_from(
    domain: &TriDomain,
    entry: crate::lattice::HexEdge,
    oracle: &mut impl ColorOracle,
) -> Result<Vec<InterfaceStep>> {
    let mut edge = entry;
    let mut steps = Vec::new();
    // generous budget: the interface visits each face at most once
    let budget = 16 * (domain.interior.len() + domain.arc1.len() + domain.arc2.len()) + 64;
    for _ in 0..budget {
        let face = edge.to;
        if domain.is_exit_face(face) {
            return Ok(steps);
        }
        let shared = shared_edge(edge.from, face);
        let w = face.third_corner(shared);
        let mut query = None;
        let color = match domain.fixed_color(w) {
            Some(c) => c,
            None => {
                if !domain.interior.contains(&w) {
                    return Err(Error::invalid(format!(
                        "interface queried site {w:?} outside the domain"
                    )));
                }
                let c = oracle.color(w)?;
                query = Some((w, c));
                c
            }
        };
        steps.push(InterfaceStep { face, entered_by: edge, query });
        // open sites stay on the left of the walk
        let (s_left, s_right) = orient(edge.from, face, shared);
        let next_edge_sites = if color { (w, s_right) } else { (s_left, w) };
        let next = face.across(next_edge_sites);
        edge = crate::lattice::HexEdge { from: face, to: next };
    }
    Err(Error::invalid("interface walk did not terminate"))
}

fn shared_edge(from: TriFace, to: TriFace) -> ((i32, i32), (i32, i32)) {
    for (f, e) in from.neighbors() {
        if f == to {
            return e;
        }
    }
    panic!("faces not adjacent: {from:?} {to:?}");
}

/// Split the shared corner pair into (left, right) relative to the travel
/// direction from -> to.
fn orient(
    from: TriFace,
    to: TriFace,
    shared: ((i32, i32), (i32, i32)),
) -> ((i32, i32), (i32, i32)) {
    let dir = sub(to.center(), from.center());
    let mid = from.center();
    let v1 = sub(embed_pt(shared.0), mid);
    let cross1 = dir.x * v1.y - dir.y * v1.x;
    if cross1 > 0.0 {
        (shared.0, shared.1)
    } else {
        (shared.1, shared.0)
    }
}

fn embed_pt(s: (i32, i32)) -> Point {
    crate::lattice::triangular::embed(s.0, s.1)
}

fn sub(p: Point, q: Point) -> Point {
    Point::new(p.x - q.x, p.y - q.y)
}
