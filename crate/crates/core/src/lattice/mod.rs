//! Lattice infrastructure shared by the samplers: triangular / square /
//! modified-medial domains, the discrete Dirichlet solver, connectivity,
//! and lattice random walks.

pub mod medial;
pub mod square;
pub mod triangular;
pub mod unionfind;

pub use medial::MedialDomain;
pub use square::SquareDomain;
pub use triangular::{HexEdge, TriDomain, TriFace};
pub use unionfind::UnionFind;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::linalg::WeightedGraph;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Supported lattice kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LatticeKind {
    Square,
    Triangular,
    HexagonalDual,
    ModifiedMedial,
}

/// On-disk domain description (JSON).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DomainSpec {
    pub lattice: LatticeKind,
    /// [x0, y0, x1, y1] in lattice units.
    pub bbox: [i64; 4],
    /// Boundary arcs as vertex paths (lattice coordinates).
    pub arc1: Vec<[i64; 2]>,
    pub arc2: Vec<[i64; 2]>,
    pub a: [i64; 2],
    pub b: [i64; 2],
    pub spacing: f64,
}

/// A lattice-backed simply connected domain with two marked boundary arcs.
#[derive(Debug, Clone)]
pub enum DiscreteDomain {
    Triangular(TriDomain),
    Square(SquareDomain),
    Medial(MedialDomain),
}

impl DiscreteDomain {
    pub fn kind(&self) -> LatticeKind {
        match self {
            DiscreteDomain::Triangular(_) => LatticeKind::Triangular,
            DiscreteDomain::Square(_) => LatticeKind::Square,
            DiscreteDomain::Medial(_) => LatticeKind::ModifiedMedial,
        }
    }

    pub fn to_spec(&self) -> DomainSpec {
        match self {
            DiscreteDomain::Triangular(d) => d.to_spec(),
            DiscreteDomain::Square(d) => d.to_spec(),
            DiscreteDomain::Medial(d) => d.to_spec(),
        }
    }

    pub fn from_spec(spec: &DomainSpec) -> Result<Self> {
        match spec.lattice {
            LatticeKind::Triangular | LatticeKind::HexagonalDual => {
                Ok(DiscreteDomain::Triangular(TriDomain::from_spec(spec)?))
            }
            LatticeKind::Square => Ok(DiscreteDomain::Square(SquareDomain::from_spec(spec)?)),
            LatticeKind::ModifiedMedial => Ok(DiscreteDomain::Medial(MedialDomain::from_spec(spec)?)),
        }
    }
}

/// An embedded site graph: positions, adjacency, and a boundary marker.
/// The common substrate for harmonic solves and random walks.
#[derive(Debug, Clone)]
pub struct SiteGraph {
    pub positions: Vec<Point>,
    pub graph: WeightedGraph,
    pub boundary: Vec<bool>,
    index: HashMap<(i32, i32), usize>,
    coords: Vec<(i32, i32)>,
}

impl SiteGraph {
    pub fn new(coords: Vec<(i32, i32)>, positions: Vec<Point>, edges: &[(usize, usize)], boundary: Vec<bool>) -> Self {
        let weighted: Vec<(usize, usize, f64)> = edges.iter().map(|&(a, b)| (a, b, 1.0)).collect();
        let graph = WeightedGraph::from_edges(coords.len(), &weighted);
        let index = coords.iter().copied().enumerate().map(|(i, c)| (c, i)).collect();
        SiteGraph { positions, graph, boundary, index, coords }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn site(&self, coord: (i32, i32)) -> Option<usize> {
        self.index.get(&coord).copied()
    }

    pub fn coord(&self, site: usize) -> (i32, i32) {
        self.coords[site]
    }

    /// Number of connected components of the interior (non-boundary) sites.
    pub fn interior_components(&self) -> usize {
        let mut uf = UnionFind::new(self.len());
        for v in 0..self.len() {
            if self.boundary[v] {
                continue;
            }
            for (w, _) in self.graph.neighbors_of(v) {
                if !self.boundary[w] {
                    uf.union(v, w);
                }
            }
        }
        (0..self.len())
            .filter(|&v| !self.boundary[v] && uf.find(v) == v)
            .count()
    }
}

/// Discrete harmonic function on the interior of a site graph.
#[derive(Debug, Clone)]
pub struct HarmonicField {
    pub values: Vec<f64>,
    /// Set when the interior was disconnected and the solve ran per
    /// component.
    pub disconnected_interior: bool,
}

impl HarmonicField {
    /// Largest violation of the discrete mean-value property over interior
    /// sites.
    pub fn mean_value_residual(&self, sites: &SiteGraph, fixed: &[bool]) -> f64 {
        let mut worst = 0f64;
        for v in 0..sites.len() {
            if fixed[v] {
                continue;
            }
            let mut acc = 0.0;
            let mut deg = 0.0;
            for (w, wt) in sites.graph.neighbors_of(v) {
                acc += wt * self.values[w];
                deg += wt;
            }
            worst = worst.max((self.values[v] - acc / deg).abs());
        }
        worst
    }
}

/// CG residual target; far below Monte Carlo noise in every consumer.
pub const HARMONIC_TOL: f64 = 1e-10;

/// Solve the discrete Dirichlet problem on a site graph.
///
/// `fixed[v]` marks Dirichlet sites, whose `boundary_values[v]` are taken
/// as data. A disconnected interior is solved per component (the CG handles
/// the block system directly) and flagged.
pub fn harmonic_solve(
    sites: &SiteGraph,
    fixed: &[bool],
    boundary_values: &[f64],
    warm_start: Option<&[f64]>,
) -> Result<HarmonicField> {
    if fixed.len() != sites.len() || boundary_values.len() != sites.len() {
        return Err(Error::invalid("fixed/value arrays must match site count"));
    }
    if fixed.iter().all(|&f| f) {
        return Ok(HarmonicField { values: boundary_values.to_vec(), disconnected_interior: false });
    }
    let values = sites.graph.solve_dirichlet(fixed, boundary_values, warm_start, HARMONIC_TOL);
    // component check among free sites
    let mut uf = UnionFind::new(sites.len());
    for v in 0..sites.len() {
        if fixed[v] {
            continue;
        }
        for (w, _) in sites.graph.neighbors_of(v) {
            if !fixed[w] {
                uf.union(v, w);
            }
        }
    }
    let roots: std::collections::HashSet<usize> =
        (0..sites.len()).filter(|&v| !fixed[v]).map(|v| uf.find(v)).collect();
    Ok(HarmonicField { values, disconnected_interior: roots.len() > 1 })
}

/// A site path produced by a lattice walk.
pub type SitePath = Vec<usize>;

/// Simple or h-transformed random walk on a site graph, stopped on the
/// boundary.
///
/// With `h` supplied (the harmonic measure of the target), each step goes to
/// neighbor y with probability proportional to h(y): the Doob transform of
/// the walk conditioned to exit through the target.
pub fn random_walk<R: Rng>(
    sites: &SiteGraph,
    start: usize,
    h: Option<&[f64]>,
    rng: &mut R,
) -> Result<SitePath> {
    if start >= sites.len() {
        return Err(Error::invalid("walk start outside domain"));
    }
    let mut path = vec![start];
    let mut at = start;
    // the first step of a boundary start is conditioned into the interior
    loop {
        let mut total = 0f64;
        let mut cumul: Vec<(usize, f64)> = Vec::with_capacity(6);
        for (w, _) in sites.graph.neighbors_of(at) {
            if path.len() == 1 && sites.boundary[start] && sites.boundary[w] {
                continue; // condition X1 into the interior
            }
            let weight = match h {
                Some(h) => h[w],
                None => 1.0,
            };
            if weight > 0.0 {
                total += weight;
                cumul.push((w, total));
            }
        }
        if cumul.is_empty() {
            return Err(Error::ConditioningImpossible(format!(
                "no admissible step from site {at}"
            )));
        }
        let u: f64 = rng.gen_range(0.0..total);
        let next = cumul.iter().find(|&&(_, c)| u < c).map(|&(w, _)| w).unwrap_or(cumul.last().unwrap().0);
        path.push(next);
        at = next;
        if sites.boundary[at] {
            return Ok(path);
        }
    }
}

/// Number of connected components of an edge configuration, counting the
/// blocks of the wiring partition as single components.
///
/// `wiring` groups vertex sets that are externally identified; vertices of
/// the same block always count as one component even without open edges.
pub fn component_count(n: usize, open_edges: &[(usize, usize)], wiring: &[Vec<usize>]) -> usize {
    let mut uf = UnionFind::new(n);
    for block in wiring {
        for w in block.windows(2) {
            uf.union(w[0], w[1]);
        }
    }
    for &(a, b) in open_edges {
        uf.union(a, b);
    }
    let mut roots = std::collections::HashSet::new();
    for v in 0..n {
        roots.insert(uf.find(v));
    }
    roots.len()
}

/// Edge configuration over an abstract graph: the FK state.
#[derive(Debug, Clone)]
pub struct EdgeConfig {
    /// Endpoints per edge.
    pub edges: Vec<(usize, usize)>,
    /// Open/closed bit per edge.
    pub open: Vec<bool>,
    /// Indices of permanently wired (always open) edges.
    pub wired: Vec<usize>,
    pub n_vertices: usize,
}

impl EdgeConfig {
    pub fn new(n_vertices: usize, edges: Vec<(usize, usize)>, wired: Vec<usize>) -> Self {
        let mut open = vec![false; edges.len()];
        for &w in &wired {
            open[w] = true;
        }
        EdgeConfig { edges, open, wired, n_vertices }
    }

    pub fn open_edge_list(&self) -> Vec<(usize, usize)> {
        self.edges
            .iter()
            .zip(&self.open)
            .filter(|(_, &o)| o)
            .map(|(&e, _)| e)
            .collect()
    }

    /// Are `a` and `b` connected by open edges, excluding edge `skip`?
    pub fn connected_without(&self, a: usize, b: usize, skip: usize) -> bool {
        let mut uf = UnionFind::new(self.n_vertices);
        for (i, (&(u, v), &o)) in self.edges.iter().zip(&self.open).enumerate() {
            if o && i != skip {
                uf.union(u, v);
            }
        }
        uf.find(a) == uf.find(b)
    }

    pub fn component_count(&self) -> usize {
        component_count(self.n_vertices, &self.open_edge_list(), &[])
    }
}
