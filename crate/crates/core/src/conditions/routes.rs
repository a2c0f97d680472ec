//! Route graphs: the lattice of possible curve positions in a (slit)
//! domain, used for avoidability flood fills. A component of the annulus
//! intersection is avoidable when removing it leaves the tip connected to
//! the target.

use crate::error::{Error, Result};
use crate::geometry::{Annulus, Point, Region};
use crate::lattice::{MedialDomain, SquareDomain, TriDomain, TriFace};
use std::collections::HashMap;

/// Quantize a position to a hash key (all our lattices are sub-integer
/// rational up to sqrt(3) factors; 2^20 resolution is far below spacing).
fn key_of(p: Point) -> (i64, i64) {
    ((p.x * (1 << 20) as f64).round() as i64, (p.y * (1 << 20) as f64).round() as i64)
}

#[derive(Debug, Clone)]
pub struct RouteGraph {
    pub positions: Vec<Point>,
    pub adj: Vec<Vec<u32>>,
    pub tip: usize,
    pub target: usize,
    index: HashMap<(i64, i64), usize>,
    /// Coarse spatial hash (unit cells) for near-point queries.
    cells: HashMap<(i32, i32), Vec<u32>>,
    /// Covering radius: every point of the underlying planar domain is
    /// within this distance of a node; used for the boundary-circle test.
    pub covering_radius: f64,
}

impl RouteGraph {
    pub fn new(positions: Vec<Point>, adj: Vec<Vec<u32>>, tip: usize, target: usize, covering_radius: f64) -> Self {
        let index = positions.iter().enumerate().map(|(i, &p)| (key_of(p), i)).collect();
        let mut cells: HashMap<(i32, i32), Vec<u32>> = HashMap::new();
        for (i, &p) in positions.iter().enumerate() {
            cells
                .entry((p.x.floor() as i32, p.y.floor() as i32))
                .or_default()
                .push(i as u32);
        }
        RouteGraph { positions, adj, tip, target, index, cells, covering_radius }
    }

    pub fn node_at(&self, p: Point) -> Option<usize> {
        self.index.get(&key_of(p)).copied()
    }

    /// Nearest node within `radius` of the point.
    pub fn node_near(&self, p: Point, radius: f64) -> Option<usize> {
        let (cx, cy) = (p.x.floor() as i32, p.y.floor() as i32);
        let reach = radius.ceil() as i32;
        let mut best: Option<(f64, usize)> = None;
        for dx in -reach..=reach {
            for dy in -reach..=reach {
                if let Some(bucket) = self.cells.get(&(cx + dx, cy + dy)) {
                    for &i in bucket {
                        let d = self.positions[i as usize].dist(&p);
                        if d <= radius && best.map(|(bd, _)| d < bd).unwrap_or(true) {
                            best = Some((d, i as usize));
                        }
                    }
                }
            }
        }
        best.map(|(_, i)| i)
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

/// Connected components of (domain ∩ annulus) with avoidability flags.
#[derive(Debug, Clone)]
pub struct AvoidableSet {
    /// Component id per node; usize::MAX outside the annulus.
    pub component_of: Vec<usize>,
    /// Per component: does removing it keep tip connected to target?
    pub avoidable: Vec<bool>,
    /// The paper's degenerate case: the inner circle misses the domain
    /// boundary entirely, so no crossing is ever unforced.
    pub inner_circle_clear: bool,
}

impl AvoidableSet {
    pub fn n_components(&self) -> usize {
        self.avoidable.len()
    }

    pub fn any_avoidable(&self) -> bool {
        !self.inner_circle_clear && self.avoidable.iter().any(|&a| a)
    }
}

/// Flood-fill U ∩ A into components and flag each avoidable or forced.
///
/// The tip and target are graph nodes (neighborhood proxies for the
/// boundary points); for a slit domain, `slit` marks nodes occupied by
/// the curve so far. If the inner circle does not meet the domain
/// boundary, the avoidable set is empty by definition.
pub fn avoidable_components(graph: &RouteGraph, annulus: &Annulus) -> Result<AvoidableSet> {
    avoidable_components_in(graph, annulus, None, graph.tip, graph.target)
}

pub fn avoidable_components_in(
    graph: &RouteGraph,
    annulus: &Annulus,
    slit: Option<&[bool]>,
    tip: usize,
    target: usize,
) -> Result<AvoidableSet> {
    if graph.is_empty() {
        return Err(Error::invalid("empty route graph"));
    }
    let n = graph.len();
    let occupied = |v: usize| slit.map(|s| s[v]).unwrap_or(false);
    let in_annulus: Vec<bool> = graph
        .positions
        .iter()
        .enumerate()
        .map(|(v, &p)| !occupied(v) && annulus.region(p) == Region::Within)
        .collect();

    // does the inner circle meet the boundary of the slit domain? It does
    // unless the whole circle is buried in free interior.
    let inner_circle_clear =
        circle_inside_domain(graph, annulus.center, annulus.r, &occupied);

    let mut component_of = vec![usize::MAX; n];
    let mut avoidable = Vec::new();
    let mut n_comp = 0usize;
    for start in 0..n {
        if !in_annulus[start] || component_of[start] != usize::MAX {
            continue;
        }
        let id = n_comp;
        n_comp += 1;
        let mut stack = vec![start];
        component_of[start] = id;
        while let Some(v) = stack.pop() {
            for &w in &graph.adj[v] {
                let w = w as usize;
                if in_annulus[w] && component_of[w] == usize::MAX {
                    component_of[w] = id;
                    stack.push(w);
                }
            }
        }
        avoidable.push(false);
    }
    // avoidability: BFS from tip to target with the component removed
    for id in 0..n_comp {
        avoidable[id] =
            connected_avoiding(graph, tip, target, |v| occupied(v) || component_of[v] == id);
    }
    Ok(AvoidableSet { component_of, avoidable, inner_circle_clear })
}

fn connected_avoiding(
    graph: &RouteGraph,
    tip: usize,
    target: usize,
    blocked: impl Fn(usize) -> bool,
) -> bool {
    if blocked(tip) || blocked(target) {
        return false;
    }
    let mut seen = vec![false; graph.len()];
    let mut stack = vec![tip];
    seen[tip] = true;
    while let Some(v) = stack.pop() {
        if v == target {
            return true;
        }
        for &w in &graph.adj[v] {
            let w = w as usize;
            if !seen[w] && !blocked(w) {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    false
}

/// True when the circle |z - c| = r lies entirely inside the free region
/// (so the annulus cannot pinch against the boundary or the slit). Each
/// circle sample is assigned to its nearest node: a missing node means the
/// circle leaves the domain, an occupied one that it hits the slit.
fn circle_inside_domain(
    graph: &RouteGraph,
    c: Point,
    r: f64,
    occupied: &impl Fn(usize) -> bool,
) -> bool {
    let cover = graph.covering_radius;
    let steps = ((2.0 * std::f64::consts::PI * r) / (0.5 * cover)).ceil().max(8.0) as usize;
    for k in 0..steps {
        let th = 2.0 * std::f64::consts::PI * k as f64 / steps as f64;
        let p = Point::new(c.x + r * th.cos(), c.y + r * th.sin());
        match graph.node_near(p, cover) {
            Some(v) if !occupied(v) => {}
            _ => return false,
        }
    }
    true
}

// ------------------------------------------------------- builders

/// Route graph of a triangular admissible domain: nodes are all faces of
/// the domain; the tip is the entry face, the target the inside face at
/// the b gap. Slit prefixes are expressed as blocked-node vectors in
/// `avoidable_components_in`.
pub fn tri_route_graph(domain: &TriDomain) -> Result<RouteGraph> {
    // enumerate every face of the domain over the coordinate range
    let coords: Vec<(i32, i32)> = domain
        .interior
        .iter()
        .copied()
        .chain(domain.arc1.iter().copied())
        .chain(domain.arc2.iter().copied())
        .collect();
    let (xmin, xmax) = coords.iter().fold((i32::MAX, i32::MIN), |(lo, hi), &(x, _)| (lo.min(x), hi.max(x)));
    let (ymin, ymax) = coords.iter().fold((i32::MAX, i32::MIN), |(lo, hi), &(_, y)| (lo.min(y), hi.max(y)));
    let mut faces: Vec<TriFace> = Vec::new();
    for x in xmin - 1..=xmax {
        for y in ymin - 1..=ymax {
            for up in [true, false] {
                let f = TriFace { x, y, up };
                if face_in_domain(domain, f) {
                    faces.push(f);
                }
            }
        }
    }
    let idx: HashMap<TriFace, usize> = faces.iter().copied().enumerate().map(|(i, f)| (f, i)).collect();
    let mut adj = vec![Vec::new(); faces.len()];
    for (i, f) in faces.iter().enumerate() {
        for (g, edge) in f.neighbors() {
            if let Some(&j) = idx.get(&g) {
                if domain.contains(edge.0) && domain.contains(edge.1) {
                    adj[i].push(j as u32);
                }
            }
        }
    }
    let positions: Vec<Point> = faces.iter().map(|f| f.center()).collect();
    let tip = *idx
        .get(&domain.entry().to)
        .ok_or_else(|| Error::invalid("entry face not in the domain"))?;
    let target = *idx
        .get(&target_face(domain))
        .ok_or_else(|| Error::invalid("target face not in the domain"))?;
    Ok(RouteGraph::new(positions, adj, tip, target, 0.85))
}

fn face_in_domain(domain: &TriDomain, f: TriFace) -> bool {
    f.corners().iter().any(|&c| domain.interior.contains(&c))
        || f.corners().iter().all(|&c| domain.contains(c))
}

/// The face just inside the b gap (neighborhood proxy for b).
fn target_face(domain: &TriDomain) -> TriFace {
    let gap = domain.b_gap();
    let [f1, f2] = crate::lattice::triangular::faces_of_edge((gap.0, gap.1));
    if domain.is_exit_face(f1) {
        f2
    } else {
        f1
    }
}

/// Route graph of a square LERW domain (time zero): the sites themselves.
pub fn square_route_graph(domain: &SquareDomain) -> Result<RouteGraph> {
    let g = domain.site_graph();
    let positions: Vec<Point> = g.positions.clone();
    let mut adj = vec![Vec::new(); g.len()];
    for v in 0..g.len() {
        for (w, _) in g.graph.neighbors_of(v) {
            adj[v].push(w as u32);
        }
    }
    let tip = g.site(domain.a).ok_or_else(|| Error::invalid("a not in domain"))?;
    let target = g.site(domain.b).ok_or_else(|| Error::invalid("b not in domain"))?;
    Ok(RouteGraph::new(positions, adj, tip, target, 0.75))
}

/// Route graph of the UST Peano fine lattice (time zero): quarter centers
/// with moves blocked across the wired arc.
pub fn peano_route_graph(domain: &SquareDomain) -> Result<RouteGraph> {
    const QUARTER: [(f64, f64); 4] = [(0.25, 0.25), (-0.25, 0.25), (-0.25, -0.25), (0.25, -0.25)];
    let g = domain.site_graph();
    // excluded outer-side quarters along the wired arc, as in the Peano walk
    let mut excluded: std::collections::HashSet<(i64, i64)> = std::collections::HashSet::new();
    let dir_of = |u: (i32, i32), v: (i32, i32)| -> usize {
        [(1, 0), (0, 1), (-1, 0), (0, -1)]
            .iter()
            .position(|&(dx, dy)| (u.0 + dx, u.1 + dy) == v)
            .expect("arc edge")
    };
    let qpt = |v: (i32, i32), q: usize| -> (i64, i64) {
        (
            4 * v.0 as i64 + if QUARTER[q].0 > 0.0 { 1 } else { -1 },
            4 * v.1 as i64 + if QUARTER[q].1 > 0.0 { 1 } else { -1 },
        )
    };
    let arc = &domain.wired_arc;
    if arc.is_empty() {
        return Err(Error::invalid("peano route graph needs a wired arc"));
    }
    for &(u, v) in arc {
        let d = dir_of(u, v);
        excluded.insert(qpt(u, (d + 3) % 4));
        excluded.insert(qpt(v, (d + 2) % 4));
    }
    let d_first = dir_of(arc[0].0, arc[0].1);
    let d_last = dir_of(arc.last().unwrap().0, arc.last().unwrap().1);
    excluded.insert(qpt(arc[0].0, (d_first + 2) % 4));
    excluded.insert(qpt(arc.last().unwrap().1, (d_last + 3) % 4));

    let mut keys: Vec<(i64, i64)> = Vec::new();
    for v in 0..g.len() {
        let c = g.coord(v);
        for q in 0..4 {
            let k = qpt(c, q);
            if !excluded.contains(&k) {
                keys.push(k);
            }
        }
    }
    keys.sort_unstable();
    keys.dedup();
    let idx: HashMap<(i64, i64), usize> =
        keys.iter().copied().enumerate().map(|(i, k)| (k, i)).collect();
    // wired-arc segments in quadrupled coordinates block crossings
    let wired: std::collections::HashSet<((i64, i64), (i64, i64))> = arc
        .iter()
        .map(|&(u, v)| {
            let a = (4 * u.0 as i64, 4 * u.1 as i64);
            let b = (4 * v.0 as i64, 4 * v.1 as i64);
            (a.min(b), a.max(b))
        })
        .collect();
    let mut adj = vec![Vec::new(); keys.len()];
    for (i, &(x, y)) in keys.iter().enumerate() {
        for (dx, dy) in [(2i64, 0i64), (0, 2)] {
            let nk = (x + dx, y + dy);
            if let Some(&j) = idx.get(&nk) {
                // the move crosses a primal edge iff it jumps a multiple-of-4
                // line; the blocking segment is the primal edge containing
                // the crossing point
                if move_blocked((x, y), nk, &wired) {
                    continue;
                }
                adj[i].push(j as u32);
                adj[j].push(i as u32);
            }
        }
    }
    let positions: Vec<Point> =
        keys.iter().map(|&(x, y)| Point::new(x as f64 / 4.0, y as f64 / 4.0)).collect();
    let near = |p: (i32, i32)| -> Result<usize> {
        let mut best = None;
        let target = Point::new(p.0 as f64, p.1 as f64);
        for (i, pos) in positions.iter().enumerate() {
            let d = pos.dist(&target);
            if best.map(|(bd, _)| d < bd).unwrap_or(true) {
                best = Some((d, i));
            }
        }
        best.map(|(_, i)| i).ok_or_else(|| Error::invalid("empty fine lattice"))
    };
    let tip = near(domain.a)?;
    let target = near(domain.b)?;
    Ok(RouteGraph::new(positions, adj, tip, target, 0.5))
}

fn move_blocked(
    a: (i64, i64),
    b: (i64, i64),
    wired: &std::collections::HashSet<((i64, i64), (i64, i64))>,
) -> bool {
    // horizontal move crossing a vertical line x = 4k: crossing point
    // (4k, y) with y odd-quarter; the primal edge is vertical through it
    if a.1 == b.1 && (a.0 + b.0) % 8 == 0 {
        let x = (a.0 + b.0) / 2;
        let y_lo = 4 * (a.1.div_euclid(4));
        let e = ((x, y_lo), (x, y_lo + 4));
        return wired.contains(&e);
    }
    if a.0 == b.0 && (a.1 + b.1) % 8 == 0 {
        let y = (a.1 + b.1) / 2;
        let x_lo = 4 * (a.0.div_euclid(4));
        let e = ((x_lo, y), (x_lo + 4, y));
        return wired.contains(&e);
    }
    false
}

/// Route graph of a medial FK domain (time zero): primal-edge midpoints
/// with the diagonal medial adjacency.
pub fn medial_route_graph(domain: &MedialDomain) -> Result<RouteGraph> {
    let mids: Vec<Point> = domain.edges.iter().map(|e| e.midpoint()).collect();
    let idx: HashMap<(i64, i64), usize> =
        mids.iter().enumerate().map(|(i, &p)| (key_of(p), i)).collect();
    let mut adj = vec![Vec::new(); mids.len()];
    for (i, &p) in mids.iter().enumerate() {
        for (dx, dy) in [(0.5, 0.5), (-0.5, 0.5)] {
            let q = Point::new(p.x + dx, p.y + dy);
            if let Some(&j) = idx.get(&key_of(q)) {
                adj[i].push(j as u32);
                adj[j].push(i as u32);
            }
        }
    }
    let near = |target: Point| -> usize {
        (0..mids.len())
            .min_by(|&a, &b| mids[a].dist(&target).total_cmp(&mids[b].dist(&target)))
            .unwrap()
    };
    let tip = near(domain.a_point());
    let target = near(domain.b_point());
    Ok(RouteGraph::new(mids, adj, tip, target, 0.71))
}
