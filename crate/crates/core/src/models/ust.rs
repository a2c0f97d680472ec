//! Uniform spanning tree via Wilson's algorithm, conditioned on a wired
//! boundary arc, and the Peano exploration curve on the quarter-offset
//! fine lattice.
//!
//! The Peano curve is the contour of the tree: pivoting clockwise around
//! each vertex sweeps its four quadrant centers exactly once over the
//! whole cycle, so the contour visits every fine vertex once. Dropping the
//! contiguous stretch that runs along the outer side of the wired arc
//! leaves the chordal space-filling path from a to b.

use crate::error::{Error, Result};
use crate::geometry::{Curve, CurveMeta, Point};
use crate::lattice::SquareDomain;
use crate::rng::job_rng;
use rand::Rng;
use std::collections::{HashMap, HashSet};

const DIRS: [(i32, i32); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)]; // E N W S

/// Quadrant center between direction k and k+1 (NE, NW, SW, SE).
const QUARTER: [(f64, f64); 4] = [(0.25, 0.25), (-0.25, 0.25), (-0.25, -0.25), (0.25, -0.25)];

#[derive(Debug, Clone)]
pub struct SpanningTree {
    /// dirs[v] = which of the four direction edges are tree edges.
    dirs: HashMap<(i32, i32), [bool; 4]>,
    pub n_vertices: usize,
}

impl SpanningTree {
    fn new() -> Self {
        SpanningTree { dirs: HashMap::new(), n_vertices: 0 }
    }

    fn add_edge(&mut self, u: (i32, i32), v: (i32, i32)) {
        let d = DIRS
            .iter()
            .position(|&(dx, dy)| (u.0 + dx, u.1 + dy) == v)
            .expect("not a lattice edge");
        self.dirs.entry(u).or_insert([false; 4])[d] = true;
        self.dirs.entry(v).or_insert([false; 4])[(d + 2) % 4] = true;
    }

    pub fn has_edge(&self, u: (i32, i32), dir: usize) -> bool {
        self.dirs.get(&u).map(|ds| ds[dir]).unwrap_or(false)
    }

    /// Normalized edge list, for enumeration tests.
    pub fn edge_list(&self) -> Vec<((i32, i32), (i32, i32))> {
        let mut out = Vec::new();
        for (&u, ds) in &self.dirs {
            for (d, &present) in ds.iter().enumerate() {
                if present && d < 2 {
                    let v = (u.0 + DIRS[d].0, u.1 + DIRS[d].1);
                    out.push((u, v));
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// Wilson's algorithm on the domain graph, conditioned on the wired arc
/// being in the tree (equivalently, the UST of the contracted graph).
pub fn wilson_tree(domain: &SquareDomain, seed: u64) -> Result<SpanningTree> {
    if domain.wired_arc.is_empty() {
        return Err(Error::invalid("UST needs a non-empty wired arc"));
    }
    let g = domain.site_graph();
    let boundary_edge_count = domain.perimeter().len();
    if domain.wired_arc.len() >= boundary_edge_count {
        return Err(Error::invalid("wired arc must not be the entire boundary"));
    }
    let mut tree = SpanningTree::new();
    let mut in_tree: HashSet<(i32, i32)> = HashSet::new();
    for &(u, v) in &domain.wired_arc {
        tree.add_edge(u, v);
        in_tree.insert(u);
        in_tree.insert(v);
    }
    let mut rng = job_rng(seed, 0);
    let order: Vec<(i32, i32)> = (0..g.len()).map(|v| g.coord(v)).collect();
    let mut next_step: HashMap<(i32, i32), (i32, i32)> = HashMap::new();
    for &start in &order {
        if in_tree.contains(&start) {
            continue;
        }
        // loop-erased walk to the current tree, recorded via next pointers
        let mut at = start;
        while !in_tree.contains(&at) {
            let id = g.site(at).unwrap();
            let nbrs: Vec<(i32, i32)> =
                g.graph.neighbors_of(id).map(|(w, _)| g.coord(w)).collect();
            let choice = nbrs[rng.gen_range(0..nbrs.len())];
            next_step.insert(at, choice);
            at = choice;
        }
        let mut at = start;
        while !in_tree.contains(&at) {
            let nxt = next_step[&at];
            tree.add_edge(at, nxt);
            in_tree.insert(at);
            at = nxt;
        }
    }
    tree.n_vertices = g.len();
    Ok(tree)
}

/// The chordal Peano path of a tree: fine-lattice points from next-to-a to
/// next-to-b.
pub fn peano_curve(domain: &SquareDomain, tree: &SpanningTree) -> Result<Vec<Point>> {
    let arc = &domain.wired_arc;
    let a_tilde = arc[0].0;
    let dir_of = |u: (i32, i32), v: (i32, i32)| -> usize {
        DIRS.iter()
            .position(|&(dx, dy)| (u.0 + dx, u.1 + dy) == v)
            .expect("arc edge not a lattice edge")
    };
    // excluded quarters: right-side flanks of the wired arc plus the two
    // end caps
    let quarter_pt =
        |v: (i32, i32), q: usize| -> (i64, i64) { (4 * v.0 as i64 + sign(QUARTER[q].0), 4 * v.1 as i64 + sign(QUARTER[q].1)) };
    let mut excluded: HashSet<(i64, i64)> = HashSet::new();
    for &(u, v) in arc {
        let d = dir_of(u, v);
        excluded.insert(quarter_pt(u, (d + 3) % 4));
        excluded.insert(quarter_pt(v, (d + 2) % 4));
    }
    let d_first = dir_of(arc[0].0, arc[0].1);
    let d_last = dir_of(arc.last().unwrap().0, arc.last().unwrap().1);
    excluded.insert(quarter_pt(arc[0].0, (d_first + 2) % 4));
    excluded.insert(quarter_pt(arc.last().unwrap().1, (d_last + 3) % 4));

    // contour cycle
    let start = (a_tilde, d_first);
    let mut state = start;
    let mut cycle: Vec<(i64, i64)> = Vec::with_capacity(4 * tree.n_vertices);
    loop {
        let (v, rev_in) = state;
        let mut pointer = rev_in;
        loop {
            pointer = (pointer + 3) % 4;
            cycle.push(quarter_pt(v, pointer));
            if tree.has_edge(v, pointer) {
                let w = (v.0 + DIRS[pointer].0, v.1 + DIRS[pointer].1);
                state = (w, (pointer + 2) % 4);
                break;
            }
        }
        if state == start {
            break;
        }
    }
    if cycle.len() != 4 * tree.n_vertices {
        return Err(Error::invalid(format!(
            "contour covered {} of {} fine vertices",
            cycle.len(),
            4 * tree.n_vertices
        )));
    }
    // rotate the cycle so the excluded outer run sits at the end, then drop it
    let n = cycle.len();
    let first_kept = (0..n)
        .find(|&i| excluded.contains(&cycle[(i + n - 1) % n]) && !excluded.contains(&cycle[i]))
        .ok_or_else(|| Error::invalid("no boundary between path and outer run"))?;
    let mut path = Vec::with_capacity(n - excluded.len());
    for k in 0..n {
        let p = cycle[(first_kept + k) % n];
        if excluded.contains(&p) {
            // everything from here on must be the contiguous outer run
            for j in k..n {
                let q = cycle[(first_kept + j) % n];
                if !excluded.contains(&q) {
                    return Err(Error::invalid("outer run not contiguous"));
                }
            }
            break;
        }
        path.push(p);
    }
    Ok(path
        .into_iter()
        .map(|(x4, y4)| Point::new(x4 as f64 / 4.0, y4 as f64 / 4.0))
        .collect())
}

fn sign(x: f64) -> i64 {
    if x > 0.0 {
        1
    } else {
        -1
    }
}

pub fn sample_ust_peano(domain: &SquareDomain, seed: u64) -> Result<Curve> {
    let tree = wilson_tree(domain, seed)?;
    let pts = peano_curve(domain, &tree)?;
    Curve::new(pts, CurveMeta { model: "ust-peano".into(), seed, spacing: 0.5, simple: true })
}
