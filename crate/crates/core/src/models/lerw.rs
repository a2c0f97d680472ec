//! Chordal loop-erased random walk: the h-transformed walk from a hits b
//! exactly (Doob conditioning on the exit point), then loops are erased in
//! chronological order.

use crate::error::{Error, Result};
use crate::geometry::{Curve, CurveMeta};
use crate::lattice::{harmonic_solve, random_walk, SquareDomain};
use crate::rng::job_rng;

/// Chronological loop erasure of a site path.
pub fn loop_erase<T: PartialEq + Copy>(path: &[T]) -> Vec<T> {
    let mut out: Vec<T> = Vec::with_capacity(path.len());
    for &v in path {
        if let Some(k) = out.iter().position(|&u| u == v) {
            out.truncate(k + 1);
        } else {
            out.push(v);
        }
    }
    out
}

/// Harmonic measure of b: the h used by the conditioned walk.
pub fn target_harmonic(domain: &SquareDomain) -> Result<Vec<f64>> {
    let g = domain.site_graph();
    let mut fixed = vec![false; g.len()];
    let mut values = vec![0f64; g.len()];
    for v in 0..g.len() {
        if g.boundary[v] {
            fixed[v] = true;
        }
    }
    let b = g
        .site(domain.b)
        .ok_or_else(|| Error::invalid("target b not in domain"))?;
    values[b] = 1.0;
    Ok(harmonic_solve(g, &fixed, &values, None)?.values)
}

pub fn sample_lerw(domain: &SquareDomain, seed: u64) -> Result<Curve> {
    let g = domain.site_graph();
    let a = g
        .site(domain.a)
        .ok_or_else(|| Error::invalid("start a not in domain"))?;
    let h = target_harmonic(domain)?;
    let reachable = g
        .graph
        .neighbors_of(a)
        .any(|(w, _)| !g.boundary[w] && h[w] > 0.0);
    if !reachable {
        return Err(Error::ConditioningImpossible("b unreachable from a".into()));
    }
    let mut rng = job_rng(seed, 0);
    let walk = random_walk(g, a, Some(&h), &mut rng)?;
    let erased = loop_erase(&walk);
    let pts = erased.iter().map(|&v| g.positions[v]).collect();
    Curve::new(pts, CurveMeta { model: "lerw".into(), seed, spacing: 1.0, simple: true })
}
