//! Square-lattice domains for the loop-erased walk and the uniform
//! spanning tree: a rectangular box of vertices whose boundary is the
//! perimeter path, with two marked boundary vertices (LERW) or a wired
//! boundary arc (UST).

use super::{DomainSpec, LatticeKind, SiteGraph};
use crate::error::{Error, Result};
use crate::geometry::Point;
use std::collections::HashMap;

pub const NEIGHBORS: [(i32, i32); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];

#[derive(Debug, Clone)]
pub struct SquareDomain {
    /// Box of vertices [0, w] x [0, h].
    pub w: i32,
    pub h: i32,
    /// Marked boundary vertices.
    pub a: (i32, i32),
    pub b: (i32, i32),
    /// Wired boundary edges (consecutive perimeter vertex pairs), possibly
    /// empty; used by the UST sampler.
    pub wired_arc: Vec<((i32, i32), (i32, i32))>,
    sites: SiteGraph,
}

impl SquareDomain {
    /// Box domain with marked boundary vertices a and b.
    pub fn box_domain(w: i32, h: i32, a: (i32, i32), b: (i32, i32)) -> Result<Self> {
        if w < 0 || h < 1 || (w + 1) * (h + 1) < 2 {
            return Err(Error::invalid("box needs at least two vertices"));
        }
        for p in [a, b] {
            if !on_perimeter(w, h, p) {
                return Err(Error::invalid(format!("marked point {p:?} not on the boundary")));
            }
        }
        if a == b {
            return Err(Error::invalid("marked points must differ"));
        }
        let sites = build_sites(w, h);
        Ok(SquareDomain { w, h, a, b, wired_arc: Vec::new(), sites })
    }

    /// Box with a wired arc running along the bottom side from a=(0,0) to
    /// b=(w,0) (counterclockwise endpoints of the wired part).
    pub fn wired_bottom(w: i32, h: i32) -> Result<Self> {
        let mut d = SquareDomain::box_domain(w, h, (0, 0), (w, 0))?;
        for x in 0..w {
            d.wired_arc.push(((x, 0), (x + 1, 0)));
        }
        Ok(d)
    }

    pub fn contains(&self, p: (i32, i32)) -> bool {
        p.0 >= 0 && p.0 <= self.w && p.1 >= 0 && p.1 <= self.h
    }

    pub fn is_boundary(&self, p: (i32, i32)) -> bool {
        on_perimeter(self.w, self.h, p)
    }

    pub fn site_graph(&self) -> &SiteGraph {
        &self.sites
    }

    /// Perimeter as a counterclockwise vertex path starting at (0,0).
    pub fn perimeter(&self) -> Vec<(i32, i32)> {
        let (w, h) = (self.w, self.h);
        let mut out = Vec::new();
        for x in 0..=w {
            out.push((x, 0));
        }
        for y in 1..=h {
            out.push((w, y));
        }
        for x in (0..w).rev() {
            out.push((x, h));
        }
        for y in (1..h).rev() {
            out.push((0, y));
        }
        out
    }

    pub fn to_spec(&self) -> DomainSpec {
        // arc1: the wired path when wired, else the a -> b perimeter
        // stretch (counterclockwise); arc2: the complementary stretch
        let per = self.perimeter();
        let ia = per.iter().position(|&p| p == self.a).unwrap();
        let ib = per.iter().position(|&p| p == self.b).unwrap();
        let arc1: Vec<(i32, i32)> = if self.wired_arc.is_empty() {
            let mut arc = Vec::new();
            let mut k = ia;
            loop {
                arc.push(per[k]);
                if k == ib {
                    break;
                }
                k = (k + 1) % per.len();
            }
            arc
        } else {
            let mut arc = vec![self.wired_arc[0].0];
            arc.extend(self.wired_arc.iter().map(|&(_, v)| v));
            arc
        };
        let mut arc2 = Vec::new();
        let mut k = ia;
        loop {
            arc2.push(per[k]);
            if k == ib {
                break;
            }
            k = (k + per.len() - 1) % per.len();
        }
        DomainSpec {
            lattice: LatticeKind::Square,
            bbox: [0, 0, self.w as i64, self.h as i64],
            arc1: arc1.into_iter().map(|(x, y)| [x as i64, y as i64]).collect(),
            arc2: arc2.into_iter().map(|(x, y)| [x as i64, y as i64]).collect(),
            a: [self.a.0 as i64, self.a.1 as i64],
            b: [self.b.0 as i64, self.b.1 as i64],
            spacing: 1.0,
        }
    }

    pub fn from_spec(spec: &DomainSpec) -> Result<Self> {
        let [x0, y0, x1, y1] = spec.bbox;
        if x0 != 0 || y0 != 0 {
            return Err(Error::invalid("square domain bbox must start at the origin"));
        }
        let mut d = SquareDomain::box_domain(
            x1 as i32,
            y1 as i32,
            (spec.a[0] as i32, spec.a[1] as i32),
            (spec.b[0] as i32, spec.b[1] as i32),
        )?;
        // arc1 doubles as the wired arc for spanning-tree domains, unless
        // it covers the whole perimeter
        let arc1: Vec<(i32, i32)> = spec.arc1.iter().map(|&[x, y]| (x as i32, y as i32)).collect();
        if arc1.len() >= 2 && arc1.len() <= d.perimeter().len() {
            for w in arc1.windows(2) {
                let d2 = (w[1].0 - w[0].0).abs() + (w[1].1 - w[0].1).abs();
                if d2 != 1 {
                    return Err(Error::invalid("arc1 must be a lattice path"));
                }
                d.wired_arc.push((w[0], w[1]));
            }
        }
        Ok(d)
    }
}

fn on_perimeter(w: i32, h: i32, p: (i32, i32)) -> bool {
    let inside = p.0 >= 0 && p.0 <= w && p.1 >= 0 && p.1 <= h;
    inside && (p.0 == 0 || p.0 == w || p.1 == 0 || p.1 == h)
}

fn build_sites(w: i32, h: i32) -> SiteGraph {
    let mut coords = Vec::new();
    for y in 0..=h {
        for x in 0..=w {
            coords.push((x, y));
        }
    }
    let index: HashMap<(i32, i32), usize> =
        coords.iter().copied().enumerate().map(|(i, c)| (c, i)).collect();
    let mut edges = Vec::new();
    for (i, &(x, y)) in coords.iter().enumerate() {
        for d in [(1, 0), (0, 1)] {
            if let Some(&j) = index.get(&(x + d.0, y + d.1)) {
                edges.push((i, j));
            }
        }
    }
    let positions = coords.iter().map(|&(x, y)| Point::new(x as f64, y as f64)).collect();
    let boundary = coords.iter().map(|&p| on_perimeter(w, h, p)).collect();
    SiteGraph::new(coords, positions, &edges, boundary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::harmonic_solve;

    #[test]
    fn box_basics() {
        let d = SquareDomain::box_domain(4, 4, (2, 0), (2, 4)).unwrap();
        assert!(d.is_boundary((0, 2)));
        assert!(!d.is_boundary((2, 2)));
        assert_eq!(d.perimeter().len(), 16);
        let spec = d.to_spec();
        let d2 = SquareDomain::from_spec(&spec).unwrap();
        assert_eq!((d2.w, d2.h, d2.a, d2.b), (4, 4, (2, 0), (2, 4)));
    }

    #[test]
    fn odd_square_midline_is_half() {
        // n x n sites, left side 1, right side 0, n odd: exact 1/2 on the
        // vertical midline by symmetry
        let d = SquareDomain::box_domain(4, 4, (0, 0), (4, 4)).unwrap(); // 5x5 vertices
        let g = d.site_graph();
        let mut fixed = vec![false; g.len()];
        let mut vals = vec![0.0; g.len()];
        for y in 0..=4 {
            let l = g.site((0, y)).unwrap();
            fixed[l] = true;
            vals[l] = 1.0;
            let r = g.site((4, y)).unwrap();
            fixed[r] = true;
        }
        let h = harmonic_solve(g, &fixed, &vals, None).unwrap();
        for y in 1..4 {
            let m = g.site((2, y)).unwrap();
            assert!((h.values[m] - 0.5).abs() < 1e-9, "midline at y={y}: {}", h.values[m]);
        }
        assert!(h.mean_value_residual(g, &fixed) < 1e-9);
    }
}
