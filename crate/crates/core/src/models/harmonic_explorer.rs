//! The harmonic-explorer color oracle: each queried site is committed open
//! with probability H(site), where H is the discrete harmonic function on
//! the not-yet-committed region with boundary values 1 on the (grown) open
//! arc and 0 on the closed arc.

use super::explore::ColorOracle;
use crate::error::Result;
use crate::lattice::{harmonic_solve, TriDomain};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub struct HarmonicOracle<'d> {
    domain: &'d TriDomain,
    rng: ChaCha8Rng,
    fixed: Vec<bool>,
    values: Vec<f64>,
    committed: Vec<((i32, i32), bool)>,
    /// warm start carried between solves
    last: Option<Vec<f64>>,
}

impl<'d> HarmonicOracle<'d> {
    pub fn new(domain: &'d TriDomain, rng: ChaCha8Rng) -> Self {
        let g = domain.site_graph();
        let mut fixed = vec![false; g.len()];
        let mut values = vec![0f64; g.len()];
        for v in 0..g.len() {
            if let Some(c) = domain.fixed_color(g.coord(v)) {
                fixed[v] = true;
                values[v] = if c { 1.0 } else { 0.0 };
            }
        }
        HarmonicOracle { domain, rng, fixed, values, committed: Vec::new(), last: None }
    }

    /// Oracle for a slit domain: sites already passed by the curve carry
    /// their committed colors as Dirichlet data.
    pub fn with_committed(
        domain: &'d TriDomain,
        committed: &[((i32, i32), bool)],
        rng: ChaCha8Rng,
    ) -> Self {
        let mut oracle = HarmonicOracle::new(domain, rng);
        let g = domain.site_graph();
        for &(site, open) in committed {
            if let Some(idx) = g.site(site) {
                oracle.fixed[idx] = true;
                oracle.values[idx] = if open { 1.0 } else { 0.0 };
            }
        }
        oracle
    }

    /// Probability that the queried site commits open, i.e. the harmonic
    /// value at the hexagon center ahead of the tip.
    pub fn step_probability(&mut self, site: (i32, i32)) -> Result<f64> {
        let g = self.domain.site_graph();
        let field = harmonic_solve(g, &self.fixed, &self.values, self.last.as_deref())?;
        let idx = g
            .site(site)
            .ok_or_else(|| crate::error::Error::invalid(format!("site {site:?} not in domain")))?;
        let p = field.values[idx];
        self.last = Some(field.values);
        Ok(p)
    }
}

impl ColorOracle for HarmonicOracle<'_> {
    fn color(&mut self, site: (i32, i32)) -> Result<bool> {
        let p = self.step_probability(site)?;
        let open = self.rng.gen_range(0.0..1.0) < p;
        let g = self.domain.site_graph();
        let idx = g.site(site).expect("checked in step_probability");
        self.fixed[idx] = true;
        self.values[idx] = if open { 1.0 } else { 0.0 };
        self.committed.push((site, open));
        Ok(open)
    }

    fn revealed(&self) -> Vec<((i32, i32), bool)> {
        self.committed.clone()
    }
}
