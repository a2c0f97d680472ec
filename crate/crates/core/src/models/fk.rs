//! FK (random-cluster) sampling: single-edge heat-bath dynamics on an edge
//! configuration with a wired arc, and interface extraction on the
//! modified medial lattice.

use crate::error::{Error, Result};
use crate::geometry::{Curve, CurveMeta};
use crate::lattice::{EdgeConfig, MedialDomain};
use crate::rng::job_rng;
use rand::Rng;

/// Burn-in default, validated against exact enumeration on tiny domains.
pub const DEFAULT_SWEEPS: u32 = 200;

/// Self-dual point p_sd(q) = sqrt(q) / (1 + sqrt(q)).
pub fn p_self_dual(q: f64) -> f64 {
    q.sqrt() / (1.0 + q.sqrt())
}

/// Conditional probability that an edge is open given the rest: the odds
/// open:closed are (p/(1-p)) * q^(dk), where dk = -1 exactly when the
/// endpoints are already joined without this edge.
pub fn fk_odds_open(p: f64, q: f64, endpoints_joined: bool) -> f64 {
    if endpoints_joined {
        p
    } else {
        p / (p + (1.0 - p) * q)
    }
}

/// Single-edge heat-bath Markov chain over an edge configuration.
pub struct FkChain {
    pub config: EdgeConfig,
    pub p: f64,
    pub q: f64,
    /// Edges touched by one sweep, in fixed scan order.
    pub dynamic: Vec<usize>,
}

impl FkChain {
    pub fn new(config: EdgeConfig, p: f64, q: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::invalid("p must lie in (0,1)"));
        }
        if !(q > 0.0) {
            return Err(Error::invalid("q must be positive"));
        }
        let wired: std::collections::HashSet<usize> = config.wired.iter().copied().collect();
        let dynamic = (0..config.edges.len()).filter(|e| !wired.contains(e)).collect();
        Ok(FkChain { config, p, q, dynamic })
    }

    /// One heat-bath update of edge `e`.
    pub fn update_edge<R: Rng>(&mut self, e: usize, rng: &mut R) {
        let (u, v) = self.config.edges[e];
        let joined = self.config.connected_without(u, v, e);
        let p_open = fk_odds_open(self.p, self.q, joined);
        self.config.open[e] = rng.gen_range(0.0..1.0) < p_open;
    }

    /// One sweep = one update per dynamic edge, fixed order.
    pub fn sweep<R: Rng>(&mut self, rng: &mut R) {
        for i in 0..self.dynamic.len() {
            let e = self.dynamic[i];
            self.update_edge(e, rng);
        }
    }
}

/// Sample an FK interface on a medial domain.
///
/// q defaults to 2 (FK Ising); other q run but are flagged unvalidated in
/// the curve's model tag. p defaults to the self-dual point.
pub fn sample_fk(
    domain: &MedialDomain,
    p: Option<f64>,
    q: f64,
    sweeps: u32,
    seed: u64,
) -> Result<Curve> {
    if sweeps == 0 {
        return Err(Error::invalid("sweeps must be >= 1"));
    }
    let p = p.unwrap_or_else(|| p_self_dual(q));
    let primal = domain.primal_edge_list();
    let ids: Vec<usize> = primal.iter().map(|&(i, _)| i).collect();
    let local_of_global: std::collections::HashMap<usize, usize> =
        ids.iter().enumerate().map(|(l, &g)| (g, l)).collect();
    let edges: Vec<(usize, usize)> = primal.iter().map(|&(_, e)| e).collect();
    let wired: Vec<usize> = domain
        .wired_edges
        .iter()
        .map(|g| local_of_global[g])
        .collect();
    let config = EdgeConfig::new(domain.n_vertices(), edges, wired);
    let mut chain = FkChain::new(config, p, q)?;
    let mut rng = job_rng(seed, 0);
    for _ in 0..sweeps {
        chain.sweep(&mut rng);
    }
    // per-edge open states in the domain's global indexing
    let mut open = vec![false; domain.edges.len()];
    for (l, &g) in ids.iter().enumerate() {
        open[g] = chain.config.open[l];
    }
    let pts = domain.trace_interface(&open)?;
    let model = if (q - 2.0).abs() < 1e-12 {
        "fk-ising".to_string()
    } else {
        // allowed but unvalidated away from q = 2
        format!("fk-q{q}")
    };
    Curve::new(pts, CurveMeta { model, seed, spacing: 1.0, simple: true })
}
