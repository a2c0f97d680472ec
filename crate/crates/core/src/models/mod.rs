//! The interface samplers: percolation, harmonic explorer, chordal LERW,
//! FK-Ising, and the UST Peano curve. Every sampler is a pure function of
//! its spec: identical (domain, parameters, seed) give byte-identical
//! curves.

mod explore;
mod fk;
mod harmonic_explorer;
mod lerw;
mod ust;

pub use explore::{explore_from, explore_interface, ColorOracle, HashColorOracle, InterfaceStep};
pub use fk::{fk_odds_open, p_self_dual, FkChain, DEFAULT_SWEEPS};
pub use harmonic_explorer::HarmonicOracle;
pub use lerw::{loop_erase, target_harmonic};
pub use ust::{peano_curve, wilson_tree, SpanningTree};

use crate::error::{Error, Result};
use crate::geometry::{Curve, CurveMeta, Point};
use crate::lattice::{DiscreteDomain, TriDomain};
use crate::rng::{job_rng, mix64};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelTag {
    Percolation,
    Lerw,
    HarmonicExplorer,
    FkIsing,
    UstPeano,
}

impl ModelTag {
    pub fn name(&self) -> &'static str {
        match self {
            ModelTag::Percolation => "percolation",
            ModelTag::Lerw => "lerw",
            ModelTag::HarmonicExplorer => "harmonic-explorer",
            ModelTag::FkIsing => "fk-ising",
            ModelTag::UstPeano => "ust-peano",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "percolation" => Ok(ModelTag::Percolation),
            "lerw" => Ok(ModelTag::Lerw),
            "harmonic-explorer" => Ok(ModelTag::HarmonicExplorer),
            "fk-ising" => Ok(ModelTag::FkIsing),
            "ust-peano" => Ok(ModelTag::UstPeano),
            other => Err(Error::invalid(format!("unknown model tag '{other}'"))),
        }
    }
}

/// Model parameters; unused fields are ignored by samplers that don't
/// need them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Site/edge probability. Percolation default 1/2; FK default p_sd.
    pub p: Option<f64>,
    /// Cluster weight for FK; default 2 (validated range).
    pub q: Option<f64>,
    /// Heat-bath sweeps for FK; default 200.
    pub sweeps: Option<u32>,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams { p: None, q: None, sweeps: None }
    }
}

/// Everything a sampler needs.
#[derive(Debug, Clone)]
pub struct ModelSpec {
    pub tag: ModelTag,
    pub domain: DiscreteDomain,
    pub params: ModelParams,
    pub seed: u64,
}

impl ModelSpec {
    pub fn new(tag: ModelTag, domain: DiscreteDomain, seed: u64) -> Self {
        ModelSpec { tag, domain, params: ModelParams::default(), seed }
    }

    fn validate(&self) -> Result<()> {
        if let Some(p) = self.params.p {
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::invalid("p must lie in (0,1)"));
            }
        }
        if let Some(q) = self.params.q {
            if !(q > 0.0) {
                return Err(Error::invalid("q must be positive"));
            }
        }
        if self.params.sweeps == Some(0) {
            return Err(Error::invalid("sweeps must be >= 1"));
        }
        Ok(())
    }
}

/// Sample one interface.
pub fn sample(spec: &ModelSpec) -> Result<Curve> {
    spec.validate()?;
    match (spec.tag, &spec.domain) {
        (ModelTag::Percolation, DiscreteDomain::Triangular(d)) => {
            sample_percolation(d, spec.params.p.unwrap_or(0.5), spec.seed)
        }
        (ModelTag::HarmonicExplorer, DiscreteDomain::Triangular(d)) => {
            sample_harmonic_explorer(d, spec.seed)
        }
        (ModelTag::Lerw, DiscreteDomain::Square(d)) => lerw::sample_lerw(d, spec.seed),
        (ModelTag::FkIsing, DiscreteDomain::Medial(d)) => fk::sample_fk(
            d,
            spec.params.p,
            spec.params.q.unwrap_or(2.0),
            spec.params.sweeps.unwrap_or(fk::DEFAULT_SWEEPS),
            spec.seed,
        ),
        (ModelTag::UstPeano, DiscreteDomain::Square(d)) => ust::sample_ust_peano(d, spec.seed),
        (tag, dom) => Err(Error::invalid(format!(
            "model {} cannot run on a {:?} domain",
            tag.name(),
            dom.kind()
        ))),
    }
}

/// Critical site percolation interface on a triangular admissible domain.
///
/// Site colors are i.i.d. Bernoulli(p), keyed by (seed, site) so the
/// coloring is independent of exploration order; the a -> b interface on
/// the hexagonal dual separates the open cluster of arc1 from the closed
/// cluster of arc2.
pub fn sample_percolation(domain: &TriDomain, p: f64, seed: u64) -> Result<Curve> {
    domain.validate_connectivity()?;
    let mut oracle = HashColorOracle::new(seed, p);
    let faces = explore_interface(domain, &mut oracle)?;
    assemble_tri_curve(domain, &faces, "percolation", seed)
}

/// Harmonic explorer on a triangular admissible domain.
pub fn sample_harmonic_explorer(domain: &TriDomain, seed: u64) -> Result<Curve> {
    domain.validate_connectivity()?;
    let mut oracle = HarmonicOracle::new(domain, job_rng(seed, 0));
    let faces = explore_interface(domain, &mut oracle)?;
    assemble_tri_curve(domain, &faces, "harmonic-explorer", seed)
}

pub(crate) fn assemble_tri_curve(
    domain: &TriDomain,
    faces: &[crate::lattice::TriFace],
    model: &str,
    seed: u64,
) -> Result<Curve> {
    let mut pts: Vec<Point> = Vec::with_capacity(faces.len() + 2);
    pts.push(domain.a_point());
    pts.extend(faces.iter().map(|f| f.center()));
    pts.push(domain.b_point());
    Curve::new(pts, CurveMeta { model: model.into(), seed, spacing: 1.0, simple: true })
}

/// Deterministic per-site Bernoulli color used by percolation.
pub fn site_color(seed: u64, site: (i32, i32), p: f64) -> bool {
    let h = mix64(seed ^ mix64((site.0 as u64) << 32 ^ (site.1 as u64 & 0xffff_ffff)));
    // map to [0,1)
    let u = (h >> 11) as f64 / (1u64 << 53) as f64;
    u < p
}
