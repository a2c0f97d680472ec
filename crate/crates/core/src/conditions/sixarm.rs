//! Six-arm events and multiple-crossing statistics.
//!
//! E(r, R): some sub-curve of diameter at least R gets separated from the
//! target neighborhood by a crosscut of diameter at most r. Detection
//! follows the hitting-time reduction: at least one crosscut endpoint lies
//! on the past curve, so scanning annuli A(gamma(s), r, R) for unforced
//! crossings of the future finds every occurrence.

use super::routes::{avoidable_components_in, RouteGraph};
use super::{fit_power_law, PowerLawFit, ReportRow};
use crate::error::Result;
use crate::geometry::{count_crossings, Annulus, Curve, Point, Region};
use serde::{Deserialize, Serialize};

/// A detected six-arm occurrence.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SixArmWitness {
    /// Curve index s where the separated excursion starts.
    pub s: usize,
    /// Curve index by which the excursion has diameter >= R.
    pub t: usize,
    /// Approximate crosscut: nodes of the avoidable component lying near
    /// the inner circle.
    pub crosscut: Vec<Point>,
}

/// Scan for the event E(r, R) on one curve.
///
/// `graph` is the time-zero route graph of the domain; `rho` is the
/// protected neighborhood radius of the target (the scan stops when the
/// curve first enters it); `stride` subsamples candidate times s (the
/// crosscut reduction makes nearby s redundant below the r scale).
pub fn detect_six_arm(
    curve: &Curve,
    graph: &RouteGraph,
    r: f64,
    big_r: f64,
    rho: f64,
    stride: usize,
) -> Result<Option<SixArmWitness>> {
    // the crosscut reduction wants r below min(rho, R)/2; equality is the
    // boundary case and still yields a well-defined scan
    if !(2.0 * r <= rho.min(big_r) * (1.0 + 1e-9)) {
        return Err(crate::error::Error::invalid(format!(
            "six-arm reduction needs r <= min(rho, R)/2, got r = {r}, R = {big_r}, rho = {rho}"
        )));
    }
    let pts = curve.points();
    let target_pos = graph.positions[graph.target];
    let cutoff = pts
        .iter()
        .position(|p| p.dist(&target_pos) <= rho)
        .unwrap_or(pts.len());
    let stride = stride.max(1);
    let mut slit = vec![false; graph.len()];
    let mut slit_upto = 0usize; // number of curve points marked
    for s in (1..cutoff).step_by(stride) {
        // extend the slit marking to cover points [0, s]
        while slit_upto <= s {
            if let Some(node) = node_of(graph, pts[slit_upto]) {
                slit[node] = true;
            }
            slit_upto += 1;
        }
        if s + 1 >= pts.len() {
            break;
        }
        let tip = match node_of(graph, pts[s + 1]) {
            Some(n) if !slit[n] => n,
            _ => continue,
        };
        if slit[graph.target] {
            break;
        }
        let annulus = Annulus::new(pts[s], r, big_r)?;
        let avoid = avoidable_components_in(graph, &annulus, Some(&slit), tip, graph.target)?;
        if !avoid.any_avoidable() {
            continue;
        }
        // does the future make a crossing contained in an avoidable component?
        let future = Curve::new(pts[s..].to_vec(), Default::default())?;
        let crossings = count_crossings(&future, &annulus);
        'cross: for cr in &crossings.crossings {
            let mut comp = None;
            for p in &future.points()[cr.start..=cr.end] {
                if annulus.region(*p) != Region::Within {
                    continue;
                }
                let node = match node_of(graph, *p) {
                    Some(n) => n,
                    None => continue 'cross,
                };
                let c = avoid.component_of[node];
                if c == usize::MAX {
                    continue 'cross;
                }
                match comp {
                    None => comp = Some(c),
                    Some(prev) if prev != c => continue 'cross,
                    _ => {}
                }
            }
            let comp = match comp {
                Some(c) if avoid.avoidable[c] => c,
                _ => continue 'cross,
            };
            // witness: excursion indices and the inner-circle arc of the
            // component (the crosscut approximation)
            let t = s + cr.end;
            let crosscut: Vec<Point> = (0..graph.len())
                .filter(|&v| {
                    avoid.component_of[v] == comp
                        && (graph.positions[v].dist(&pts[s]) - r).abs() < graph.covering_radius
                })
                .map(|v| graph.positions[v])
                .collect();
            return Ok(Some(SixArmWitness { s, t, crosscut }));
        }
    }
    Ok(None)
}

fn node_of(graph: &RouteGraph, p: Point) -> Option<usize> {
    graph
        .node_at(p)
        .or_else(|| graph.node_near(p, graph.covering_radius * 0.45))
}

/// Multiple-crossing statistics: P(curve makes >= n crossings of A).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MultiCrossingReport {
    pub n: usize,
    pub rows: Vec<ReportRow>,
    pub fit: Option<PowerLawFit>,
}

/// Count, per annulus, how many ensemble curves make at least `n`
/// crossings; fit the power law over the radius ratios when at least
/// three distinct ratios are present.
pub fn count_multiple_crossings(
    ensemble: &[Curve],
    annuli: &[Annulus],
    n: usize,
    model: &str,
) -> Result<MultiCrossingReport> {
    let mut rows = Vec::new();
    for a in annuli {
        let mut hits = 0u64;
        for c in ensemble {
            if count_crossings(c, a).total >= n {
                hits += 1;
            }
        }
        let mut row = ReportRow {
            model: model.into(),
            shape: "annulus".into(),
            z0x: a.center.x,
            z0y: a.center.y,
            r: a.r,
            big_r: a.big_r,
            tau_rule: "time-zero".into(),
            trials: ensemble.len() as u64,
            hits,
            ci_lo: 0.0,
            ci_hi: 1.0,
        };
        row.refresh_ci();
        rows.push(row);
    }
    // aggregate per ratio for the fit
    let mut per_ratio: std::collections::BTreeMap<i64, (f64, u64, u64)> = Default::default();
    for row in &rows {
        let ratio = row.r / row.big_r;
        let key = (ratio * 1e9).round() as i64;
        let e = per_ratio.entry(key).or_insert((ratio, 0, 0));
        e.1 += row.hits;
        e.2 += row.trials;
    }
    let fit_rows: Vec<(f64, u64, u64)> = per_ratio.values().copied().collect();
    let fit = if fit_rows.len() >= 3 {
        Some(fit_power_law(&fit_rows)?)
    } else {
        None
    };
    Ok(MultiCrossingReport { n, rows, fit })
}
