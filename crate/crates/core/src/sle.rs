//! SLE(kappa) driving sampling, the kappa-continuity experiment, and
//! driving-process statistics for extracted lattice interfaces.

use crate::error::{Error, Result};
use crate::geometry::curve_distance;
use crate::loewner::{solve_trace, DrivingFunction};
use crate::rng::job_rng;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Specification of one SLE driving sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SleSpec {
    pub kappa: f64,
    pub t_end: f64,
    pub dt: f64,
    pub seed: u64,
}

impl SleSpec {
    pub fn new(kappa: f64, t_end: f64, dt: f64, seed: u64) -> Self {
        SleSpec { kappa, t_end, dt, seed }
    }

    /// Trace experiments assume the curve regime kappa in [0, 8).
    pub fn trace_regime(&self) -> bool {
        self.kappa < 8.0
    }
}

/// One standard normal via Box-Muller. The sine variate is dropped so the
/// draw count per step is fixed, keeping the kappa-coupling exact.
fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// W(t) = sqrt(kappa) B(t) on a uniform grid: Gaussian increments with
/// variance kappa * dt, W(0) = 0. The same seed uses the same underlying
/// Brownian increments for every kappa, realizing the coupling used by
/// the continuity experiment.
pub fn sample_sle_driving(spec: &SleSpec) -> Result<DrivingFunction> {
    if !(spec.dt > 0.0) {
        return Err(Error::invalid("dt must be positive"));
    }
    if !(spec.kappa >= 0.0) {
        return Err(Error::invalid("kappa must be nonnegative"));
    }
    let n = (spec.t_end / spec.dt).round().max(1.0) as usize;
    let mut rng = job_rng(spec.seed, 0);
    let step = (spec.kappa * spec.dt).sqrt();
    let mut times = Vec::with_capacity(n + 1);
    let mut values = Vec::with_capacity(n + 1);
    times.push(0.0);
    values.push(0.0);
    let mut w = 0.0;
    for i in 1..=n {
        w += step * standard_normal(&mut rng);
        times.push(i as f64 * spec.dt);
        values.push(w);
    }
    DrivingFunction::new(times, values)
}

/// One row of the continuity experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ContinuityRow {
    pub delta: f64,
    pub mean_distance: f64,
    pub max_distance: f64,
    pub mean_diameter: f64,
}

/// Coupled-noise trace distance between SLE(kappa) and SLE(kappa + delta).
///
/// Traces are truncated to the capacity horizon 0.9 T to avoid endpoint
/// artifacts, then compared in the reparametrization-free curve metric.
pub fn kappa_continuity_experiment(
    kappa: f64,
    deltas: &[f64],
    t_end: f64,
    dt: f64,
    n_seeds: u64,
    base_seed: u64,
) -> Result<Vec<ContinuityRow>> {
    for &d in deltas {
        if !(0.0..8.0).contains(&(kappa + d)) || !(0.0..8.0).contains(&kappa) {
            return Err(Error::invalid("kappa and kappa + delta must lie in [0, 8)"));
        }
    }
    let horizon = 0.9 * t_end;
    let eps = dt.sqrt();
    let refine = (horizon.sqrt() / 25.0).max(1e-3);
    let mut rows = Vec::new();
    for &delta in deltas {
        let mut sum = 0.0;
        let mut max_d = 0.0f64;
        let mut diam_sum = 0.0;
        for s in 0..n_seeds {
            let seed = base_seed.wrapping_add(s);
            let w1 = clip(&sample_sle_driving(&SleSpec::new(kappa, t_end, dt, seed))?, horizon)?;
            let w2 = clip(
                &sample_sle_driving(&SleSpec::new(kappa + delta, t_end, dt, seed))?,
                horizon,
            )?;
            let c1 = solve_trace(&w1, dt, eps)?;
            let c2 = solve_trace(&w2, dt, eps)?;
            let d = if delta == 0.0 {
                0.0
            } else {
                curve_distance(&c1, &c2, refine)?
            };
            sum += d;
            max_d = max_d.max(d);
            diam_sum += c1.diameter();
        }
        rows.push(ContinuityRow {
            delta,
            mean_distance: sum / n_seeds as f64,
            max_distance: max_d,
            mean_diameter: diam_sum / n_seeds as f64,
        });
    }
    Ok(rows)
}

fn clip(w: &DrivingFunction, horizon: f64) -> Result<DrivingFunction> {
    let mut times = Vec::new();
    let mut values = Vec::new();
    for (&t, &v) in w.times().iter().zip(w.values()) {
        if t <= horizon {
            times.push(t);
            values.push(v);
        }
    }
    DrivingFunction::new(times, values)
}

/// Kappa estimate from the variance growth of an ensemble of drivings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KappaEstimate {
    pub kappa_hat: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    /// Lag-1 autocorrelation of increments (independence diagnostic).
    pub lag1_autocorr: f64,
    pub n_curves: usize,
}

/// Slope of Var[W(t)] against t through the origin, with a bootstrap
/// confidence interval over curves. Drivings must share a common grid.
pub fn estimate_kappa(drivings: &[DrivingFunction], bootstrap_seed: u64) -> Result<KappaEstimate> {
    if drivings.len() < 30 {
        return Err(Error::invalid("need >= 30 drivings"));
    }
    let grid = drivings[0].times().to_vec();
    for d in drivings {
        if d.times().len() != grid.len()
            || d.times()
                .iter()
                .zip(&grid)
                .any(|(a, b)| (a - b).abs() > 1e-9 * (1.0 + b.abs()))
        {
            return Err(Error::invalid("drivings must share a common time grid"));
        }
    }
    let kappa_of = |sample: &[usize]| -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for (j, &t) in grid.iter().enumerate().skip(1) {
            let mut m2 = 0.0;
            for &ci in sample {
                let w = drivings[ci].values()[j] - drivings[ci].values()[0];
                m2 += w * w;
            }
            let var = m2 / sample.len() as f64;
            num += var * t;
            den += t * t;
        }
        num / den
    };
    let all: Vec<usize> = (0..drivings.len()).collect();
    let kappa_hat = kappa_of(&all);
    // bootstrap over curves
    let mut rng = job_rng(bootstrap_seed, 777);
    let b = 200;
    let mut boots: Vec<f64> = (0..b)
        .map(|_| {
            let sample: Vec<usize> =
                (0..drivings.len()).map(|_| rng.gen_range(0..drivings.len())).collect();
            kappa_of(&sample)
        })
        .collect();
    boots.sort_by(f64::total_cmp);
    let lo = boots[(0.025 * b as f64) as usize];
    let hi = boots[((0.975 * b as f64) as usize).min(b - 1)];

    // lag-1 autocorrelation of increments, averaged over curves
    let mut ac_sum = 0.0;
    let mut ac_n = 0usize;
    for d in drivings {
        let v = d.values();
        let incs: Vec<f64> = v.windows(2).map(|w| w[1] - w[0]).collect();
        if incs.len() < 3 {
            continue;
        }
        let mean = incs.iter().sum::<f64>() / incs.len() as f64;
        let var: f64 = incs.iter().map(|x| (x - mean) * (x - mean)).sum();
        if var > 0.0 {
            let cov: f64 = incs.windows(2).map(|w| (w[0] - mean) * (w[1] - mean)).sum();
            ac_sum += cov / var;
            ac_n += 1;
        }
    }
    Ok(KappaEstimate {
        kappa_hat,
        ci_lo: lo,
        ci_hi: hi,
        lag1_autocorr: if ac_n > 0 { ac_sum / ac_n as f64 } else { 0.0 },
        n_curves: drivings.len(),
    })
}

/// Driving-process statistics: exceedance tails and dyadic Holder table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DrivingStats {
    /// Rows (L/u, empirical P(|W(u^2/4)| >= 2L)).
    pub tail_rows: Vec<(f64, f64)>,
    /// Fitted decay rate c in P ~ K exp(-c L/u) over the nonzero rows.
    pub fitted_decay: Option<f64>,
    /// (alpha, n, fraction of dyadic increments within 2^(-alpha n)).
    pub holder_table: Vec<(f64, u32, f64)>,
    /// Estimate of E[exp(eps |W(t)|/sqrt(t))] at the horizon, eps = 1/2.
    pub exp_moment: f64,
    /// Per-time variance at the horizon.
    pub var_at_horizon: f64,
}

/// Tail and regularity report for an ensemble of drivings.
pub fn driving_tail_report(drivings: &[DrivingFunction]) -> Result<DrivingStats> {
    if drivings.is_empty() {
        return Err(Error::invalid("empty ensemble"));
    }
    let t_end = drivings.iter().map(|d| d.duration()).fold(f64::INFINITY, f64::min);
    let u = (4.0f64 * (t_end * 0.5)).sqrt(); // test time u^2/4 = T/2
    let t_probe = u * u / 4.0;
    let ratios = [0.5, 0.75, 1.0, 1.25, 1.5, 2.0, 2.5];
    let mut tail_rows = Vec::new();
    for &lu in &ratios {
        let l = lu * u;
        let count = drivings
            .iter()
            .filter(|d| d.value_at(t_probe).abs() >= 2.0 * l)
            .count();
        tail_rows.push((lu, count as f64 / drivings.len() as f64));
    }
    // fit log p = a - c (L/u) on nonzero rows
    let pts: Vec<(f64, f64)> = tail_rows
        .iter()
        .filter(|&&(_, p)| p > 0.0)
        .map(|&(x, p)| (x, p.ln()))
        .collect();
    let fitted_decay = if pts.len() >= 2 {
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        let denom = n * sxx - sx * sx;
        if denom.abs() > 1e-12 {
            Some(-(n * sxy - sx * sy) / denom)
        } else {
            None
        }
    } else {
        None
    };
    // dyadic Holder table
    let mut holder_table = Vec::new();
    for &alpha in &[0.3, 0.4, 0.45] {
        for n in 2..=6u32 {
            let blocks = 1usize << n;
            let mut ok = 0usize;
            let mut total = 0usize;
            for d in drivings {
                for j in 0..blocks {
                    let t0 = t_end * j as f64 / blocks as f64;
                    let t1 = t_end * (j + 1) as f64 / blocks as f64;
                    let w0 = d.value_at(t0);
                    let mut sup = 0.0f64;
                    for (&t, &v) in d.times().iter().zip(d.values()) {
                        if t >= t0 && t <= t1 {
                            sup = sup.max((v - w0).abs());
                        }
                    }
                    total += 1;
                    if sup <= (2f64).powf(-alpha * n as f64) * t_end.sqrt() {
                        ok += 1;
                    }
                }
            }
            holder_table.push((alpha, n, ok as f64 / total as f64));
        }
    }
    let exp_moment = drivings
        .iter()
        .map(|d| (0.5 * d.value_at(t_end).abs() / t_end.sqrt()).exp())
        .sum::<f64>()
        / drivings.len() as f64;
    let var_at_horizon = drivings
        .iter()
        .map(|d| {
            let w = d.value_at(t_end) - d.values()[0];
            w * w
        })
        .sum::<f64>()
        / drivings.len() as f64;
    Ok(DrivingStats { tail_rows, fitted_decay, holder_table, exp_moment, var_at_horizon })
}
