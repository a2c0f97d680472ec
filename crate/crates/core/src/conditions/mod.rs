//! Empirical machinery for the crossing conditions: unforced-crossing
//! detection, the G2 test harness, constant conversion between the
//! equivalent condition forms, discrete quadrilateral modulus, six-arm
//! events, and multiple-crossing statistics.

mod g2;
mod modulus;
mod routes;
mod sixarm;

pub use g2::{test_condition_g2, verdict_of, G2Config, G2Report, TauRule, Verdict};
pub use modulus::{modulus_quad, TopQuad};
pub use routes::{
    avoidable_components, avoidable_components_in, medial_route_graph, peano_route_graph,
    square_route_graph, tri_route_graph, AvoidableSet, RouteGraph,
};
pub use sixarm::{count_multiple_crossings, detect_six_arm, MultiCrossingReport, SixArmWitness};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// One report cell: empirical crossing statistics for a (shape, stopping
/// rule) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub model: String,
    /// "annulus" or "quad".
    pub shape: String,
    pub z0x: f64,
    pub z0y: f64,
    pub r: f64,
    pub big_r: f64,
    /// "time-zero" or "hit-r".
    pub tau_rule: String,
    pub trials: u64,
    pub hits: u64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

impl ReportRow {
    pub fn refresh_ci(&mut self) {
        let (lo, hi) = wilson_interval(self.hits, self.trials);
        self.ci_lo = lo;
        self.ci_hi = hi;
    }
}

/// Wilson score interval at 95%; (0,1) for zero trials.
pub fn wilson_interval(hits: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959963984540054f64;
    let n = trials as f64;
    let p = hits as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * ((p * (1.0 - p) + z2 / (4.0 * n)) / n).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Rule-of-three upper bound for zero-hit cells.
pub fn rule_of_three(trials: u64) -> f64 {
    3.0 / trials.max(1) as f64
}

/// Fitted power law p ~ K (r/R)^Delta.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub k: f64,
    pub delta: f64,
    /// Root-mean-square residual of log p.
    pub residual: f64,
    /// 95% half-width of the delta estimate from the regression.
    pub delta_ci: f64,
}

/// Least squares of log p-hat against log(r/R).
///
/// Zero-hit cells are clipped to the rule-of-three bound 3/n; if every
/// cell is zero the fit returns Delta = +inf as a sentinel with K from the
/// rule of three.
pub fn fit_power_law(rows: &[(f64, u64, u64)]) -> Result<PowerLawFit> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut distinct: Vec<f64> = Vec::new();
    let mut all_zero = true;
    for &(ratio, hits, trials) in rows {
        if trials == 0 {
            continue;
        }
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::invalid("ratios must lie in (0,1)"));
        }
        if !distinct.iter().any(|&r| (r - ratio).abs() < 1e-12) {
            distinct.push(ratio);
        }
        let p = if hits == 0 {
            rule_of_three(trials)
        } else {
            all_zero = false;
            hits as f64 / trials as f64
        };
        xs.push(ratio.ln());
        ys.push(p.ln());
    }
    if distinct.len() < 3 {
        return Err(Error::invalid("need >= 3 distinct ratios with trials"));
    }
    if all_zero {
        let k = rows
            .iter()
            .filter(|&&(_, _, n)| n > 0)
            .map(|&(_, _, n)| rule_of_three(n))
            .fold(0.0f64, f64::max);
        return Ok(PowerLawFit { k, delta: f64::INFINITY, residual: 0.0, delta_ci: f64::INFINITY });
    }
    let n = xs.len() as f64;
    let xbar = xs.iter().sum::<f64>() / n;
    let ybar = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - xbar) * (x - xbar)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xbar) * (y - ybar)).sum();
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let mut ss = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        let r = y - (intercept + slope * x);
        ss += r * r;
    }
    let dof = (xs.len() as i64 - 2).max(1) as f64;
    let se = (ss / dof / sxx).sqrt();
    Ok(PowerLawFit {
        k: intercept.exp(),
        delta: slope,
        residual: (ss / n).sqrt(),
        delta_ci: 1.96 * se,
    })
}

/// Conversion directions between the equivalent conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Conversion {
    /// Annulus constant C to the power-law pair: K = 2, Delta = log2/logC.
    G2ToG3,
    /// Annulus constant C to the quadrilateral threshold M = 4 (C+1)^2.
    G2ToC2,
    /// Exponential quad constants (K, eps) to C = (2 K e^2)^(2 pi / eps).
    C3ToG2,
    /// Power-law pair back to an annulus constant: C = (2K)^(1/Delta).
    G3ToG2,
}

/// Explicit constants of the condition equivalences.
pub fn convert_constants(direction: Conversion, inputs: &[f64]) -> Result<Vec<f64>> {
    match direction {
        Conversion::G2ToG3 => {
            let [c] = take::<1>(inputs)?;
            if c <= 1.0 {
                return Err(Error::invalid("C must exceed 1"));
            }
            Ok(vec![2.0, 2f64.ln() / c.ln()])
        }
        Conversion::G2ToC2 => {
            let [c] = take::<1>(inputs)?;
            if c <= 1.0 {
                return Err(Error::invalid("C must exceed 1"));
            }
            Ok(vec![4.0 * (c + 1.0) * (c + 1.0)])
        }
        Conversion::C3ToG2 => {
            let [k, eps] = take::<2>(inputs)?;
            if k <= 0.0 || eps <= 0.0 {
                return Err(Error::invalid("K and eps must be positive"));
            }
            Ok(vec![(2.0 * k * std::f64::consts::E.powi(2)).powf(2.0 * std::f64::consts::PI / eps)])
        }
        Conversion::G3ToG2 => {
            let [k, delta] = take::<2>(inputs)?;
            if k <= 0.0 || delta <= 0.0 {
                return Err(Error::invalid("K and Delta must be positive"));
            }
            Ok(vec![(2.0 * k).powf(1.0 / delta)])
        }
    }
}

fn take<const N: usize>(inputs: &[f64]) -> Result<[f64; N]> {
    inputs
        .try_into()
        .map_err(|_| Error::invalid(format!("expected {N} inputs, got {}", inputs.len())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_conversions_exact() {
        // C = 2 -> (K, Delta) = (2, 1)
        let out = convert_constants(Conversion::G2ToG3, &[2.0]).unwrap();
        assert_eq!(out[0], 2.0);
        assert!((out[1] - 1.0).abs() < 1e-15);
        // C = 2 -> M = 36
        let out = convert_constants(Conversion::G2ToC2, &[2.0]).unwrap();
        assert_eq!(out[0], 36.0);
        // K = 2, eps = 2 pi -> C = 4 e^2
        let out = convert_constants(Conversion::C3ToG2, &[2.0, 2.0 * std::f64::consts::PI]).unwrap();
        let exact = 4.0 * std::f64::consts::E.powi(2);
        assert!((out[0] - exact).abs() < 1e-12 * exact, "{} vs {exact}", out[0]);
    }

    #[test]
    fn conversions_compose_sanely() {
        // G2 -> G3 -> G2 returns a C' no smaller than needed: with K = 2,
        // Delta = log2/logC, C' = (2K)^(1/Delta) = 4^(logC/log2)... >= C
        for &c in &[1.5, 2.0, 8.0] {
            let g3 = convert_constants(Conversion::G2ToG3, &[c]).unwrap();
            let back = convert_constants(Conversion::G3ToG2, &g3).unwrap();
            assert!(back[0] >= c - 1e-12, "C'={} < C={c}", back[0]);
            // exact value: (2*2)^(logC/log2) = C^2
            assert!((back[0] - c * c).abs() < 1e-9 * c * c);
        }
    }

    #[test]
    fn invalid_constants_rejected() {
        assert!(convert_constants(Conversion::G2ToG3, &[1.0]).is_err());
        assert!(convert_constants(Conversion::C3ToG2, &[0.0, 1.0]).is_err());
    }

    #[test]
    fn power_law_fit_exact_cases() {
        // p = (r/R)^1 exactly
        let rows: Vec<(f64, u64, u64)> = [0.25, 0.125, 0.0625]
            .iter()
            .map(|&ratio| {
                let n = 1u64 << 40;
                (ratio, (ratio * n as f64) as u64, n)
            })
            .collect();
        let fit = fit_power_law(&rows).unwrap();
        assert!((fit.k - 1.0).abs() < 1e-9, "K {}", fit.k);
        assert!((fit.delta - 1.0).abs() < 1e-9, "Delta {}", fit.delta);

        // p = 2 (r/R)^0.5
        let rows: Vec<(f64, u64, u64)> = [0.25, 0.0625, 0.015625]
            .iter()
            .map(|&ratio: &f64| {
                let n = 1u64 << 40;
                (ratio, (2.0 * ratio.sqrt() * n as f64) as u64, n)
            })
            .collect();
        let fit = fit_power_law(&rows).unwrap();
        assert!((fit.k - 2.0).abs() < 1e-6, "K {}", fit.k);
        assert!((fit.delta - 0.5).abs() < 1e-9, "Delta {}", fit.delta);
    }

    #[test]
    fn power_law_all_zero_sentinel() {
        let rows = vec![(0.25, 0, 100), (0.125, 0, 100), (0.0625, 0, 100)];
        let fit = fit_power_law(&rows).unwrap();
        assert!(fit.delta.is_infinite());
        assert!((fit.k - 0.03).abs() < 1e-12);
    }

    #[test]
    fn power_law_fit_matches_grid_search_oracle() {
        // noisy synthetic rows; brute-force grid search over (K, Delta)
        // minimizing the same log-space least squares must agree
        let rows: Vec<(f64, u64, u64)> = vec![
            (0.25, 230, 2000),
            (0.125, 103, 2000),
            (0.0625, 48, 2000),
            (0.03125, 21, 2000),
        ];
        let fit = fit_power_law(&rows).unwrap();
        let mut best = (f64::INFINITY, 0.0, 0.0);
        let mut k = 0.2f64;
        while k < 5.0 {
            let mut d = 0.05f64;
            while d < 3.0 {
                let ss: f64 = rows
                    .iter()
                    .map(|&(ratio, h, n)| {
                        let p = h as f64 / n as f64;
                        let model = k.ln() + d * ratio.ln();
                        (p.ln() - model).powi(2)
                    })
                    .sum();
                if ss < best.0 {
                    best = (ss, k, d);
                }
                d += 0.002;
            }
            k *= 1.002;
        }
        assert!((fit.k - best.1).abs() < 0.02 * best.1, "K {} vs {}", fit.k, best.1);
        assert!((fit.delta - best.2).abs() < 0.01, "Delta {} vs {}", fit.delta, best.2);
    }

    #[test]
    fn wilson_interval_sane() {
        let (lo, hi) = wilson_interval(0, 50);
        assert!(lo.abs() < 1e-12);
        assert!(hi < 0.1 && hi > 0.0);
        let (lo, hi) = wilson_interval(25, 50);
        assert!(lo < 0.5 && hi > 0.5);
    }
}
