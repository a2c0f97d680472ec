//! The Loewner equation in the half-plane: trace generation from a driving
//! function, driving extraction from a curve (the zipper), half-plane
//! capacity, and the geodesic-to-tip field.
//!
//! Conventions, used everywhere without exception:
//! * hydrodynamic normalization g_t(z) = z + a1(t)/z + O(1/z^2);
//! * capacity time a1(t) = 2t, so a vertical slit of height h carries
//!   capacity h^2/2 and capacity time h^2/4;
//! * driving value W(t) = g_t(tip).

pub mod cx;
mod hcap;
mod slit;
mod trace;
mod zipper;

pub use hcap::{hcap_curve, hcap_hull, hcap_rect_oracle, rect_width_convention};
pub use slit::Slit;
pub use trace::{geodesic_to_tip, solve_trace, solve_trace_native};
pub use zipper::extract_driving;

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// A driving function sampled on a strictly increasing capacity-time grid,
/// interpolated piecewise linearly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DrivingFunction {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl DrivingFunction {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() || times.len() < 2 {
            return Err(Error::invalid("driving needs >= 2 aligned samples"));
        }
        if times[0] != 0.0 {
            return Err(Error::invalid("driving time grid must start at 0"));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid("driving time grid must be strictly increasing"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("driving values must be finite"));
        }
        Ok(DrivingFunction { times, values })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn duration(&self) -> f64 {
        *self.times.last().unwrap()
    }

    pub fn w0(&self) -> f64 {
        self.values[0]
    }

    /// Piecewise-linear evaluation; clamps outside the grid.
    pub fn value_at(&self, t: f64) -> f64 {
        if t <= self.times[0] {
            return self.values[0];
        }
        if t >= self.duration() {
            return *self.values.last().unwrap();
        }
        let i = match self.times.binary_search_by(|x| x.total_cmp(&t)) {
            Ok(i) => return self.values[i],
            Err(i) => i,
        };
        let (t0, t1) = (self.times[i - 1], self.times[i]);
        let u = (t - t0) / (t1 - t0);
        self.values[i - 1] * (1.0 - u) + self.values[i] * u
    }

    /// Brownian scaling: curve scaled by s has driving s*W(t/s^2).
    pub fn scaled(&self, s: f64) -> DrivingFunction {
        DrivingFunction {
            times: self.times.iter().map(|t| t * s * s).collect(),
            values: self.values.iter().map(|w| w * s).collect(),
        }
    }

    /// Evaluate on the exact uniform grid j*dt, j = 0..=n (piecewise
    /// linear); the driving must extend to n*dt. Ensembles use this to
    /// land on a strictly common grid.
    pub fn sampled_on(&self, dt: f64, n: usize) -> Result<DrivingFunction> {
        if dt <= 0.0 || n == 0 {
            return Err(Error::invalid("need dt > 0 and n >= 1"));
        }
        let horizon = dt * n as f64;
        if self.duration() < horizon - 1e-9 * horizon {
            return Err(Error::invalid(format!(
                "driving ends at {} before the requested horizon {horizon}",
                self.duration()
            )));
        }
        let times: Vec<f64> = (0..=n).map(|j| j as f64 * dt).collect();
        let values = times.iter().map(|&t| self.value_at(t)).collect();
        DrivingFunction::new(times, values)
    }

    /// Resample onto a uniform grid of step `dt` (piecewise linear).
    pub fn resample(&self, dt: f64) -> Result<DrivingFunction> {
        if dt <= 0.0 {
            return Err(Error::invalid("dt must be positive"));
        }
        let t_end = self.duration();
        let n = (t_end / dt).floor() as usize;
        let mut times = Vec::with_capacity(n + 2);
        let mut values = Vec::with_capacity(n + 2);
        for j in 0..=n {
            let t = j as f64 * dt;
            times.push(t);
            values.push(self.value_at(t));
        }
        if t_end - times.last().unwrap() > 1e-12 * t_end.max(1.0) {
            times.push(t_end);
            values.push(self.value_at(t_end));
        }
        DrivingFunction::new(times, values)
    }
}

/// Half-plane capacity estimate with provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityReport {
    pub hcap: f64,
    /// "zipper" or "harmonic-oracle".
    pub method: String,
    /// Estimated absolute error (resolution halving / box doubling).
    pub est_error: f64,
}

/// F(t, y) = g_t^{-1}(W(t) + i y) on a rectangular (t, y) grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeodesicField {
    pub ts: Vec<f64>,
    pub ys: Vec<f64>,
    /// values[i][j] = F(ts[i], ys[j]) as (x, y).
    pub values: Vec<Vec<(f64, f64)>>,
}
