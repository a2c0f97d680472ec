//! Trace generation and the geodesic-to-tip field.
//!
//! Both evaluate g_t^{-1} by composing elementary slit maps backward from
//! the current time to zero, which never integrates through the ODE
//! singularity at the tip.

use super::cx::Cx;
use super::slit::Slit;
use super::{DrivingFunction, GeodesicField};
use crate::error::{Error, Result};
use crate::geometry::{Curve, CurveMeta, Point};

/// Minimal usable tip offset.
const EPS_FLOOR: f64 = 1e-12;

fn step_slits(w: &DrivingFunction, dt: f64) -> Result<(Vec<f64>, Vec<Slit>)> {
    let grid = w.resample(dt)?;
    let times = grid.times().to_vec();
    let vals = grid.values();
    let mut slits = Vec::with_capacity(times.len() - 1);
    for j in 1..times.len() {
        let step_dt = times[j] - times[j - 1];
        slits.push(Slit::from_driving_step(
            vals[j - 1],
            vals[j] - vals[j - 1],
            step_dt,
        ));
    }
    Ok((times, slits))
}

/// Evaluate f_{t_k}(x_k + i y) for one k by backward composition.
#[inline]
fn backward(slits: &[Slit], k: usize, z0: Cx) -> Cx {
    let mut z = z0;
    for slit in slits[..k].iter().rev() {
        z = slit.weld(z);
    }
    z
}

/// Generate the trace of a driving function on the grid t = 0, dt, 2dt, ...
///
/// Each point is gamma(t_k) ~ f_{t_k}(W(t_k) + i*eps); the approach offset
/// `eps` trades tip smoothing against bias (the default used by callers is
/// sqrt(dt)).
pub fn solve_trace(w: &DrivingFunction, dt: f64, eps: f64) -> Result<Curve> {
    if dt <= 0.0 {
        return Err(Error::invalid("dt must be positive"));
    }
    solve_trace_native(&w.resample(dt)?, eps)
}

/// Generate the trace on the driving function's own grid (no resampling).
///
/// For a driving extracted by the zipper this composes exactly the slit
/// chain the extraction peeled off, so the round trip reproduces the
/// original points up to the eps offset.
pub fn solve_trace_native(w: &DrivingFunction, eps: f64) -> Result<Curve> {
    if eps < EPS_FLOOR {
        return Err(Error::Resolution(format!(
            "tip offset eps = {eps} below usable floor {EPS_FLOOR}"
        )));
    }
    let times = w.times();
    let vals = w.values();
    let mut slits = Vec::with_capacity(times.len() - 1);
    for j in 1..times.len() {
        slits.push(Slit::from_driving_step(
            vals[j - 1],
            vals[j] - vals[j - 1],
            times[j] - times[j - 1],
        ));
    }
    let mut pts = Vec::with_capacity(times.len());
    pts.push(Point::new(w.w0(), 0.0));
    for k in 1..times.len() {
        let z = backward(&slits, k, Cx::new(vals[k], eps));
        if !z.is_finite() {
            return Err(Error::Resolution(format!(
                "trace point at t = {} left numeric range",
                times[k]
            )));
        }
        pts.push(Point::new(z.re, z.im));
    }
    pts.dedup_by(|a, b| a == b);
    Curve::new(
        pts,
        CurveMeta { model: "trace".into(), seed: 0, spacing: 0.0, simple: true },
    )
}

/// Evaluate the hyperbolic geodesic to the tip, F(t, y) = g_t^{-1}(W(t)+iy),
/// on a uniform (t, y) grid with `grid` cells per axis.
pub fn geodesic_to_tip(
    w: &DrivingFunction,
    t_max: f64,
    y_max: f64,
    grid: usize,
) -> Result<GeodesicField> {
    if !(t_max > 0.0) || t_max > w.duration() + 1e-12 {
        return Err(Error::invalid("t_max must lie within the driving domain"));
    }
    if !(y_max > 0.0) {
        return Err(Error::invalid("y_max must be positive"));
    }
    if grid < 1 {
        return Err(Error::invalid("grid must have at least one cell"));
    }
    let dt = t_max / grid as f64;
    let (times, slits) = step_slits(&clip(w, t_max)?, dt)?;
    let ys: Vec<f64> = (0..=grid)
        .map(|j| (j as f64 / grid as f64 * y_max).max(EPS_FLOOR))
        .collect();
    let mut values = Vec::with_capacity(times.len());
    let mut ts = Vec::with_capacity(times.len());
    for k in 0..times.len() {
        let wk = w.value_at(times[k]);
        let row: Vec<(f64, f64)> = ys
            .iter()
            .map(|&y| {
                let z = backward(&slits, k, Cx::new(wk, y));
                (z.re, z.im)
            })
            .collect();
        values.push(row);
        ts.push(times[k]);
    }
    Ok(GeodesicField { ts, ys, values })
}

fn clip(w: &DrivingFunction, t_max: f64) -> Result<DrivingFunction> {
    let mut times = Vec::new();
    let mut values = Vec::new();
    for (&t, &v) in w.times().iter().zip(w.values()) {
        if t < t_max {
            times.push(t);
            values.push(v);
        }
    }
    times.push(t_max);
    values.push(w.value_at(t_max));
    DrivingFunction::new(times, values)
}
