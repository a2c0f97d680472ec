//! Driving extraction: the discrete zipper.
//!
//! Peels the curve off the half-plane one data point at a time. At each step
//! the image of the next point under the maps composed so far is welded to
//! the real line by a tilted slit rooted at the current driving value; the
//! slit's closed-form capacity and endpoint displacement build the capacity
//! time grid and the driving samples.

use super::cx::Cx;
use super::slit::Slit;
use super::DrivingFunction;
use crate::error::{Error, Result};
use crate::geometry::Curve;

/// How far (relative to the curve scale) the first point may sit from the
/// real axis and still count as "on" it.
const AXIS_TOL: f64 = 1e-9;

/// Extract the Loewner driving function of a simple curve in the closed
/// upper half-plane that starts on the real axis.
///
/// `tol` bounds the accepted relative residual of each elementary
/// inverse (floored at the internal Newton target, so tightening it
/// beyond 1e-13 has no effect).
pub fn extract_driving(c: &Curve, tol: f64) -> Result<DrivingFunction> {
    let pts = c.points();
    let scale = pts
        .iter()
        .fold(0f64, |m, p| m.max(p.x.abs()).max(p.y.abs()))
        .max(1e-30);
    let first = pts[0];
    if first.y.abs() > AXIS_TOL * scale.max(1.0) {
        return Err(Error::invalid(format!(
            "curve must start on the real axis (y0 = {})",
            first.y
        )));
    }
    for (i, p) in pts.iter().enumerate().skip(1) {
        if !(p.y > 0.0) {
            return Err(Error::invalid(format!(
                "curve dips onto or below the real axis at index {i}"
            )));
        }
    }
    let accept = tol.max(1e-13);

    let mut w = first.x;
    let mut t = 0.0f64;
    let mut times = Vec::with_capacity(pts.len());
    let mut values = Vec::with_capacity(pts.len());
    times.push(0.0);
    values.push(w);

    let mut imgs: Vec<Cx> = pts[1..].iter().map(|p| Cx::new(p.x, p.y)).collect();
    let n = imgs.len();
    for k in 0..n {
        let tip = imgs[k];
        if !(tip.im > 0.0) || !tip.is_finite() {
            return Err(Error::ResolutionAt {
                index: k + 1,
                reason: format!("tip image left the half-plane: {tip:?}"),
            });
        }
        let slit = Slit::through_point(w, tip);
        t += slit.dt();
        w += slit.dw;
        times.push(t);
        values.push(w);
        for (off, img) in imgs[k + 1..].iter_mut().enumerate() {
            let z = slit.unweld_tol(*img, accept).ok_or(Error::ResolutionAt {
                index: k + 2 + off,
                reason: "elementary inverse did not converge".into(),
            })?;
            if !z.is_finite() {
                return Err(Error::ResolutionAt {
                    index: k + 2 + off,
                    reason: "point image left numeric range".into(),
                });
            }
            *img = z;
        }
    }
    DrivingFunction::new(times, values)
}
