//! Two-parameter tilted-slit elementary maps.
//!
//! The building block of the zipper. With p = alpha*s, q = (1-alpha)*s the
//! map
//!
//! ```text
//!     f(z) = (z + p)^(1-alpha) * (z - q)^alpha
//! ```
//!
//! takes the upper half-plane onto the half-plane minus a straight segment
//! from 0 at angle alpha*pi, and is hydrodynamically normalized
//! (f(z) = z - a1/z + ... at infinity). Closed-form facts used throughout:
//!
//! * half-plane capacity of the slit: a1 = alpha*(1-alpha)*s^2 / 2,
//!   so the capacity-time increment is a1/2 = alpha*(1-alpha)*s^2 / 4;
//! * tip of the slit: s * (1-alpha)^(1-alpha) * alpha^alpha * exp(i*pi*alpha),
//!   whose preimage is the real point x* = (1-2*alpha)*s;
//! * vertical special case alpha = 1/2: f(z) = sqrt(z^2 - h^2) with
//!   h = s/2, invertible in closed form.
//!
//! The inverse direction (welding a data point back to the real line) has no
//! closed form for general alpha; it is computed by damped Newton iteration
//! with asymptotic / tip-local seeds and an upward-continuation fallback.

use super::cx::Cx;

/// Relative tolerance for the Newton inverse.
const INV_TOL: f64 = 1e-13;
/// Treat |1 - 2*alpha| below this as the exactly-vertical case.
const VERTICAL_EPS: f64 = 1e-12;

/// One elementary tilted slit rooted at a real base point.
#[derive(Debug, Clone, Copy)]
pub struct Slit {
    /// Real point where the slit meets the line (driving value at the start
    /// of the step).
    pub base: f64,
    pub alpha: f64,
    pub s: f64,
    p: f64,
    q: f64,
    /// Half-plane capacity of the slit.
    pub hcap: f64,
    /// Driving displacement over the step: (1-2*alpha)*s.
    pub dw: f64,
    /// Slit tip relative to the base.
    tip: Cx,
}

impl Slit {
    fn assemble(base: f64, alpha: f64, s: f64) -> Slit {
        let p = alpha * s;
        let q = (1.0 - alpha) * s;
        let hcap = 0.5 * alpha * (1.0 - alpha) * s * s;
        let dw = (1.0 - 2.0 * alpha) * s;
        let mag = s * (1.0 - alpha).powf(1.0 - alpha) * alpha.powf(alpha);
        let (si, co) = (std::f64::consts::PI * alpha).sin_cos();
        Slit { base, alpha, s, p, q, hcap, dw, tip: Cx::new(mag * co, mag * si) }
    }

    /// Slit that welds the step of a driving function: displacement `dw` in
    /// capacity time `dt` (convention a1(t) = 2t) starting at `base`.
    pub fn from_driving_step(base: f64, dw: f64, dt: f64) -> Slit {
        debug_assert!(dt > 0.0);
        let s = (dw * dw + 16.0 * dt).sqrt();
        let beta = dw / s;
        let alpha = 0.5 * (1.0 - beta);
        Slit::assemble(base, alpha, s)
    }

    /// Slit rooted at `base` whose tip is the point `w` (absolute
    /// coordinates, Im w > 0). Used by the zipper on extraction.
    pub fn through_point(base: f64, w: Cx) -> Slit {
        let rel = w - base;
        let alpha = rel.arg() / std::f64::consts::PI;
        let alpha = alpha.clamp(1e-12, 1.0 - 1e-12);
        let mag = rel.abs();
        let s = mag / ((1.0 - alpha).powf(1.0 - alpha) * alpha.powf(alpha));
        Slit::assemble(base, alpha, s)
    }

    /// Capacity-time increment of the step (a1 = 2t convention).
    #[inline]
    pub fn dt(&self) -> f64 {
        0.5 * self.hcap
    }

    /// Tip of the slit in absolute coordinates.
    #[inline]
    pub fn tip_abs(&self) -> Cx {
        self.tip + self.base
    }

    /// Forward map H -> H minus slit, in absolute coordinates.
    ///
    /// f is evaluated as (z+p) * ((z-q)/(z+p))^alpha which needs one complex
    /// power instead of two; the principal branch is correct on the closed
    /// half-plane.
    #[inline]
    pub fn weld(&self, z: Cx) -> Cx {
        let zr = z - self.base;
        let u = zr + self.p;
        let v = zr - self.q;
        if u.abs2() == 0.0 || v.abs2() == 0.0 {
            return Cx::real(self.base);
        }
        let r = (v / u).powf(self.alpha);
        u * r + self.base
    }

    /// Forward map and derivative together (derivative of the relative map).
    #[inline]
    fn weld_rel_with_deriv(&self, zr: Cx) -> (Cx, Cx) {
        let u = zr + self.p;
        let v = zr - self.q;
        let r = (v / u).powf(self.alpha);
        let f = u * r;
        // f' = R^alpha * (1 + alpha*(p+q)/(z-q))
        let d = r * (Cx::real(1.0) + Cx::real(self.alpha * self.s) / v);
        (f, d)
    }

    /// Inverse map (unzip): H minus slit -> H, absolute coordinates.
    ///
    /// Exact for the vertical special case; Newton otherwise.
    pub fn unweld(&self, w: Cx) -> Option<Cx> {
        self.unweld_tol(w, INV_TOL)
    }

    /// As `unweld`, accepting a caller-supplied relative residual bound
    /// (never looser than the internal target).
    pub fn unweld_tol(&self, w: Cx, tol: f64) -> Option<Cx> {
        let rel = w - self.base;
        if (1.0 - 2.0 * self.alpha).abs() < VERTICAL_EPS {
            // g(eta) = eta * sqrt(1 + (h/eta)^2), h = s/2; the form keeps the
            // branch correct on both sides of the slit.
            let h = 0.5 * self.s;
            let ratio = Cx::real(h) / rel;
            let g = rel * (Cx::real(1.0) + ratio * ratio).sqrt();
            return Some(g + self.base);
        }
        let zr = self.invert_rel(rel, tol.min(INV_TOL * 16.0).max(INV_TOL))?;
        Some(zr + self.base)
    }

    /// Newton inverse of the relative forward map.
    fn invert_rel(&self, eta: Cx, tol: f64) -> Option<Cx> {
        let scale = self.s.max(eta.abs());
        // Seed selection: tip-local square-root model near the slit tip,
        // two-term asymptotic elsewhere.
        let d_tip = (eta - self.tip).abs();
        let seed = if d_tip < 0.75 * self.s {
            let xstar = (1.0 - 2.0 * self.alpha) * self.s;
            // f''(x*) = -tip / (alpha*(1-alpha)*s^2)
            let fpp = -self.tip.scale(1.0 / (self.alpha * (1.0 - self.alpha) * self.s * self.s));
            let root = ((eta - self.tip) * Cx::real(2.0) / fpp).sqrt();
            let cand = root + xstar;
            if cand.im >= 0.0 {
                cand
            } else {
                -root + xstar
            }
        } else {
            let a1 = 2.0 * self.hcap * 0.5; // a1 = hcap
            eta + Cx::real(a1) / eta
        };
        if let Some(z) = self.newton(seed, eta, scale, tol) {
            return Some(z);
        }
        // Continuation from high above the slit, where the asymptotic seed
        // is reliable, walking down to the target.
        let lift = 4.0 * self.s;
        let mut sigma = lift;
        let mut z = {
            let e = eta + Cx::new(0.0, lift);
            e + Cx::real(self.hcap) / e
        };
        for _ in 0..24 {
            sigma *= 0.5;
            let target = eta + Cx::new(0.0, sigma);
            z = self.newton(z, target, scale, tol)?;
            if sigma < 1e-6 * scale {
                break;
            }
        }
        self.newton(z, eta, scale, tol)
    }

    fn newton(&self, mut z: Cx, eta: Cx, scale: f64, rel_tol: f64) -> Option<Cx> {
        let tol = rel_tol * scale.max(1.0);
        let mut err = f64::INFINITY;
        for _ in 0..40 {
            let (f, df) = self.weld_rel_with_deriv(z);
            let resid = f - eta;
            let e = resid.abs();
            if e < tol {
                return Some(if z.im < 0.0 { Cx::new(z.re, 0.0) } else { z });
            }
            if !e.is_finite() {
                return None;
            }
            let mut step = resid / df;
            // Damping: keep the iterate in the closed half-plane and insist
            // on residual decrease.
            let mut tries = 0;
            loop {
                let cand = z - step;
                let (fc, _) = self.weld_rel_with_deriv(cand);
                let ec = (fc - eta).abs();
                if (cand.im >= -1e-14 * scale && ec <= e) || tries >= 20 {
                    z = cand;
                    break;
                }
                step = step.scale(0.5);
                tries += 1;
            }
            if (err - e).abs() < 1e-18 * scale && e > tol {
                // stagnation
                return None;
            }
            err = e;
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vertical_slit_capacity_and_tip() {
        // dw = 0, dt = 0.25 => vertical slit of height 2*sqrt(dt) = 1
        let s = Slit::from_driving_step(0.0, 0.0, 0.25);
        assert!((s.alpha - 0.5).abs() < 1e-12);
        let tip = s.tip_abs();
        assert!(tip.re.abs() < 1e-12);
        assert!((tip.im - 1.0).abs() < 1e-12, "tip {tip:?}");
        assert!((s.hcap - 0.5).abs() < 1e-12);
    }

    #[test]
    fn weld_unweld_roundtrip_random_points() {
        use rand::Rng;
        let mut rng = crate::rng::job_rng(3, 1);
        for &(dw, dt) in &[(0.0, 0.1), (0.3, 0.05), (-0.8, 0.02), (2.0, 0.3), (0.001, 0.25)] {
            let slit = Slit::from_driving_step(0.7, dw, dt);
            for _ in 0..300 {
                let z = Cx::new(rng.gen_range(-4.0..4.0), rng.gen_range(1e-6..4.0));
                let w = slit.weld(z);
                assert!(w.im >= -1e-12, "weld left half-plane: {w:?}");
                let back = slit.unweld(w).expect("inverse failed");
                assert!(
                    (back - z).abs() < 1e-9 * (1.0 + z.abs()),
                    "roundtrip {z:?} -> {w:?} -> {back:?} (dw={dw}, dt={dt})"
                );
            }
        }
    }

    #[test]
    fn through_point_recovers_tip() {
        let w = Cx::new(0.4, 0.9);
        let slit = Slit::through_point(0.1, w);
        let tip = slit.tip_abs();
        assert!((tip - w).abs() < 1e-12, "tip {tip:?} vs {w:?}");
        // unweld maps the tip to the real point base + (1-2a)s = base + dw
        let pre = slit.unweld(w).unwrap();
        assert!(pre.im.abs() < 1e-6, "tip preimage {pre:?}");
        assert!((pre.re - (slit.base + slit.dw)).abs() < 1e-6);
    }

    #[test]
    fn capacity_matches_expansion() {
        // numerically estimate a1 from f(iy) = iy - a1/(iy) + O(1/y^2)
        let slit = Slit::from_driving_step(0.0, 0.7, 0.11);
        let y = 4000.0;
        let w = slit.weld(Cx::new(0.0, y));
        // Im w = y - a1/y * (-1)^2 ... : Im(z - a1/z) at z=iy is y + a1... wait
        // f(z) = z - a1/z: at z = iy: f = iy - a1/(iy) = iy + i*a1/y
        let a1_est = (w.im - y) * y;
        assert!(
            (a1_est - slit.hcap).abs() < 1e-3,
            "a1 {a1_est} vs {}",
            slit.hcap
        );
    }
}
