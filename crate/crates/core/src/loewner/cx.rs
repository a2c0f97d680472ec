//! Minimal complex arithmetic for the conformal-map kernels.
//!
//! Hand-rolled so the hot loops (slit-map composition is O(n^2) per curve)
//! stay transparent to the optimizer.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cx {
    pub re: f64,
    pub im: f64,
}

pub const I: Cx = Cx { re: 0.0, im: 1.0 };

impl Cx {
    #[inline]
    pub fn new(re: f64, im: f64) -> Self {
        Cx { re, im }
    }

    #[inline]
    pub fn real(re: f64) -> Self {
        Cx { re, im: 0.0 }
    }

    #[inline]
    pub fn abs2(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    #[inline]
    pub fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }

    #[inline]
    pub fn arg(self) -> f64 {
        self.im.atan2(self.re)
    }

    #[inline]
    pub fn conj(self) -> Self {
        Cx::new(self.re, -self.im)
    }

    #[inline]
    pub fn scale(self, s: f64) -> Self {
        Cx::new(self.re * s, self.im * s)
    }

    /// Principal square root (branch cut on the negative real axis).
    #[inline]
    pub fn sqrt(self) -> Self {
        let r = self.abs();
        if r == 0.0 {
            return Cx::new(0.0, 0.0);
        }
        let re = ((r + self.re) * 0.5).max(0.0).sqrt();
        let im_mag = ((r - self.re) * 0.5).max(0.0).sqrt();
        Cx::new(re, if self.im < 0.0 { -im_mag } else { im_mag })
    }

    /// z^a for real exponent, principal branch.
    #[inline]
    pub fn powf(self, a: f64) -> Self {
        let l = 0.5 * self.abs2().ln();
        let th = self.arg();
        let m = (a * l).exp();
        let (s, c) = (a * th).sin_cos();
        Cx::new(m * c, m * s)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl Add for Cx {
    type Output = Cx;
    #[inline]
    fn add(self, o: Cx) -> Cx {
        Cx::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for Cx {
    type Output = Cx;
    #[inline]
    fn sub(self, o: Cx) -> Cx {
        Cx::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for Cx {
    type Output = Cx;
    #[inline]
    fn mul(self, o: Cx) -> Cx {
        Cx::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
}

impl Div for Cx {
    type Output = Cx;
    #[inline]
    fn div(self, o: Cx) -> Cx {
        let d = o.abs2();
        Cx::new(
            (self.re * o.re + self.im * o.im) / d,
            (self.im * o.re - self.re * o.im) / d,
        )
    }
}

impl Neg for Cx {
    type Output = Cx;
    #[inline]
    fn neg(self) -> Cx {
        Cx::new(-self.re, -self.im)
    }
}

impl Add<f64> for Cx {
    type Output = Cx;
    #[inline]
    fn add(self, o: f64) -> Cx {
        Cx::new(self.re + o, self.im)
    }
}

impl Sub<f64> for Cx {
    type Output = Cx;
    #[inline]
    fn sub(self, o: f64) -> Cx {
        Cx::new(self.re - o, self.im)
    }
}
