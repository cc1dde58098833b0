//! Shared numerical machinery.

pub mod contour;
pub mod jet;
pub mod quad;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex double; components must be finite at operation boundaries.
pub type Complex128 = Complex64;

pub const TAU: f64 = std::f64::consts::TAU;
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

pub(crate) fn ensure_finite(z: Complex128, what: &str) -> Result<Complex128> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::InvalidInput(format!("{what} must be finite, got {z}")))
    }
}

/// e(x) = exp(2πi·x)
#[inline]
pub fn unit(x: f64) -> Complex128 {
    let (s, c) = (TAU * x).sin_cos();
    Complex128::new(c, s)
}

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum {
    re: KahanSum,
    im: KahanSum,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex128) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex128 {
        Complex128::new(self.re.value(), self.im.value())
    }
}

impl FromIterator<Complex128> for ComplexSum {
    fn from_iter<I: IntoIterator<Item = Complex128>>(iter: I) -> Self {
        let mut s = ComplexSum::new();
        for z in iter {
            s.add(z);
        }
        s
    }
}

/// B_{2k}/(2k)! for k = 1..=15 (through B₃₀).
pub(crate) const BERNOULLI_OVER_FACTORIAL: [f64; 15] = {
    // (numerator, denominator) of B_{2k}
    const B: [(f64, f64); 15] = [
        (1.0, 6.0),
        (-1.0, 30.0),
        (1.0, 42.0),
        (-1.0, 30.0),
        (5.0, 66.0),
        (-691.0, 2730.0),
        (7.0, 6.0),
        (-3617.0, 510.0),
        (43867.0, 798.0),
        (-174611.0, 330.0),
        (854513.0, 138.0),
        (-236364091.0, 2730.0),
        (8553103.0, 6.0),
        (-23749461029.0, 870.0),
        (8615841276005.0, 14322.0),
    ];
    let mut out = [0.0; 15];
    let mut fact = 1.0;
    let mut k = 0;
    while k < 15 {
        let n = 2.0 * (k as f64 + 1.0);
        fact *= (n - 1.0) * n;
        out[k] = B[k].0 / B[k].1 / fact;
        k += 1;
    }
    out
};

/// Exponential integral E₁(w) for Re w > 0 and |w| ≳ 1, by the
/// continued fraction e^{−w}/(w+1−1/(w+3−4/(w+5−…))) (modified Lentz).
pub(crate) fn exp_integral_e1(w: Complex128) -> Complex128 {
    let tiny = Complex128::new(1e-300, 0.0);
    let mut b = w + 1.0;
    let mut c = Complex128::new(1e300, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 1..500 {
        let a = -((i * i) as f64);
        b += 2.0;
        d = a * d + b;
        if d.norm() < 1e-300 {
            d = tiny;
        }
        c = b + a / c;
        if c.norm() < 1e-300 {
            c = tiny;
        }
        d = d.inv();
        let delta = c * d;
        h *= delta;
        if (delta - 1.0).norm() < 1e-16 {
            break;
        }
    }
    h * (-w).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kahan_recovers_small_terms() {
        let mut s = KahanSum::new();
        s.add(1e16);
        for _ in 0..1000 {
            s.add(1.0);
        }
        s.add(-1e16);
        assert_eq!(s.value(), 1000.0);
    }

    #[test]
    fn bernoulli_table_first_entries() {
        assert!((BERNOULLI_OVER_FACTORIAL[0] - 1.0 / 12.0).abs() < 1e-17);
        assert!((BERNOULLI_OVER_FACTORIAL[1] + 1.0 / 720.0).abs() < 1e-18);
        assert!((BERNOULLI_OVER_FACTORIAL[2] - 1.0 / 30240.0).abs() < 1e-19);
    }

    #[test]
    fn e1_real_reference() {
        // E1(1) = 0.21938393439552027368, E1(5) = 0.0011482955912753257
        let e1 = exp_integral_e1(Complex128::new(1.0, 0.0));
        assert!((e1.re - 0.219_383_934_395_520_27).abs() < 1e-14, "{e1}");
        let e5 = exp_integral_e1(Complex128::new(5.0, 0.0));
        assert!((e5.re - 0.001_148_295_591_275_325_7).abs() < 1e-16, "{e5}");
    }

    #[test]
    fn e1_complex_matches_quadrature() {
        // E1(w) = ∫_1^∞ e^{-wt}/t dt, checked by composite Simpson on [1, 60]
        let w = Complex128::new(3.0, 2.0);
        let n = 200_000;
        let h = 59.0 / n as f64;
        let f = |t: f64| (-w * t).exp() / t;
        let mut s = f(1.0) + f(60.0);
        for i in 1..n {
            let t = 1.0 + i as f64 * h;
            s += f(t) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        let simpson = s * h / 3.0;
        assert!((simpson - exp_integral_e1(w)).norm() < 1e-12);
    }
}
