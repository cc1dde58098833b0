//! Truncated Taylor series `Σ c_m ε^m` with complex coefficients, used to
//! differentiate closed-form expressions exactly to a fixed order.

use std::ops::{Add, Mul, Neg, Sub};

use super::Complex128;

#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub coeffs: Vec<Complex128>,
}

impl Jet {
    pub fn constant(c: Complex128, order: usize) -> Self {
        let mut coeffs = vec![Complex128::new(0.0, 0.0); order + 1];
        coeffs[0] = c;
        Jet { coeffs }
    }

    /// `c + ε`
    pub fn variable(c: Complex128, order: usize) -> Self {
        let mut j = Self::constant(c, order);
        if order >= 1 {
            j.coeffs[1] = Complex128::new(1.0, 0.0);
        }
        j
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `b^{-(c+ε)}` for real `b > 0`: coefficients `b^{-c}·(−ln b)^m/m!`.
    pub fn real_pow_neg(base: f64, exponent: Complex128, order: usize) -> Self {
        let lb = base.ln();
        let lead = (-exponent * lb).exp();
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut term = lead;
        for m in 0..=order {
            coeffs.push(term);
            term = term * (-lb) / (m as f64 + 1.0);
        }
        Jet { coeffs }
    }

    pub fn scale(&self, k: Complex128) -> Self {
        Jet {
            coeffs: self.coeffs.iter().map(|&c| c * k).collect(),
        }
    }

    pub fn recip(&self) -> Self {
        let n = self.coeffs.len();
        let a0 = self.coeffs[0];
        let mut out = vec![Complex128::new(0.0, 0.0); n];
        out[0] = a0.inv();
        for m in 1..n {
            let mut s = Complex128::new(0.0, 0.0);
            for j in 1..=m {
                s += self.coeffs[j] * out[m - j];
            }
            out[m] = -s / a0;
        }
        Jet { coeffs: out }
    }

    pub fn div(&self, other: &Jet) -> Self {
        self * &other.recip()
    }

    /// m-th derivative at the expansion point: `m!·c_m`.
    pub fn derivative(&self, m: usize) -> Complex128 {
        let fact: f64 = (1..=m).map(|k| k as f64).product();
        self.coeffs[m] * fact
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        Jet {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        Jet {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        let n = self.coeffs.len().min(rhs.coeffs.len());
        let mut out = vec![Complex128::new(0.0, 0.0); n];
        for (i, &a) in self.coeffs.iter().enumerate().take(n) {
            for (j, &b) in rhs.coeffs.iter().enumerate().take(n - i) {
                out[i + j] += a * b;
            }
        }
        Jet { coeffs: out }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex128 {
        Complex128::new(x, 0.0)
    }

    #[test]
    fn reciprocal_of_one_minus_eps_is_geometric() {
        let j = &Jet::constant(c(1.0), 5) - &Jet::variable(c(0.0), 5);
        let r = j.recip();
        for m in 0..=5 {
            assert!((r.coeffs[m] - c(1.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn power_derivatives() {
        // d/ds 2^{-s} at s=3 = -ln2 / 8 ; second derivative ln²2 / 8
        let j = Jet::real_pow_neg(2.0, c(3.0), 3);
        let l = 2f64.ln();
        assert!((j.derivative(1) - c(-l / 8.0)).norm() < 1e-15);
        assert!((j.derivative(2) - c(l * l / 8.0)).norm() < 1e-15);
    }
}
