//! Euler–Maclaurin evaluation of ζ(s) and ζ(s, a).
//!
//! ζ(s, a) = Σ_{n<N} (n+a)^{-s} + (N+a)^{1-s}/(s-1) + (N+a)^{-s}/2
//!         + Σ_{k=1}^{15} B_{2k}/(2k)! · s(s+1)…(s+2k−2) · (N+a)^{-s-2k+1}
//!
//! with N = max(20, ⌈|t|/2⌉). Then |s|/(2πN) ≲ 1/π and the first omitted
//! Bernoulli term is of relative size (1/π)^{31} ≈ 4·10⁻¹⁶.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::numeric::jet::Jet;
use crate::numeric::{ensure_finite, Complex128, ComplexSum, BERNOULLI_OVER_FACTORIAL};

/// |Im s| accuracy guard.
pub const MAX_IMAG: f64 = 1e6;

const LN_TABLE_SIZE: usize = 1 << 21;

fn ln_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| (0..LN_TABLE_SIZE).map(|n| (n as f64).ln()).collect())
}

/// x^{-s} for real x > 0 given ln x.
#[inline]
fn pow_neg_ln(ln_x: f64, s: Complex128) -> Complex128 {
    let mag = (-s.re * ln_x).exp();
    let (sin, cos) = (s.im * ln_x).sin_cos();
    Complex128::new(mag * cos, -mag * sin)
}

pub(crate) fn cutoff(s: Complex128) -> usize {
    20usize.max((0.5 * s.im.abs()).ceil() as usize)
}

fn check_args(s: Complex128) -> Result<()> {
    ensure_finite(s, "s")?;
    if s.im.abs() > MAX_IMAG {
        return Err(Error::Range(format!("|Im s| = {} exceeds {MAX_IMAG}", s.im.abs())));
    }
    if s == Complex128::new(1.0, 0.0) {
        return Err(Error::Pole("zeta has a pole at s = 1".into()));
    }
    Ok(())
}

/// Riemann zeta by Euler–Maclaurin.
pub fn zeta_em(s: Complex128) -> Result<Complex128> {
    check_args(s)?;
    Ok(hurwitz_unchecked(s, 1.0, cutoff(s)))
}

/// Hurwitz zeta ζ(s, a) for 0 < a ≤ 1.
pub fn hurwitz(s: Complex128, a: f64) -> Result<Complex128> {
    check_args(s)?;
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::InvalidInput(format!("Hurwitz parameter a = {a} must lie in (0, 1]")));
    }
    Ok(hurwitz_unchecked(s, a, cutoff(s)))
}

pub(crate) fn hurwitz_unchecked(s: Complex128, a: f64, n: usize) -> Complex128 {
    let mut sum = ComplexSum::new();
    if a == 1.0 && n < LN_TABLE_SIZE {
        for &ln_m in &ln_table()[1..=n] {
            sum.add(pow_neg_ln(ln_m, s));
        }
    } else {
        for k in 0..n {
            sum.add(pow_neg_ln((k as f64 + a).ln(), s));
        }
    }
    let na = n as f64 + a;
    let na_s = pow_neg_ln(na.ln(), s);
    sum.add(na_s * na / (s - 1.0));
    sum.add(na_s * 0.5);
    let mut poch = s;
    let mut pw = na_s / na;
    let na2 = na * na;
    for (i, &b) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        sum.add(poch * pw * b);
        let j = 2.0 * i as f64;
        poch = poch * (s + (j + 1.0)) * (s + (j + 2.0));
        pw /= na2;
    }
    sum.value()
}

/// ζ(s₀), ζ′(s₀), …, ζ^{(order)}(s₀) by Euler–Maclaurin carried out on
/// truncated Taylor series in (s − s₀).
pub fn zeta_derivatives(s0: Complex128, order: usize) -> Result<Vec<Complex128>> {
    check_args(s0)?;
    let n = cutoff(s0);
    let var = Jet::variable(s0, order);
    let mut acc = Jet::constant(Complex128::new(0.0, 0.0), order);
    for k in 1..n {
        acc = &acc + &Jet::real_pow_neg(k as f64, s0, order);
    }
    let nf = n as f64;
    let n_s = Jet::real_pow_neg(nf, s0, order);
    let s_minus_one = &var - &Jet::constant(Complex128::new(1.0, 0.0), order);
    acc = &acc + &n_s.scale(Complex128::new(nf, 0.0)).div(&s_minus_one);
    acc = &acc + &n_s.scale(Complex128::new(0.5, 0.0));
    let mut poch = var.clone();
    for (i, &b) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let exponent = s0 + (2.0 * i as f64 + 1.0);
        let pw = Jet::real_pow_neg(nf, exponent, order);
        acc = &acc + &(&poch * &pw).scale(Complex128::new(b, 0.0));
        let j = 2.0 * i as f64;
        let f1 = &var + &Jet::constant(Complex128::new(j + 1.0, 0.0), order);
        let f2 = &var + &Jet::constant(Complex128::new(j + 2.0, 0.0), order);
        poch = &(&poch * &f1) * &f2;
    }
    Ok((0..=order).map(|m| acc.derivative(m)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex128 {
        Complex128::new(re, im)
    }

    #[test]
    fn basel_and_zero() {
        let z2 = zeta_em(c(2.0, 0.0)).unwrap();
        assert!((z2.re - PI * PI / 6.0).abs() < 1e-14);
        let z0 = zeta_em(c(0.0, 0.0)).unwrap();
        assert!((z0.re + 0.5).abs() < 1e-14);
        // ζ(−1) = −1/12
        let zm1 = zeta_em(c(-1.0, 0.0)).unwrap();
        assert!((zm1.re + 1.0 / 12.0).abs() < 1e-13);
    }

    #[test]
    fn first_zero_on_critical_line() {
        let z = zeta_em(c(0.5, 14.134725141734693)).unwrap();
        assert!(z.norm() < 1e-10, "{z}");
        let z = zeta_em(c(0.5, 14.134725)).unwrap();
        assert!(z.norm() < 1e-5, "{z}");
    }

    #[test]
    fn hurwitz_special_values() {
        let s = c(0.7, 3.0);
        let diff = hurwitz(s, 1.0).unwrap() - zeta_em(s).unwrap();
        assert!(diff.norm() < 1e-15);
        let h = hurwitz(c(2.0, 0.0), 0.5).unwrap();
        assert!((h.re - PI * PI / 2.0).abs() < 1e-13, "{h}");
        let h0 = hurwitz(c(0.0, 0.0), 0.25).unwrap();
        assert!((h0.re - 0.25).abs() < 1e-13);
    }

    #[test]
    fn rejects_pole_and_guards() {
        assert!(matches!(zeta_em(c(1.0, 0.0)), Err(Error::Pole(_))));
        assert!(matches!(zeta_em(c(0.5, 2e6)), Err(Error::Range(_))));
        assert!(matches!(zeta_em(c(f64::NAN, 0.0)), Err(Error::InvalidInput(_))));
        assert!(hurwitz(c(2.0, 0.0), 0.0).is_err());
        assert!(hurwitz(c(2.0, 0.0), 1.5).is_err());
    }

    #[test]
    fn schwarz_reflection_is_exact() {
        for &(re, im) in &[(0.3, 7.0), (2.0, 100.0), (-0.8, 33.3), (0.5, 1234.5)] {
            let a = zeta_em(c(re, im)).unwrap();
            let b = zeta_em(c(re, -im)).unwrap();
            assert_eq!(a.conj(), b);
        }
    }

    #[test]
    fn derivative_at_two() {
        // ζ′(2) = −0.93754825431584375370…
        let d = zeta_derivatives(c(2.0, 0.0), 3).unwrap();
        assert!((d[0].re - PI * PI / 6.0).abs() < 1e-14);
        assert!((d[1].re + 0.937_548_254_315_843_8).abs() < 1e-13, "{}", d[1]);
        // ζ″(2) = 1.98928023429890102342…
        assert!((d[2].re - 1.989_280_234_298_901).abs() < 1e-12, "{}", d[2]);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let s = c(0.4, 5.0);
        let h = 1e-4;
        let d = zeta_derivatives(s, 1).unwrap();
        let fd = (zeta_em(s + h).unwrap() - zeta_em(s - h).unwrap()) / (2.0 * h);
        assert!((d[1] - fd).norm() < 1e-7, "{} vs {fd}", d[1]);
    }
}
