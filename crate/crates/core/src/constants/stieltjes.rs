//! Stieltjes constants γ_k = lim_{N→∞} (Σ_{n≤N} lnᵏn/n − ln^{k+1}N/(k+1)).
//!
//! The limit is taken by Euler–Maclaurin on f(x) = lnᵏx/x:
//!
//!   γ_k = Σ_{n<N} f(n) + f(N)/2 − ln^{k+1}N/(k+1) − Σ_j B_{2j}/(2j)! f^{(2j−1)}(N).
//!
//! Derivatives are f^{(m)}(x) = Q_m(ln x)/x^{m+1} with Q_0(L) = Lᵏ and
//! Q_{m+1} = Q_m′ − (m+1)Q_m.

use crate::error::{Error, Result};
use crate::numeric::contour::Circle;
use crate::numeric::{Complex128, KahanSum, BERNOULLI_OVER_FACTORIAL};
use crate::zeta::zeta_em;

pub const MAX_STIELTJES_ORDER: u32 = 3;

const EM_CUTOFF: u32 = 12;

fn poly_eval(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

pub fn stieltjes(k: u32) -> Result<f64> {
    if k > MAX_STIELTJES_ORDER {
        return Err(Error::Unsupported(format!(
            "Stieltjes constants are provided for k <= {MAX_STIELTJES_ORDER}, got {k}"
        )));
    }
    let k = k as usize;
    let n = EM_CUTOFF;
    let f = |x: f64| x.ln().powi(k as i32) / x;

    let mut sum = KahanSum::new();
    for m in 1..n {
        sum.add(f(m as f64));
    }
    let nf = n as f64;
    let l = nf.ln();
    sum.add(0.5 * f(nf));
    sum.add(-l.powi(k as i32 + 1) / (k as f64 + 1.0));

    // coefficients of Q_m in powers of L, lowest first
    let mut q = vec![0.0; k + 1];
    q[k] = 1.0;
    let mut m = 0;
    for (j, &b) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let order = 2 * j + 1;
        while m < order {
            q = next_q(&q, m);
            m += 1;
        }
        let deriv = poly_eval(&q, l) / nf.powi(order as i32 + 1);
        sum.add(-b * deriv);
    }
    Ok(sum.value())
}

/// Q_{m+1} = Q_m′ − (m+1)·Q_m
fn next_q(q: &[f64], m: usize) -> Vec<f64> {
    let mut out = vec![0.0; q.len()];
    for (i, &a) in q.iter().enumerate() {
        out[i] -= (m as f64 + 1.0) * a;
        if i > 0 {
            out[i - 1] += i as f64 * a;
        }
    }
    out
}

/// γ₀ read off as the constant Laurent coefficient of ζ at s = 1, from a
/// circle of radius 1/2 around the pole.
pub fn euler_gamma_from_laurent() -> Result<f64> {
    let circle = Circle::new(Complex128::new(1.0, 0.0), 0.5, 64);
    let values = circle
        .points()
        .into_iter()
        .map(zeta_em)
        .collect::<Result<Vec<_>>>()?;
    Ok(circle.laurent_coefficient(&values, 0).re)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        let expect = [
            0.577_215_664_901_532_86,
            -0.072_815_845_483_676_725,
            -0.009_690_363_192_872_318,
            0.002_053_834_420_303_345_9,
        ];
        for (k, &e) in expect.iter().enumerate() {
            let g = stieltjes(k as u32).unwrap();
            assert!((g - e).abs() < 1e-12 * e.abs().max(1e-3), "k = {k}: {g}");
        }
    }

    #[test]
    fn euler_constant_two_ways() {
        let a = stieltjes(0).unwrap();
        let b = euler_gamma_from_laurent().unwrap();
        assert!((a - b).abs() < 1e-10, "{a} vs {b}");
    }

    #[test]
    fn harmonic_limit_converges_toward_gamma() {
        let n = 1_000_000u32;
        let h: f64 = (1..=n).map(|m| 1.0 / m as f64).sum();
        let crude = h - (n as f64).ln();
        // H_N − ln N = γ + 1/(2N) + O(N⁻²)
        assert!((crude - 0.5 / n as f64 - stieltjes(0).unwrap()).abs() < 1e-11);
    }

    #[test]
    fn order_four_unsupported() {
        assert!(matches!(stieltjes(4), Err(Error::Unsupported(_))));
    }
}
