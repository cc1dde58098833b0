//! ζ(1/2 + it) on the critical line.
//!
//! Below the crossover height the Euler–Maclaurin evaluator is used directly.
//! Above it, the Riemann–Siegel formula
//!
//!   Z(t) = 2 Σ_{n≤N} n^{-1/2} cos(θ(t) − t ln n)
//!        + (−1)^{N−1} τ^{-1/2} Σ_{k=0}^{4} C_k(p) τ^{-k},   τ = √(t/2π), N = ⌊τ⌋, p = τ − N,
//!
//! and ζ(1/2+it) = Z(t) e^{−iθ(t)}. The correction coefficients C_k are built
//! from derivatives of Ψ(p) = cos(2π(p² − p − 1/16)) / cos(2πp), obtained by
//! Cauchy integrals in the complex p-plane (Ψ is entire) and stored as
//! Chebyshev interpolants on [0, 1].

use std::f64::consts::PI;
use std::sync::OnceLock;

use super::euler_maclaurin::zeta_em;
use super::gamma::log_gamma;
use crate::error::{Error, Result};
use crate::numeric::{unit, Complex128, KahanSum};

/// Heights at or below this use Euler–Maclaurin.
pub const CROSSOVER: f64 = 30.0;

/// Riemann–Siegel theta θ(t) = Im ln Γ(1/4 + it/2) − (t/2) ln π.
pub fn rs_theta(t: f64) -> f64 {
    log_gamma(Complex128::new(0.25, 0.5 * t)).im - 0.5 * t * PI.ln()
}

const DERIV_NODES: usize = 64;
const DERIV_RADIUS: f64 = 0.5;
const MAX_DERIV: usize = 12;
const CHEB_TERMS: usize = 40;

fn psi(z: Complex128) -> Complex128 {
    let num = (2.0 * PI * (z * z - z - 1.0 / 16.0)).cos();
    let den = (2.0 * PI * z).cos();
    num / den
}

/// Ψ^{(m)}(p) for m = 0..=12.
fn psi_derivatives(p: f64) -> [f64; MAX_DERIV + 1] {
    let mut acc = [0.0; MAX_DERIV + 1];
    let n = DERIV_NODES as f64;
    for j in 0..DERIV_NODES {
        // nodes offset by half a step so none lands on the real axis
        let w = unit((j as f64 + 0.5) / n) * DERIV_RADIUS;
        let f = psi(Complex128::new(p, 0.0) + w);
        let mut wp = Complex128::new(1.0, 0.0);
        for a in acc.iter_mut() {
            *a += (f / wp).re;
            wp *= w;
        }
    }
    let mut fact = 1.0;
    for (m, a) in acc.iter_mut().enumerate() {
        if m > 0 {
            fact *= m as f64;
        }
        *a *= fact / n;
    }
    acc
}

fn correction_terms(p: f64) -> [f64; 5] {
    let d = psi_derivatives(p);
    let pi2 = PI * PI;
    let pi4 = pi2 * pi2;
    let pi6 = pi4 * pi2;
    let pi8 = pi4 * pi4;
    [
        d[0],
        -d[3] / (96.0 * pi2),
        d[2] / (64.0 * pi2) + d[6] / (18432.0 * pi4),
        -d[1] / (64.0 * pi2) - d[5] / (3840.0 * pi4) - d[9] / (5_308_416.0 * pi6),
        d[0] / (128.0 * pi2)
            + 19.0 * d[4] / (24576.0 * pi4)
            + 11.0 * d[8] / (5_898_240.0 * pi6)
            + d[12] / (2_038_431_744.0 * pi8),
    ]
}

/// Chebyshev coefficients of C_0..C_4 on p ∈ [0, 1].
fn chebyshev_tables() -> &'static [[f64; CHEB_TERMS]; 5] {
    static TABLES: OnceLock<[[f64; CHEB_TERMS]; 5]> = OnceLock::new();
    TABLES.get_or_init(|| {
        let m = CHEB_TERMS;
        let samples: Vec<[f64; 5]> = (0..m)
            .map(|j| {
                let x = (PI * (j as f64 + 0.5) / m as f64).cos();
                correction_terms(0.5 * (x + 1.0))
            })
            .collect();
        let mut out = [[0.0; CHEB_TERMS]; 5];
        for (k, table) in out.iter_mut().enumerate() {
            for (i, c) in table.iter_mut().enumerate() {
                let mut s = 0.0;
                for (j, sample) in samples.iter().enumerate() {
                    s += sample[k] * (PI * i as f64 * (j as f64 + 0.5) / m as f64).cos();
                }
                *c = 2.0 * s / m as f64;
            }
            table[0] *= 0.5;
        }
        out
    })
}

fn clenshaw(coeffs: &[f64], p: f64) -> f64 {
    let x = 2.0 * p - 1.0;
    let (mut b1, mut b2) = (0.0, 0.0);
    for &c in coeffs.iter().rev() {
        let b0 = 2.0 * x * b1 - b2 + c;
        b2 = b1;
        b1 = b0;
    }
    b1 - x * b2
}

/// C_k(p) for k = 0..=4.
pub(crate) fn rs_coefficients(p: f64) -> [f64; 5] {
    let t = chebyshev_tables();
    std::array::from_fn(|k| clenshaw(&t[k], p))
}

/// Hardy's Z(t) by Riemann–Siegel with corrections through C₄. Needs t > 2π.
pub fn hardy_z_rs(t: f64) -> f64 {
    let tau = (t / (2.0 * PI)).sqrt();
    let n = tau.floor() as usize;
    let p = tau - n as f64;
    let theta = rs_theta(t);
    let mut main = KahanSum::new();
    for k in 1..=n {
        let kf = k as f64;
        main.add((theta - t * kf.ln()).cos() / kf.sqrt());
    }
    let c = rs_coefficients(p);
    let mut rem = 0.0;
    let mut tp = 1.0;
    for ck in c {
        rem += ck * tp;
        tp /= tau;
    }
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    2.0 * main.value() + sign * rem / tau.sqrt()
}

/// ζ(1/2 + it) for t ≥ 0.
pub fn zeta_half_line(t: f64) -> Result<Complex128> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidInput(format!("t must be finite and >= 0, got {t}")));
    }
    if t <= CROSSOVER {
        return zeta_em(Complex128::new(0.5, t));
    }
    if t > super::euler_maclaurin::MAX_IMAG {
        return Err(Error::Range(format!("t = {t} beyond the accuracy guard")));
    }
    Ok(zeta_half_line_rs(t))
}

pub(crate) fn zeta_half_line_rs(t: f64) -> Complex128 {
    let z = hardy_z_rs(t);
    let theta = rs_theta(t);
    z * unit(-theta / (2.0 * PI))
}
