//! The Estermann function D(s; h/k) = Σ d(l) l^{-s} e(lh/k), its pole data
//! and functional equation, and incomplete Kloosterman sums.
//!
//! Continuation is through Hurwitz zeta values: grouping l = mn by the
//! residues of m and n mod k,
//!
//!   D(s; h/k) = k^{-2s} Σ_{a,b=1}^{k} e(abh/k) ζ(s, a/k) ζ(s, b/k).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, gcd, sieve_multiplicative, SieveKind};
use crate::error::{Error, Result};
use crate::numeric::contour::Circle;
use crate::numeric::{ensure_finite, unit, Complex128, ComplexSum, KahanSum};
use crate::zeta::{complex_gamma, hurwitz};

pub const MAX_MODULUS: u64 = 200;
pub const MIN_DIRICHLET_REAL_PART: f64 = 1.25;
pub const MIN_DIRICHLET_CUTOFF: u64 = 1_000;
pub const MAX_FE_IMAG: f64 = 20.0;
pub const LAURENT_RADIUS: f64 = 0.25;
pub const LAURENT_NODES: usize = 128;
/// ε in the Kloosterman bound denominator.
pub const KLOOSTERMAN_EPSILON: f64 = 0.05;

/// Reduced fraction h/k with 0 ≤ h < k and h·h̄ ≡ 1 (mod k).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FareyArg {
    pub h: i64,
    pub k: u64,
    pub h_bar: u64,
}

/// Inverse of a modulo m (m ≥ 1), if gcd(a, m) = 1.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

impl FareyArg {
    pub fn new(h: i64, k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInput("denominator k must be >= 1".into()));
        }
        let hn = (h as i128).rem_euclid(k as i128) as u64;
        let h_bar = mod_inverse(hn, k).ok_or_else(|| {
            Error::InvalidInput(format!("h = {h} is not coprime to k = {k}"))
        })?;
        Ok(FareyArg {
            h: hn as i64,
            k,
            h_bar,
        })
    }

    /// −h/k
    pub fn negated(&self) -> Self {
        FareyArg::new(-self.h, self.k).expect("negation keeps coprimality")
    }

    /// h̄/k
    pub fn inverse(&self) -> Self {
        FareyArg::new(self.h_bar as i64, self.k).expect("inverse is a unit")
    }

    /// e(n·h/k), reduced exactly before the exponential.
    fn twist(&self, n: u64) -> Complex128 {
        let r = (n as u128 * self.h as u128 % self.k as u128) as f64;
        unit(r / self.k as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirichletEstimate {
    pub value: Complex128,
    /// Bound on the omitted tail Σ_{l>L} d(l) l^{-σ}.
    pub tail_bound: f64,
}

/// Σ_{l>L} d(l)l^{-σ} ≤ σ L^{1−σ}[(ln L + 1)/(σ−1) + 1/(σ−1)²], from
/// Σ_{l≤u} d(l) ≤ u(ln u + 1) and partial summation.
pub fn dirichlet_tail_bound(sigma: f64, l_cut: u64) -> f64 {
    let l = l_cut as f64;
    let a = sigma - 1.0;
    sigma * l.powf(-a) * ((l.ln() + 1.0) / a + 1.0 / (a * a))
}

/// Truncated Dirichlet series Σ_{l≤L} d(l) l^{-s} e(lh/k).
pub fn estermann_dirichlet(s: Complex128, arg: FareyArg, l_cut: u64) -> Result<DirichletEstimate> {
    ensure_finite(s, "s")?;
    if s.re < MIN_DIRICHLET_REAL_PART {
        return Err(Error::Domain(format!(
            "Dirichlet series needs Re s >= {MIN_DIRICHLET_REAL_PART}, got {}; use the Hurwitz continuation",
            s.re
        )));
    }
    if l_cut < MIN_DIRICHLET_CUTOFF {
        return Err(Error::InvalidInput(format!(
            "l_cut must be >= {MIN_DIRICHLET_CUTOFF}, got {l_cut}"
        )));
    }
    let d = sieve_multiplicative(1, l_cut, SieveKind::D)?;
    let sum: ComplexSum = d
        .counts()
        .expect("divisor table")
        .iter()
        .enumerate()
        .map(|(i, &dl)| {
            let l = (i + 1) as u64;
            let ln = (l as f64).ln();
            (-s * ln).exp() * arg.twist(l) * dl as f64
        })
        .collect();
    Ok(DirichletEstimate {
        value: sum.value(),
        tail_bound: dirichlet_tail_bound(s.re, l_cut),
    })
}

fn check_modulus(arg: &FareyArg) -> Result<()> {
    if arg.k > MAX_MODULUS {
        return Err(Error::Resource(format!(
            "k = {} exceeds the Hurwitz budget k <= {MAX_MODULUS}",
            arg.k
        )));
    }
    Ok(())
}

/// ζ(s, a/k) for a = 1..=k.
fn hurwitz_row(s: Complex128, k: u64) -> Result<Vec<Complex128>> {
    (1..=k).map(|a| hurwitz(s, a as f64 / k as f64)).collect()
}

/// Bilinear combination of a precomputed Hurwitz row.
fn bilinear(s: Complex128, arg: &FareyArg, row: &[Complex128]) -> Complex128 {
    let k = arg.k;
    let inner: Vec<Complex128> = (1..=k)
        .into_par_iter()
        .map(|a| {
            (1..=k)
                .map(|b| arg.twist(a * b) * row[(b - 1) as usize])
                .collect::<ComplexSum>()
                .value()
                * row[(a - 1) as usize]
        })
        .collect();
    let total: ComplexSum = inner.into_iter().collect();
    (-2.0 * s * (k as f64).ln()).exp() * total.value()
}

/// D(s; h/k) for any s ≠ 1 through the Hurwitz identity.
pub fn estermann_hurwitz(s: Complex128, arg: FareyArg) -> Result<Complex128> {
    ensure_finite(s, "s")?;
    if s == Complex128::new(1.0, 0.0) {
        return Err(Error::Pole("D(s; h/k) has a double pole at s = 1".into()));
    }
    check_modulus(&arg)?;
    let row = hurwitz_row(s, arg.k)?;
    Ok(bilinear(s, &arg, &row))
}

/// Coefficients of (s−1)^{-2} and (s−1)^{-1} in D(s; h/k).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaurentData {
    pub c_m2: f64,
    pub c_m1: f64,
}

/// Node doubling may move a Laurent coefficient by at most this.
const LAURENT_DOUBLING_TOLERANCE: f64 = 1e-10;

fn laurent_with_nodes(arg: &FareyArg, nodes: usize) -> Result<LaurentData> {
    let circle = Circle::new(Complex128::new(1.0, 0.0), LAURENT_RADIUS, nodes);
    let values = circle
        .points()
        .into_iter()
        .map(|s| Ok(bilinear(s, arg, &hurwitz_row(s, arg.k)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(LaurentData {
        c_m2: circle.laurent_coefficient(&values, -2).re,
        c_m1: circle.laurent_coefficient(&values, -1).re,
    })
}

pub fn laurent_at_one(arg: FareyArg) -> Result<LaurentData> {
    check_modulus(&arg)?;
    let coarse = laurent_with_nodes(&arg, LAURENT_NODES)?;
    let fine = laurent_with_nodes(&arg, 2 * LAURENT_NODES)?;
    let moved = (coarse.c_m2 - fine.c_m2)
        .abs()
        .max((coarse.c_m1 - fine.c_m1).abs());
    if moved > LAURENT_DOUBLING_TOLERANCE {
        return Err(Error::Precision {
            message: format!("Laurent coefficients moved by {moved:.3e} under node doubling"),
            partial: Some(fine.c_m2),
        });
    }
    Ok(coarse)
}

/// |LHS − RHS| / (|LHS| + 1) for
/// D(s; h/k) = 2G(s)² k^{1−2s} (D(1−s; h̄/k) − cos(πs) D(1−s; −h̄/k)),
/// G(s) = (2π)^{s−1} Γ(1−s).
pub fn functional_equation_residual(s: Complex128, arg: FareyArg) -> Result<f64> {
    ensure_finite(s, "s")?;
    let one = Complex128::new(1.0, 0.0);
    if s == one || s == Complex128::new(0.0, 0.0) {
        return Err(Error::Domain(format!("s = {s} puts one side on the pole")));
    }
    if s.im.abs() > MAX_FE_IMAG {
        return Err(Error::Domain(format!(
            "|Im s| = {} exceeds {MAX_FE_IMAG}",
            s.im.abs()
        )));
    }
    check_modulus(&arg)?;
    let gamma = complex_gamma(one - s).map_err(|e| match e {
        Error::Pole(m) => Error::Domain(m),
        other => other,
    })?;
    let g = (std::f64::consts::TAU.ln() * (s - 1.0)).exp() * gamma;
    let kf = arg.k as f64;
    let lhs = estermann_hurwitz(s, arg)?;
    // both right-hand terms share the Hurwitz row at 1 − s
    let row = hurwitz_row(one - s, arg.k)?;
    let d_inv = bilinear(one - s, &arg.inverse(), &row);
    let d_neg = bilinear(one - s, &arg.inverse().negated(), &row);
    let pi_s = std::f64::consts::PI * s;
    let rhs = 2.0 * g * g * (kf.ln() * (one - 2.0 * s)).exp() * (d_inv - pi_s.cos() * d_neg);
    Ok((lhs - rhs).norm() / (lhs.norm() + 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KloostermanSum {
    pub sum: Complex128,
    /// |sum| / ((l, q)^{1/2} q^{1/2+ε} b^ε)
    pub bound_ratio: f64,
}

/// Σ e(l·ā/q) over integers A < a ≤ B with (a, q) = (a, b) = 1.
///
/// A = 0 is accepted so that the complete sum (A, B) = (0, q) is expressible.
pub fn incomplete_kloosterman(a_lo: f64, a_hi: f64, q: u64, b: u64, l: i64) -> Result<KloostermanSum> {
    if q < 2 || b < 1 {
        return Err(Error::InvalidInput(format!("need q >= 2 and b >= 1, got q = {q}, b = {b}")));
    }
    if !(a_lo >= 0.0 && a_lo < a_hi && a_hi < 2.0 * q as f64) {
        return Err(Error::InvalidInput(format!(
            "need 0 <= A < B < 2q, got A = {a_lo}, B = {a_hi}, q = {q}"
        )));
    }
    let first = a_lo.floor() as u64 + 1;
    let last = a_hi.floor() as u64;
    let lq = (l as i128).rem_euclid(q as i128) as u128;
    let mut re = KahanSum::new();
    let mut im = KahanSum::new();
    for a in first..=last {
        if gcd(a, q) != 1 || gcd(a, b) != 1 {
            continue;
        }
        let inv = mod_inverse(a, q).expect("unit") as u128;
        let e = unit((lq * inv % q as u128) as f64 / q as f64);
        re.add(e.re);
        im.add(e.im);
    }
    let sum = Complex128::new(re.value(), im.value());
    let g = gcd(l.unsigned_abs(), q) as f64;
    let denom = g.sqrt() * (q as f64).powf(0.5 + KLOOSTERMAN_EPSILON) * (b as f64).powf(KLOOSTERMAN_EPSILON);
    Ok(KloostermanSum {
        sum,
        bound_ratio: sum.norm() / denom,
    })
}

fn mobius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Ramanujan sum c_q(l) = Σ_{d | (q, l)} d·μ(q/d).
pub fn ramanujan_sum(q: u64, l: i64) -> i64 {
    let g = gcd(l.unsigned_abs(), q);
    let mut total = 0i64;
    let mut d = 1;
    while d * d <= g {
        if g % d == 0 {
            total += d as i64 * mobius(q / d);
            let e = g / d;
            if e != d {
                total += e as i64 * mobius(q / e);
            }
        }
        d += 1;
    }
    total
}
