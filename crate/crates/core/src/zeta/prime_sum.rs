//! log ζ(s) = Σ_{p^k} p^{-ks}/k, the Dirichlet series of Λ(n)/ln n.
//!
//! Primes up to a cutoff P are summed directly. The k-th power tail over
//! primes above P is replaced by its prime-number-theorem integral
//! ∫_P^∞ u^{-ks}/ln u du = E₁((ks − 1) ln P), and the reported tail bound
//! covers the deviation π(u) − li(u) using |π(u) − li(u)| < √u ln u/(8π)
//! (valid for u ≥ 2657 under the Riemann hypothesis).

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::arith::primes_up_to;
use crate::error::{Error, Result};
use crate::numeric::{ensure_finite, exp_integral_e1, Complex128, ComplexSum};

pub const DEFAULT_PRIME_CUTOFF: u64 = 10_000_000;
pub const MIN_REAL_PART: f64 = 1.2;

fn default_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_up_to(DEFAULT_PRIME_CUTOFF))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrimeSumEstimate {
    pub value: Complex128,
    pub tail_bound: f64,
    pub prime_cutoff: u64,
}

pub fn log_zeta_prime_sum(s: Complex128) -> Result<Complex128> {
    Ok(log_zeta_prime_sum_detailed(s)?.value)
}

pub fn log_zeta_prime_sum_detailed(s: Complex128) -> Result<PrimeSumEstimate> {
    ensure_finite(s, "s")?;
    if s.re < MIN_REAL_PART {
        return Err(Error::Domain(format!(
            "prime sum needs Re s >= {MIN_REAL_PART}, got {}",
            s.re
        )));
    }
    let primes = default_primes();
    let cutoff = DEFAULT_PRIME_CUTOFF;
    let mut sum = ComplexSum::new();
    for &p in primes {
        let lp = (p as f64).ln();
        let x = (-s * lp).exp();
        let mut xk = x;
        let mut k = 1.0;
        loop {
            sum.add(xk / k);
            k += 1.0;
            xk *= x;
            if xk.norm() < 1e-20 {
                break;
            }
        }
    }
    let lp = (cutoff as f64).ln();
    // smooth tails for k = 1, 2, 3; higher powers are below 1e-20 at this cutoff
    for k in 1..=3 {
        let kf = k as f64;
        sum.add(exp_integral_e1((s * kf - 1.0) * lp) / kf);
    }
    Ok(PrimeSumEstimate {
        value: sum.value(),
        tail_bound: fluctuation_bound(s, cutoff as f64),
        prime_cutoff: cutoff,
    })
}

/// Bound on |∫_P^∞ u^{-s} d(π − li)(u)| given |π − li| ≤ √u ln u/(8π).
fn fluctuation_bound(s: Complex128, p: f64) -> f64 {
    let r = |u: f64| u.sqrt() * u.ln() / (8.0 * PI);
    let sigma = s.re;
    let a = sigma + 0.5;
    let lp = p.ln();
    let integral = p.powf(1.0 - a) * (lp / (a - 1.0) + 1.0 / ((a - 1.0) * (a - 1.0)));
    p.powf(-sigma) * r(p) + s.norm() / (8.0 * PI) * integral
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeta::zeta_em;

    #[test]
    fn basel_log() {
        let v = log_zeta_prime_sum(Complex128::new(2.0, 0.0)).unwrap();
        assert!((v.re - (PI * PI / 6.0f64).ln()).abs() < 1e-9, "{v}");
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn agrees_with_euler_maclaurin() {
        for s in [
            Complex128::new(3.0, 0.0),
            Complex128::new(2.0, 5.0),
            Complex128::new(2.0, -17.0),
        ] {
            let est = log_zeta_prime_sum_detailed(s).unwrap();
            let z = zeta_em(s).unwrap();
            assert!((est.value - z.ln()).norm() < 1e-8, "s = {s}");
            assert!((est.value.exp() - z).norm() < 1e-8, "s = {s}");
            if s.im == 0.0 {
                assert!(est.tail_bound < 1e-10, "s = {s}: {}", est.tail_bound);
            }
        }
    }

    #[test]
    fn near_boundary_reports_larger_tail() {
        let est = log_zeta_prime_sum_detailed(Complex128::new(1.2, 0.0)).unwrap();
        let z = zeta_em(Complex128::new(1.2, 0.0)).unwrap();
        assert!((est.value - z.ln()).norm() < est.tail_bound);
        assert!(est.tail_bound > 1e-10);
    }

    #[test]
    fn domain_error_left_of_margin() {
        assert!(matches!(
            log_zeta_prime_sum(Complex128::new(1.1, 0.0)),
            Err(Error::Domain(_))
        ));
    }
}
