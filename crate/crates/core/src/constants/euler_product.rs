//! G₁(s) = Π_p (1 + 2p^{-s}) / ((1 − p^{-s})(1 + p^{-s})³), the correction
//! factor in Σ d(n³)n^{-s} = ζ⁴(s)/ζ³(2s)·G₁(s).
//!
//! Each factor is 1 + 2X³ − 3X⁴ + O(X⁵) in X = p^{-s}, so the product
//! converges absolutely for Re s > 1/3.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::arith::primes_up_to;
use crate::error::{Error, Result};
use crate::numeric::{ensure_finite, Complex128, ComplexSum};

pub const DEFAULT_G1_PRIME_BOUND: u64 = 100_000;
pub const MAX_G1_PRIME_BOUND: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EulerProduct {
    pub value: Complex128,
    /// Bound on |log G₁ − log(truncated product)|.
    pub tail_bound: f64,
    pub prime_bound: u64,
}

fn cached_primes(bound: u64) -> Vec<u64> {
    static CACHE: OnceLock<Vec<u64>> = OnceLock::new();
    let base = CACHE.get_or_init(|| primes_up_to(1_000_000));
    if bound <= 1_000_000 {
        let end = base.partition_point(|&p| p <= bound);
        base[..end].to_vec()
    } else {
        primes_up_to(bound)
    }
}

pub(crate) fn log_factor(x: Complex128) -> Complex128 {
    let one = Complex128::new(1.0, 0.0);
    ((one + 2.0 * x) / ((one - x) * (one + x).powi(3))).ln()
}

/// Σ_{p≤P} log((1+2X)/((1−X)(1+X)³)) at each point, sharing one prime list.
pub(crate) fn log_g1_many(points: &[Complex128], primes: &[u64]) -> Vec<Complex128> {
    points
        .iter()
        .map(|&s| {
            primes
                .iter()
                .map(|&p| log_factor((-s * (p as f64).ln()).exp()))
                .collect::<ComplexSum>()
                .value()
        })
        .collect()
}

/// Σ_{n>P} 3·n^{-3σ} ≤ 3P^{1−3σ}/(3σ−1), valid once |p^{-s}| ≤ 1/10.
fn tail_bound(sigma: f64, p: f64) -> f64 {
    3.0 * p.powf(1.0 - 3.0 * sigma) / (3.0 * sigma - 1.0)
}

pub fn euler_product_g1(s: Complex128, prime_bound: u64) -> Result<EulerProduct> {
    ensure_finite(s, "s")?;
    if s.re <= 1.0 / 3.0 {
        return Err(Error::Domain(format!(
            "G1 converges only for Re s > 1/3, got {}",
            s.re
        )));
    }
    if !(10..=MAX_G1_PRIME_BOUND).contains(&prime_bound) {
        return Err(Error::InvalidInput(format!(
            "prime bound must lie in [10, {MAX_G1_PRIME_BOUND}], got {prime_bound}"
        )));
    }
    let primes = cached_primes(prime_bound);
    let log = log_g1_many(&[s], &primes)[0];
    let pb = prime_bound as f64;
    let tail_bound = if pb.powf(-s.re) <= 0.1 {
        tail_bound(s.re, pb)
    } else {
        f64::INFINITY
    };
    Ok(EulerProduct {
        value: log.exp(),
        tail_bound,
        prime_bound,
    })
}

pub(crate) fn primes_for(bound: u64) -> Vec<u64> {
    cached_primes(bound)
}
