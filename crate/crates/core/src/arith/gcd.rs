//! Exact verifiers for the gcd identities behind the off-diagonal estimates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Trial-division guard for d(a).
pub const DIVISOR_COUNT_MAX: u64 = 1_000_000_000_000;

macro_rules! binary_gcd {
    ($name:ident, $t:ty) => {
        /// Binary (Stein) gcd.
        pub fn $name(mut a: $t, mut b: $t) -> $t {
            if a == 0 {
                return b;
            }
            if b == 0 {
                return a;
            }
            let shift = (a | b).trailing_zeros();
            a >>= a.trailing_zeros();
            loop {
                b >>= b.trailing_zeros();
                if a > b {
                    std::mem::swap(&mut a, &mut b);
                }
                b -= a;
                if b == 0 {
                    return a << shift;
                }
            }
        }
    };
}

binary_gcd!(gcd, u64);
binary_gcd!(gcd_u128, u128);

/// Prime factorization by trial division.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// d(a) by trial division, `a <= 10¹²`.
pub fn divisor_count(a: u64) -> Result<u64> {
    if a == 0 {
        return Err(Error::InvalidInput("d(0) is undefined".into()));
    }
    if a > DIVISOR_COUNT_MAX {
        return Err(Error::Range(format!("d({a}): trial division limited to {DIVISOR_COUNT_MAX}")));
    }
    Ok(factorize(a).iter().map(|&(_, e)| e as u64 + 1).product())
}

/// Checks gcd(m1·n1², m2·n2²) = gcd(m1, n2²)·gcd(m2, n1²) for coprime pairs
/// (m1, m2) and (n1, n2).
pub fn gcd_identity_check(m1: u64, n1: u64, m2: u64, n2: u64) -> Result<bool> {
    if m1 == 0 || n1 == 0 || m2 == 0 || n2 == 0 {
        return Err(Error::InvalidInput("arguments must be positive".into()));
    }
    if gcd(m1, m2) != 1 {
        return Err(Error::InvalidInput(format!("gcd(m1, m2) = gcd({m1}, {m2}) != 1")));
    }
    if gcd(n1, n2) != 1 {
        return Err(Error::InvalidInput(format!("gcd(n1, n2) = gcd({n1}, {n2}) != 1")));
    }
    let sq = |n: u64| (n as u128) * (n as u128);
    let lhs_a = (m1 as u128)
        .checked_mul(sq(n1))
        .ok_or(Error::Overflow("m1·n1²"))?;
    let lhs_b = (m2 as u128)
        .checked_mul(sq(n2))
        .ok_or(Error::Overflow("m2·n2²"))?;
    let lhs = gcd_u128(lhs_a, lhs_b);
    let rhs = gcd_u128(m1 as u128, sq(n2)) * gcd_u128(m2 as u128, sq(n1));
    Ok(lhs == rhs)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GcdRangeSum {
    pub sum: u128,
    /// sum / (M·d(a))
    pub bound_ratio: f64,
}

/// Ranges at most this long are summed term by term.
const DIRECT_RANGE: u64 = 4096;

/// Σ_{M<m≤M1} gcd(m, a) together with its ratio to M·d(a).
///
/// Long ranges use gcd(m, a) = Σ_{e | gcd(m, a)} φ(e), which turns the sum
/// into Σ_{e|a} φ(e)·(⌊M1/e⌋ − ⌊M/e⌋).
pub fn gcd_range_sum(m: u64, m1: u64, a: u64) -> Result<GcdRangeSum> {
    if m >= m1 {
        return Err(Error::InvalidInput(format!("need M < M1, got {m} >= {m1}")));
    }
    if m == 0 {
        return Err(Error::InvalidInput("M must be >= 1 for the bound ratio".into()));
    }
    if a == 0 {
        return Err(Error::InvalidInput("a must be >= 1".into()));
    }
    let da = divisor_count(a)?;
    let sum = if m1 - m <= DIRECT_RANGE {
        gcd_range_sum_direct(m, m1, a)
    } else {
        let mut s = 0u128;
        for (e, phi) in divisors_with_phi(a) {
            s += phi as u128 * (m1 / e - m / e) as u128;
        }
        s
    };
    Ok(GcdRangeSum {
        sum,
        bound_ratio: sum as f64 / (m as f64 * da as f64),
    })
}

/// Term-by-term Σ_{M<m≤M1} gcd(m, a).
pub fn gcd_range_sum_direct(m: u64, m1: u64, a: u64) -> u128 {
    (m + 1..=m1).map(|k| gcd(k, a) as u128).sum()
}

fn divisors_with_phi(a: u64) -> Vec<(u64, u64)> {
    let mut out = vec![(1u64, 1u64)];
    for (p, e) in factorize(a) {
        let base = out.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            let phi_pk = pk * (p - 1);
            pk *= p;
            out.extend(base.iter().map(|&(d, f)| (d * pk, f * phi_pk)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn euclid(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            euclid(b, a % b)
        }
    }

    #[test]
    fn binary_gcd_matches_euclid() {
        for a in 0..200u64 {
            for b in 0..200u64 {
                assert_eq!(gcd(a, b), euclid(a, b));
                assert_eq!(gcd_u128(a as u128, b as u128), euclid(a, b) as u128);
            }
        }
    }

    #[test]
    fn identity_examples() {
        assert!(gcd_identity_check(3, 2, 5, 7).unwrap());
        assert!(gcd_identity_check(4, 3, 9, 2).unwrap());
        assert!(gcd_identity_check(1, 1, 1, 1).unwrap());
    }

    #[test]
    fn identity_rejects_non_coprime() {
        let e = gcd_identity_check(6, 1, 4, 1).unwrap_err().to_string();
        assert!(e.contains("gcd(m1, m2)"), "{e}");
        let e = gcd_identity_check(1, 6, 1, 4).unwrap_err().to_string();
        assert!(e.contains("gcd(n1, n2)"), "{e}");
    }

    #[test]
    fn range_sum_examples() {
        let r = gcd_range_sum(10, 20, 6).unwrap();
        assert_eq!(r.sum, 25);
        assert_eq!(r.bound_ratio, 25.0 / 40.0);
        assert_eq!(gcd_range_sum(77, 78, 1).unwrap().sum, 1);
        assert_eq!(gcd_range_sum(5, 10, 7).unwrap().sum, 11);
    }

    #[test]
    fn divisor_formula_matches_direct() {
        for &(m, m1, a) in &[(5000u64, 10000u64, 360u64), (1, 9000, 720720), (12345, 99999, 97)] {
            let fast = gcd_range_sum(m, m1, a).unwrap().sum;
            assert_eq!(fast, gcd_range_sum_direct(m, m1, a), "({m}, {m1}, {a})");
        }
    }

    #[test]
    fn divisor_count_small() {
        assert_eq!(divisor_count(1).unwrap(), 1);
        assert_eq!(divisor_count(360).unwrap(), 24);
        assert!(divisor_count(DIVISOR_COUNT_MAX + 1).is_err());
    }
}
