//! Segmented factorization sieve for the multiplicative functions d, d₄, μ
//! and n ↦ d(n³).
//!
//! Each entry is built from its prime-power factorization. Primes up to
//! √hi strip their powers off a per-block remainder array; whatever is left
//! above 1 after that is a single large prime.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maximum number of entries in one table.
pub const DEFAULT_SEGMENT_CAP: u64 = 1 << 26;

/// Largest admissible upper bound. Keeps `p * p` and the base-prime list
/// comfortably inside `u64` / memory.
pub const MAX_SIEVE_HI: u64 = 1 << 50;

/// Entries processed per inner block; sized to keep the remainder array in cache.
const BLOCK: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SieveKind {
    D,
    D4,
    Mu,
    DCube,
}

impl SieveKind {
    /// Value of the function at `p^e` (`e >= 1`).
    #[inline]
    fn prime_power(self, e: u32) -> i64 {
        let e = e as i64;
        match self {
            SieveKind::D => e + 1,
            SieveKind::D4 => (e + 1) * (e + 2) * (e + 3) / 6,
            SieveKind::DCube => 3 * e + 1,
            SieveKind::Mu => {
                if e == 1 {
                    -1
                } else {
                    0
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SieveValues {
    Counts(Vec<u32>),
    Mobius(Vec<i32>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveTable {
    pub lo: u64,
    pub hi: u64,
    pub kind: SieveKind,
    pub values: SieveValues,
}

impl SieveTable {
    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Value at `n`, which must lie in `[lo, hi]`.
    pub fn get(&self, n: u64) -> i64 {
        assert!(n >= self.lo && n <= self.hi, "{n} outside [{}, {}]", self.lo, self.hi);
        let i = (n - self.lo) as usize;
        match &self.values {
            SieveValues::Counts(v) => v[i] as i64,
            SieveValues::Mobius(v) => v[i] as i64,
        }
    }

    pub fn counts(&self) -> Option<&[u32]> {
        match &self.values {
            SieveValues::Counts(v) => Some(v),
            SieveValues::Mobius(_) => None,
        }
    }

    pub fn mobius(&self) -> Option<&[i32]> {
        match &self.values {
            SieveValues::Mobius(v) => Some(v),
            SieveValues::Counts(_) => None,
        }
    }

    /// All values widened to `i64`, in order.
    pub fn to_vec(&self) -> Vec<i64> {
        match &self.values {
            SieveValues::Counts(v) => v.iter().map(|&x| x as i64).collect(),
            SieveValues::Mobius(v) => v.iter().map(|&x| x as i64).collect(),
        }
    }
}

/// Primes `<= limit` by the plain sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

pub fn sieve_multiplicative(lo: u64, hi: u64, kind: SieveKind) -> Result<SieveTable> {
    sieve_multiplicative_with_cap(lo, hi, kind, DEFAULT_SEGMENT_CAP)
}

pub fn sieve_multiplicative_with_cap(
    lo: u64,
    hi: u64,
    kind: SieveKind,
    cap: u64,
) -> Result<SieveTable> {
    if lo == 0 || lo > hi {
        return Err(Error::InvalidInput(format!(
            "sieve range must satisfy 1 <= lo <= hi, got [{lo}, {hi}]"
        )));
    }
    if hi > MAX_SIEVE_HI {
        return Err(Error::Range(format!("sieve bound {hi} exceeds {MAX_SIEVE_HI}")));
    }
    if hi - lo >= cap {
        return Err(Error::Resource(format!(
            "segment of {} entries exceeds cap {cap}",
            hi - lo + 1
        )));
    }
    let primes = primes_up_to(hi.isqrt());
    Ok(sieve_with_primes(lo, hi, kind, &primes))
}

/// Core sieve; `primes` must contain every prime `<= isqrt(hi)`.
pub(crate) fn sieve_with_primes(lo: u64, hi: u64, kind: SieveKind, primes: &[u64]) -> SieveTable {
    let len = (hi - lo + 1) as usize;
    let mut vals: Vec<i64> = Vec::with_capacity(len);
    let mut rem: Vec<u64> = Vec::with_capacity(BLOCK as usize);
    let mut acc: Vec<i64> = Vec::with_capacity(BLOCK as usize);

    let mut start = lo;
    loop {
        let end = hi.min(start.saturating_add(BLOCK - 1));
        let n = (end - start + 1) as usize;
        rem.clear();
        rem.extend(start..=end);
        acc.clear();
        acc.resize(n, 1);
        let root = end.isqrt();
        for &p in primes {
            if p > root {
                break;
            }
            let first = start.div_ceil(p) * p;
            let mut m = first;
            while m <= end {
                let i = (m - start) as usize;
                let mut r = rem[i] / p;
                let mut e = 1u32;
                while r % p == 0 {
                    r /= p;
                    e += 1;
                }
                rem[i] = r;
                acc[i] *= kind.prime_power(e);
                m += p;
            }
        }
        for i in 0..n {
            if rem[i] > 1 {
                acc[i] *= kind.prime_power(1);
            }
        }
        vals.extend_from_slice(&acc);
        if end == hi {
            break;
        }
        start = end + 1;
    }

    let values = match kind {
        SieveKind::Mu => SieveValues::Mobius(vals.into_iter().map(|v| v as i32).collect()),
        _ => SieveValues::Counts(vals.into_iter().map(|v| v as u32).collect()),
    };
    SieveTable { lo, hi, kind, values }
}
