//! Summatory functions of d², d₄ and d(n³).
//!
//! `summatory_direct` walks the sieve and is the reference oracle.
//! `summatory_d4` is the two-level hyperbola over d₄ = d ∗ d, and
//! `summatory_d2` uses d² = μ(a)·d₄(m) summed over a²m = n, i.e.
//! Σ_{n≤x} d²(n) = Σ_{a≤√x} μ(a)·D₄(⌊x/a²⌋).

use serde::{Deserialize, Serialize};

use super::sieve::{primes_up_to, sieve_with_primes, SieveKind};
use crate::error::{Error, Result};

/// Upper bound on `x` for `SumKind::D2` in the direct path.
pub const DIRECT_D2_MAX_X: u64 = 100_000_000_000_000;

/// Entries per segment when streaming the sieve.
const STREAM_SEGMENT: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SumKind {
    D2,
    D4,
    DCube,
}

impl SumKind {
    fn sieve_kind(self) -> SieveKind {
        match self {
            SumKind::D2 => SieveKind::D,
            SumKind::D4 => SieveKind::D4,
            SumKind::DCube => SieveKind::DCube,
        }
    }

    fn term(self, v: u32) -> u128 {
        match self {
            SumKind::D2 => (v as u128) * (v as u128),
            _ => v as u128,
        }
    }
}

fn add(acc: u128, v: u128) -> Result<u128> {
    acc.checked_add(v).ok_or(Error::Overflow("summatory accumulation"))
}

/// Exact Σ_{lo ≤ n ≤ hi} f(n) by streaming sieve segments.
fn stream_sum(lo: u64, hi: u64, kind: SumKind) -> Result<u128> {
    if lo > hi {
        return Ok(0);
    }
    let primes = primes_up_to(hi.isqrt());
    let mut acc = 0u128;
    let mut start = lo;
    loop {
        let end = hi.min(start.saturating_add(STREAM_SEGMENT - 1));
        let table = sieve_with_primes(start, end, kind.sieve_kind(), &primes);
        for &v in table.counts().expect("count kinds only") {
            acc = add(acc, kind.term(v))?;
        }
        if end == hi {
            return Ok(acc);
        }
        start = end + 1;
    }
}

/// Exact Σ_{n≤x} f(n) for f ∈ {d², d₄, d(n³)} by direct sieving.
pub fn summatory_direct(x: u64, kind: SumKind) -> Result<u128> {
    if x == 0 {
        return Err(Error::InvalidInput("x must be >= 1".into()));
    }
    if kind == SumKind::D2 && x > DIRECT_D2_MAX_X {
        return Err(Error::Range(format!(
            "direct d² summation is limited to x <= {DIRECT_D2_MAX_X}"
        )));
    }
    stream_sum(1, x, kind)
}

/// Prefix table `out[n] = Σ_{m≤n} f(m)` for `0 ≤ n ≤ x`.
pub fn summatory_prefix_table(x: u64, kind: SumKind) -> Result<Vec<u128>> {
    let table = super::sieve::sieve_multiplicative(1, x.max(1), kind.sieve_kind())?;
    let mut out = Vec::with_capacity(x as usize + 1);
    out.push(0u128);
    let mut acc = 0u128;
    for &v in table.counts().expect("count kinds only").iter().take(x as usize) {
        acc = add(acc, kind.term(v))?;
        out.push(acc);
    }
    Ok(out)
}

/// Divisor counts and their prefix sums on `1..=limit`.
struct DivisorTable {
    d: Vec<u32>,
    prefix: Vec<u64>,
}

impl DivisorTable {
    fn new(limit: u64) -> Self {
        let limit = limit.max(1);
        let primes = primes_up_to(limit.isqrt());
        let t = sieve_with_primes(1, limit, SieveKind::D, &primes);
        let counts = t.counts().expect("d table").to_vec();
        let mut d = Vec::with_capacity(counts.len() + 1);
        d.push(0);
        d.extend_from_slice(&counts);
        let mut prefix = Vec::with_capacity(d.len());
        let mut acc = 0u64;
        for &v in &d {
            acc += v as u64;
            prefix.push(acc);
        }
        DivisorTable { d, prefix }
    }

    fn limit(&self) -> u64 {
        (self.d.len() - 1) as u64
    }

    /// D(y) = Σ_{n≤y} d(n), from the table when possible.
    fn divisor_summatory(&self, y: u64) -> u128 {
        if y <= self.limit() {
            self.prefix[y as usize] as u128
        } else {
            divisor_summatory(y)
        }
    }

    /// D₄(x) with hyperbola split at `u`: pairs (a, b) with ab ≤ x are split
    /// into a ≤ u and a > u (so b ≤ ⌊x/(u+1)⌋).
    fn d4_split(&self, x: u64, u: u64) -> Result<u128> {
        let u = u.clamp(1, x.max(1));
        let v = x / (u + 1);
        debug_assert!(u.max(v) <= self.limit());
        let mut acc = 0u128;
        for a in 1..=u {
            let term = (self.d[a as usize] as u128)
                .checked_mul(self.divisor_summatory(x / a))
                .ok_or(Error::Overflow("d4 hyperbola"))?;
            acc = add(acc, term)?;
        }
        let du = self.prefix[u as usize] as u128;
        for b in 1..=v {
            let outer = self.divisor_summatory(x / b) - du;
            let term = (self.d[b as usize] as u128)
                .checked_mul(outer)
                .ok_or(Error::Overflow("d4 hyperbola"))?;
            acc = add(acc, term)?;
        }
        Ok(acc)
    }
}

/// D(y) = Σ_{n≤y} d(n) = 2·Σ_{b≤√y} ⌊y/b⌋ − ⌊√y⌋².
pub fn divisor_summatory(y: u64) -> u128 {
    let r = y.isqrt();
    let mut s = 0u128;
    for b in 1..=r {
        s += (y / b) as u128;
    }
    2 * s - (r as u128) * (r as u128)
}

pub fn summatory_d4(x: u64) -> Result<u128> {
    summatory_d4_with_split(x, x.isqrt())
}

/// Same as [`summatory_d4`] but with an explicit hyperbola split parameter.
pub fn summatory_d4_with_split(x: u64, split: u64) -> Result<u128> {
    if x == 0 {
        return Err(Error::InvalidInput("x must be >= 1".into()));
    }
    let u = split.clamp(1, x);
    let table = DivisorTable::new(u.max(x / (u + 1)));
    table.d4_split(x, u)
}

pub fn summatory_d2(x: u64) -> Result<u128> {
    if x == 0 {
        return Err(Error::InvalidInput("x must be >= 1".into()));
    }
    let root = x.isqrt();
    let mu = super::sieve::sieve_multiplicative(1, root.max(1), SieveKind::Mu)?;
    let mu = mu.mobius().expect("mu table");
    let table = DivisorTable::new(root + 1);
    let mut acc: i128 = 0;
    for a in 1..=root {
        let m = mu[(a - 1) as usize];
        if m == 0 {
            continue;
        }
        let y = x / (a * a);
        let d4 = table.d4_split(y, y.isqrt())?;
        let d4 = i128::try_from(d4).map_err(|_| Error::Overflow("d2 inclusion-exclusion"))?;
        acc = if m > 0 { acc.checked_add(d4) } else { acc.checked_sub(d4) }
            .ok_or(Error::Overflow("d2 inclusion-exclusion"))?;
    }
    u128::try_from(acc).map_err(|_| Error::Overflow("d2 inclusion-exclusion"))
}

/// Sublinear where available (d², d₄), direct sieve for d(n³).
pub fn summatory(x: u64, kind: SumKind) -> Result<u128> {
    match kind {
        SumKind::D2 => summatory_d2(x),
        SumKind::D4 => summatory_d4(x),
        SumKind::DCube => summatory_direct(x, kind),
    }
}

/// Exact Σ_{x<n≤x+y} f(n).
pub fn short_interval_sum(x: u64, y: u64, kind: SumKind) -> Result<u128> {
    if y == 0 {
        return Ok(0);
    }
    let top = x
        .checked_add(y)
        .ok_or_else(|| Error::Range(format!("x + y overflows: {x} + {y}")))?;
    // the sieve costs ~y, the sublinear difference ~top^(3/4)
    let sublinear_cost = (top as f64).powf(0.75) * 4.0;
    let use_difference = kind != SumKind::DCube && (y as f64) > sublinear_cost && x > 0;
    if use_difference {
        let hi = summatory(top, kind)?;
        let lo = summatory(x, kind)?;
        Ok(hi - lo)
    } else {
        stream_sum(x + 1, top, kind)
    }
}
