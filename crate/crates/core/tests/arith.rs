use mslab_core::arith::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// d(n) for n ≤ limit by the harmonic loop, independent of the factor sieve.
fn naive_divisor_counts(limit: usize) -> Vec<u64> {
    let mut d = vec![0u64; limit + 1];
    for a in 1..=limit {
        for m in (a..=limit).step_by(a) {
            d[m] += 1;
        }
    }
    d
}

#[test]
fn d2_matches_direct_for_small_x() {
    let table = summatory_prefix_table(10_000, SumKind::D2).unwrap();
    let d = naive_divisor_counts(10_000);
    let mut acc = 0u128;
    for x in 1..=10_000u64 {
        acc += (d[x as usize] * d[x as usize]) as u128;
        assert_eq!(table[x as usize], acc);
        assert_eq!(summatory_d2(x).unwrap(), acc, "x = {x}");
    }
}

#[test]
fn d2_matches_direct_on_random_sample() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..1000 {
        let x = rng.random_range(1..=1_000_000);
        assert_eq!(summatory_d2(x).unwrap(), summatory_direct(x, SumKind::D2).unwrap(), "x = {x}");
    }
}

#[test]
fn d4_and_dcube_match_direct() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let x = rng.random_range(1..=200_000);
        for kind in [SumKind::D4, SumKind::DCube] {
            assert_eq!(summatory(x, kind).unwrap(), summatory_direct(x, kind).unwrap());
        }
    }
}

/// Exponents of n by trial division over a prime list reaching √n.
fn exponents(mut n: u64, primes: &[u64]) -> Vec<u32> {
    let mut out = Vec::new();
    for &p in primes {
        if p * p > n {
            break;
        }
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push(e);
        }
    }
    if n > 1 {
        out.push(1);
    }
    out
}

fn value_from_exponents(kind: SieveKind, es: &[u32]) -> i64 {
    es.iter()
        .map(|&e| {
            let e = e as i64;
            match kind {
                SieveKind::D => e + 1,
                SieveKind::D4 => (e + 1) * (e + 2) * (e + 3) / 6,
                SieveKind::DCube => 3 * e + 1,
                SieveKind::Mu => -((e == 1) as i64),
            }
        })
        .product()
}

#[test]
fn multiplicative_on_coprime_pairs() {
    const N: u64 = 1_000_000;
    let primes = primes_up_to(N);
    let kinds = [SieveKind::D, SieveKind::D4, SieveKind::Mu];
    let tables: Vec<SieveTable> = kinds.iter().map(|&k| sieve_multiplicative(1, N, k).unwrap()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0;
    while checked < 10_000 {
        let (m, n) = (rng.random_range(1..=N), rng.random_range(1..=N));
        if gcd(m, n) != 1 {
            continue;
        }
        let es = exponents(m * n, &primes);
        for (table, &kind) in tables.iter().zip(&kinds) {
            let want = value_from_exponents(kind, &es);
            assert_eq!(table.get(m) * table.get(n), want, "{kind:?} at {m}·{n}");
        }
        checked += 1;
    }
}

#[test]
fn sieve_matches_harmonic_loop() {
    let d = naive_divisor_counts(100_000);
    let table = sieve_multiplicative(1, 100_000, SieveKind::D).unwrap();
    for n in 1..=100_000u64 {
        assert_eq!(table.get(n), d[n as usize] as i64);
    }
    // a window far from 1 exercises the segment offset
    let lo = 10_000_000_000u64;
    let w = sieve_multiplicative(lo, lo + 999, SieveKind::D).unwrap();
    for n in lo..lo + 1000 {
        assert_eq!(w.get(n), divisor_count(n).unwrap() as i64);
    }
}

#[test]
fn worked_examples() {
    assert_eq!(summatory_d2(10).unwrap(), 83);
    assert_eq!(summatory_d4(10).unwrap(), 89);
    assert_eq!(short_interval_sum(10, 5, SumKind::D2).unwrap(), 76);
    assert_eq!(short_interval_sum(1, 9, SumKind::D2).unwrap(), 82);
}

/// Largest Σ_{M<m≤2M} gcd(m, a) / (M·d(a)) seen over 10⁴ draws with seed 16.
const GCD_RANGE_MAX_RATIO: f64 = 1.498_397_441_734_259_4;

#[test]
fn gcd_range_bound_ratio_regression() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let m = rng.random_range(1..=1_000_000);
        let a = rng.random_range(1..=1_000_000);
        let r = gcd_range_sum(m, 2 * m, a).unwrap();
        assert!(r.sum <= m as u128 * divisor_count(a).unwrap() as u128 + a as u128);
        worst = worst.max(r.bound_ratio);
    }
    assert!(worst <= GCD_RANGE_MAX_RATIO, "{worst}");
}

#[test]
fn gcd_range_fast_path_matches_direct() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let m = rng.random_range(1..=50_000);
        let a = rng.random_range(1..=1_000_000);
        assert_eq!(gcd_range_sum(m, 2 * m, a).unwrap().sum, gcd_range_sum_direct(m, 2 * m, a));
    }
}

#[test]
fn gcd_identity_on_random_quadruples() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let mut pair = || loop {
        let (a, b) = (rng.random_range(1..=1_000_000_000u64), rng.random_range(1..=1_000_000_000u64));
        if gcd(a, b) == 1 {
            break (a, b);
        }
    };
    for _ in 0..100_000 {
        let (m1, m2) = pair();
        let (n1, n2) = pair();
        assert!(gcd_identity_check(m1, n1, m2, n2).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn d4_split_invariance(x in 1u64..=5_000_000) {
        let r = x.isqrt();
        let base = summatory_d4_with_split(x, r).unwrap();
        prop_assert_eq!(summatory_d4_with_split(x, r + 1).unwrap(), base);
        if r > 1 {
            prop_assert_eq!(summatory_d4_with_split(x, r - 1).unwrap(), base);
        }
    }

    #[test]
    fn short_interval_additivity(x in 0u64..=2_000_000, y in 0u64..=50_000, z in 0u64..=50_000, k in 0usize..3) {
        let kind = [SumKind::D2, SumKind::D4, SumKind::DCube][k];
        let lhs = short_interval_sum(x, y, kind).unwrap() + short_interval_sum(x + y, z, kind).unwrap();
        prop_assert_eq!(lhs, short_interval_sum(x, y + z, kind).unwrap());
    }

    #[test]
    fn gcd_identity_holds(m1 in 1u64..=1_000_000_000, m2 in 1u64..=1_000_000_000,
                          n1 in 1u64..=1_000_000_000, n2 in 1u64..=1_000_000_000) {
        prop_assume!(gcd(m1, m2) == 1 && gcd(n1, n2) == 1);
        prop_assert!(gcd_identity_check(m1, n1, m2, n2).unwrap());
    }
}
