//! Seeded randomized verifier suites, one per lemma-level checker.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use mslab_core::arith::{divisor_count, gcd, gcd_identity_check, gcd_range_sum};
use mslab_core::constants::stieltjes;
use mslab_core::estermann::{
    functional_equation_residual, incomplete_kloosterman, laurent_at_one, FareyArg,
};
use mslab_core::zeta::{
    laplace_check, laplace_cuts, zeta_em, Mollifier, MollifierParams, EPSILON,
};
use mslab_core::Complex128;

use crate::error::{CliError, CliResult, ErrorKind};

pub const MAX_TRIALS: u64 = 10_000_000;

/// Height used by the mollifier suite.
pub const PROP1_HEIGHT: f64 = 1e3;
pub const PROP1_LIMIT: f64 = 5.0;
pub const LAPLACE_LIMIT: f64 = 10.0;
pub const ESTERMANN_LIMIT: f64 = 1e-6;
/// Points within this distance of s = 0, 1, 2 are skipped by estermann-fe.
pub const FE_EXCLUSION: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Lemma15,
    Lemma16,
    Lemma17,
    Prop1,
    Laplace,
    EstermannFe,
    Laurent,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Lemma15,
        Suite::Lemma16,
        Suite::Lemma17,
        Suite::Prop1,
        Suite::Laplace,
        Suite::EstermannFe,
        Suite::Laurent,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma15 => "lemma15",
            Suite::Lemma16 => "lemma16",
            Suite::Lemma17 => "lemma17",
            Suite::Prop1 => "prop1",
            Suite::Laplace => "laplace",
            Suite::EstermannFe => "estermann-fe",
            Suite::Laurent => "laurent",
        }
    }

    pub fn parse(name: &str) -> CliResult<Self> {
        Suite::ALL
            .into_iter()
            .find(|s| s.name() == name)
            .ok_or_else(|| {
                let names: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
                CliError::validation(format!(
                    "unknown suite `{name}`; expected one of {}",
                    names.join(", ")
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub trials: u64,
    pub seed: u64,
    pub passed: bool,
    pub failures: u64,
    /// What `statistic` measures.
    pub statistic_name: &'static str,
    /// Empirical maximum over all trials.
    pub statistic: f64,
    /// Per-trial limit on the statistic, where the suite has one.
    pub limit: Option<f64>,
}

/// Per-trial outcome: the statistic and whether the property held.
type Trial = (f64, bool);

fn finish(
    suite: Suite,
    trials: u64,
    seed: u64,
    statistic_name: &'static str,
    limit: Option<f64>,
    outcomes: Vec<Trial>,
) -> SuiteReport {
    let failures = outcomes.iter().filter(|(_, ok)| !ok).count() as u64;
    let statistic = outcomes.iter().map(|(s, _)| *s).fold(0.0, f64::max);
    SuiteReport {
        suite,
        trials,
        seed,
        passed: failures == 0,
        failures,
        statistic_name,
        statistic,
        limit,
    }
}

fn evaluate<T: Sync, F>(samples: &[T], f: F) -> CliResult<Vec<Trial>>
where
    F: Fn(&T) -> CliResult<Trial> + Sync + Send,
{
    // collect keeps input order, so the reduction is thread-count independent
    samples.par_iter().map(f).collect()
}

pub fn run_suite(suite: Suite, trials: u64, seed: u64) -> CliResult<SuiteReport> {
    if trials == 0 {
        return Err(CliError::validation("--trials must be >= 1"));
    }
    if trials > MAX_TRIALS {
        return Err(CliError::new(
            ErrorKind::Resource,
            format!("--trials {trials} exceeds {MAX_TRIALS}"),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = trials as usize;
    let report = |name, limit, outcomes| finish(suite, trials, seed, name, limit, outcomes);
    Ok(match suite {
        Suite::Lemma15 => {
            let samples: Vec<[u64; 4]> = (0..n).map(|_| coprime_quadruple(&mut rng)).collect();
            let out = evaluate(&samples, |&[m1, n1, m2, n2]| {
                let ok = gcd_identity_check(m1, n1, m2, n2)?;
                Ok((if ok { 0.0 } else { 1.0 }, ok))
            })?;
            report("identity_failures", Some(0.0), out)
        }
        Suite::Lemma16 => {
            let samples: Vec<(u64, u64)> = (0..n)
                .map(|_| (rng.random_range(1..=1_000_000), rng.random_range(1..=1_000_000)))
                .collect();
            let out = evaluate(&samples, |&(m, a)| {
                let r = gcd_range_sum(m, 2 * m, a)?;
                let da = divisor_count(a)? as u128;
                // Σ_{e|a} φ(e)(M/e + 1) ≤ M·d(a) + a
                let ok = r.sum <= m as u128 * da + a as u128;
                Ok((r.bound_ratio, ok))
            })?;
            report("max_bound_ratio", None, out)
        }
        Suite::Lemma17 => {
            let samples: Vec<(u64, u64, u64, u64, i64)> = (0..n)
                .map(|_| {
                    let q: u64 = rng.random_range(2..=10_000);
                    let a_lo = rng.random_range(1..2 * q - 1);
                    let a_hi = rng.random_range(a_lo + 1..2 * q);
                    let b = rng.random_range(1..=10_000);
                    let l = rng.random_range(-(q as i64)..=q as i64);
                    (a_lo, a_hi, q, b, l)
                })
                .collect();
            let out = evaluate(&samples, |&(a_lo, a_hi, q, b, l)| {
                let k = incomplete_kloosterman(a_lo as f64, a_hi as f64, q, b, l)?;
                let ok = k.sum.norm() <= (a_hi - a_lo + 1) as f64 * (1.0 + 1e-12);
                Ok((k.bound_ratio, ok))
            })?;
            report("max_bound_ratio", None, out)
        }
        Suite::Prop1 => {
            let params = MollifierParams::from_height(PROP1_HEIGHT, EPSILON)?;
            let mollifier = Mollifier::new(params)?;
            let samples: Vec<f64> = (0..n)
                .map(|_| rng.random_range(PROP1_HEIGHT..=2.0 * PROP1_HEIGHT))
                .collect();
            let out = evaluate(&samples, |&t| {
                let approx = mollifier.eval(t)?;
                let exact = zeta_em(Complex128::new(1.0, t))?.inv();
                let dev = (approx - exact).norm();
                Ok((dev, dev <= PROP1_LIMIT))
            })?;
            report("max_abs_deviation", Some(PROP1_LIMIT), out)
        }
        Suite::Laplace => {
            let samples: Vec<Complex128> = (0..n)
                .map(|_| loop {
                    let z = Complex128::new(
                        rng.random_range(0.02..=0.15),
                        rng.random_range(-0.1..=0.1),
                    );
                    if z.norm() < 0.19 {
                        break z;
                    }
                })
                .collect();
            let out = evaluate(&samples, |&z| {
                let (t_cut, l_cut) = laplace_cuts(z)?;
                let d = laplace_check(z, t_cut, l_cut)?.diff.norm();
                Ok((d, d.is_finite() && d <= LAPLACE_LIMIT))
            })?;
            report("max_abs_remainder", Some(LAPLACE_LIMIT), out)
        }
        Suite::EstermannFe => {
            let samples: Vec<(Complex128, FareyArg)> = (0..n)
                .map(|_| {
                    let arg = random_farey(&mut rng, 30);
                    let s = loop {
                        let s = Complex128::new(
                            rng.random_range(-1.0..=2.0),
                            rng.random_range(-10.0..=10.0),
                        );
                        if [0.0, 1.0, 2.0]
                            .iter()
                            .all(|&p| (s - p).norm() >= FE_EXCLUSION)
                        {
                            break s;
                        }
                    };
                    (s, arg)
                })
                .collect();
            let out = evaluate(&samples, |&(s, arg)| {
                let r = functional_equation_residual(s, arg)?;
                Ok((r, r < ESTERMANN_LIMIT))
            })?;
            report("max_residual", Some(ESTERMANN_LIMIT), out)
        }
        Suite::Laurent => {
            let gamma = stieltjes(0)?;
            let samples: Vec<FareyArg> = (0..n).map(|_| random_farey(&mut rng, 30)).collect();
            let out = evaluate(&samples, |&arg| {
                let c = laurent_at_one(arg)?;
                let k = arg.k as f64;
                let dev = (c.c_m2 - 1.0 / k)
                    .abs()
                    .max((c.c_m1 - 2.0 * (gamma - k.ln()) / k).abs());
                Ok((dev, dev < ESTERMANN_LIMIT))
            })?;
            report("max_deviation", Some(ESTERMANN_LIMIT), out)
        }
    })
}

fn coprime_pair(rng: &mut ChaCha8Rng) -> (u64, u64) {
    loop {
        let a = rng.random_range(1..=1_000_000_000);
        let b = rng.random_range(1..=1_000_000_000);
        if gcd(a, b) == 1 {
            return (a, b);
        }
    }
}

fn coprime_quadruple(rng: &mut ChaCha8Rng) -> [u64; 4] {
    let (m1, m2) = coprime_pair(rng);
    let (n1, n2) = coprime_pair(rng);
    [m1, n1, m2, n2]
}

/// Uniform k in 1..=k_max, then h uniform among residues coprime to k.
fn random_farey(rng: &mut ChaCha8Rng, k_max: u64) -> FareyArg {
    let k = rng.random_range(1..=k_max);
    loop {
        let h = rng.random_range(0..k);
        if gcd(h, k) == 1 {
            return FareyArg::new(h as i64, k).expect("coprime by construction");
        }
    }
}
