//! Exact integer arithmetic: multiplicative-function sieves, summatory
//! functions and the gcd-lemma verifiers.

mod gcd;
mod sieve;
mod summatory;

pub use gcd::{
    divisor_count, factorize, gcd, gcd_identity_check, gcd_range_sum, gcd_range_sum_direct,
    gcd_u128, GcdRangeSum, DIVISOR_COUNT_MAX,
};
pub use sieve::{
    primes_up_to, sieve_multiplicative, sieve_multiplicative_with_cap, SieveKind, SieveTable,
    SieveValues, DEFAULT_SEGMENT_CAP, MAX_SIEVE_HI,
};
pub use summatory::{
    divisor_summatory, short_interval_sum, summatory, summatory_d2, summatory_d4,
    summatory_d4_with_split, summatory_direct, summatory_prefix_table, SumKind, DIRECT_D2_MAX_X,
};

use serde::{Deserialize, Serialize};

/// Exact sum, its main term and the resulting error term at one `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummatoryResult {
    pub x: u64,
    pub sum: u128,
    pub main_term: f64,
    pub error_term: f64,
    /// E(x) / (√x · (ln x)⁵)
    pub ratio: f64,
}

impl SummatoryResult {
    pub fn new(x: u64, sum: u128, main_term: f64) -> Self {
        let error_term = error_term(sum, main_term);
        SummatoryResult {
            x,
            sum,
            main_term,
            error_term,
            ratio: normalized_error(x, error_term),
        }
    }
}

/// `sum − main` with the integer split so large sums keep their low digits.
pub fn error_term(sum: u128, main: f64) -> f64 {
    let whole = main.floor();
    let frac = main - whole;
    let diff = sum as i128 - whole as i128;
    diff as f64 - frac
}

/// E(x) / (√x · (ln x)⁵)
pub fn normalized_error(x: u64, e: f64) -> f64 {
    let xf = x as f64;
    e / (xf.sqrt() * xf.ln().powi(5))
}
