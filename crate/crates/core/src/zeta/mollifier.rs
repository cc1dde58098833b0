use serde::{Deserialize, Serialize};

use crate::arith::{sieve_multiplicative, SieveKind};
use crate::error::{Error, Result};
use crate::numeric::{Complex128, ComplexSum};

/// Largest cutoff the direct sum will attempt.
pub const MAX_CUTOFF: f64 = 1e9;

/// Global choice for the "sufficiently small" ε.
pub const EPSILON: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MollifierParams {
    /// Cutoff X of the smoothed Möbius sum.
    pub cutoff: f64,
    /// Height scale T.
    pub height: f64,
    pub epsilon: f64,
}

impl MollifierParams {
    pub fn new(cutoff: f64, height: f64, epsilon: f64) -> Result<Self> {
        if !(cutoff > 1.0) || !cutoff.is_finite() {
            return Err(Error::InvalidInput(format!("cutoff X must exceed 1, got {cutoff}")));
        }
        Ok(MollifierParams {
            cutoff,
            height,
            epsilon,
        })
    }

    /// X = exp((2/ε)·(ln T)^{3/4}).
    pub fn from_height(height: f64, epsilon: f64) -> Result<Self> {
        if !(height > 1.0 && epsilon > 0.0) {
            return Err(Error::InvalidInput(format!(
                "need T > 1 and ε > 0, got T = {height}, ε = {epsilon}"
            )));
        }
        let cutoff = (2.0 / epsilon * height.ln().powf(0.75)).exp();
        Self::new(cutoff, height, epsilon)
    }
}

/// Precomputed Σ_{n≤X} μ(n) n^{-1-it} e^{-n/X}, reusable across heights.
#[derive(Debug, Clone)]
pub struct Mollifier {
    params: MollifierParams,
    /// (ln n, μ(n)·e^{-n/X}/n) for squarefree n ≤ X
    terms: Vec<(f64, f64)>,
}

impl Mollifier {
    pub fn new(params: MollifierParams) -> Result<Self> {
        if params.cutoff > MAX_CUTOFF {
            return Err(Error::Resource(format!(
                "mollifier cutoff X = {:.3e} exceeds {MAX_CUTOFF:.0e}",
                params.cutoff
            )));
        }
        let x = params.cutoff;
        let top = x.floor() as u64;
        let mu = sieve_multiplicative(1, top, SieveKind::Mu)?;
        let terms = mu
            .mobius()
            .expect("mu table")
            .iter()
            .enumerate()
            .filter(|(_, &m)| m != 0)
            .map(|(i, &m)| {
                let n = (i + 1) as f64;
                (n.ln(), m as f64 * (-n / x).exp() / n)
            })
            .collect();
        Ok(Mollifier { params, terms })
    }

    pub fn params(&self) -> MollifierParams {
        self.params
    }

    pub fn eval(&self, t: f64) -> Result<Complex128> {
        if !(t.is_finite() && t >= 1.0) {
            return Err(Error::InvalidInput(format!("t must be >= 1, got {t}")));
        }
        let sum: ComplexSum = self
            .terms
            .iter()
            .map(|&(ln_n, w)| {
                let (s, c) = (t * ln_n).sin_cos();
                Complex128::new(w * c, -w * s)
            })
            .collect();
        Ok(sum.value())
    }
}

/// Σ_{n≤X} μ(n) n^{-1-it} e^{-n/X}.
pub fn inv_zeta_mollified(t: f64, params: MollifierParams) -> Result<Complex128> {
    Mollifier::new(params)?.eval(t)
}
