//! Main terms x·P(ln x) as residues at s = 1 of F(s)xˢ/s, with
//! F = ζ⁴(s)/ζ(2s) for Σd²(n) and F = ζ⁴(s)/ζ³(2s)·G₁(s) for Σd(n³).
//!
//! On the circle s_j = 1 + r·e(j/n) the trapezoid rule gives
//!
//!   Res = (1/n) Σ_j F(s_j)·(s_j − 1)/s_j · x^{s_j},
//!
//! so F(s_j)(s_j − 1)/s_j is cached once and each x costs n exponentials.

use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use super::euler_product::{log_g1_many, primes_for};
use super::stieltjes::stieltjes;
use crate::error::{Error, Result};
use crate::numeric::contour::Circle;
use crate::numeric::{exp_integral_e1, Complex128, ComplexSum};
use crate::zeta::{zeta_derivatives, zeta_em};

pub const DEFAULT_RADIUS: f64 = 0.25;
pub const DEFAULT_NODES: usize = 128;
/// Node doubling may move the residue by at most this, relatively.
pub const DOUBLING_TOLERANCE: f64 = 1e-8;
/// Prime bound for G₁ inside the residue engine.
pub const ENGINE_G1_PRIME_BOUND: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Series {
    D2,
    DCube,
}

impl Series {
    pub fn name(self) -> &'static str {
        match self {
            Series::D2 => "d2",
            Series::DCube => "d_cube",
        }
    }
}

/// Cached residue weights for one (series, radius, node count).
#[derive(Debug, Clone)]
pub struct ResidueEngine {
    series: Series,
    circle: Circle,
    /// F(s_j)(s_j − 1)/s_j
    weights: Vec<Complex128>,
}

fn dirichlet_series_values(series: Series, points: &[Complex128]) -> Result<Vec<Complex128>> {
    let mut log_g1 = Vec::new();
    if series == Series::DCube {
        let bound = ENGINE_G1_PRIME_BOUND;
        let primes = primes_for(bound);
        log_g1 = log_g1_many(points, &primes);
        // leading 2p^{-3s} part of the omitted primes, by the prime number theorem
        let lp = (bound as f64).ln();
        for (lg, &s) in log_g1.iter_mut().zip(points) {
            *lg += 2.0 * exp_integral_e1((3.0 * s - 1.0) * lp);
        }
    }
    points
        .iter()
        .enumerate()
        .map(|(j, &s)| {
            let z = zeta_em(s)?;
            let z2 = zeta_em(2.0 * s)?;
            let z4 = (z * z) * (z * z);
            Ok(match series {
                Series::D2 => z4 / z2,
                Series::DCube => z4 / (z2 * z2 * z2) * log_g1[j].exp(),
            })
        })
        .collect()
}

impl ResidueEngine {
    pub fn new(series: Series, radius: f64, nodes: usize) -> Result<Self> {
        if !(radius > 0.0 && radius < 0.5) {
            return Err(Error::InvalidInput(format!(
                "circle radius must lie in (0, 1/2), got {radius}"
            )));
        }
        if nodes < 8 {
            return Err(Error::InvalidInput(format!("need at least 8 nodes, got {nodes}")));
        }
        let circle = Circle::new(Complex128::new(1.0, 0.0), radius, nodes);
        let points = circle.points();
        let f = dirichlet_series_values(series, &points)?;
        let weights = f
            .iter()
            .zip(circle.offsets())
            .zip(&points)
            .map(|((&fv, w), &s)| fv * w / s)
            .collect();
        Ok(ResidueEngine {
            series,
            circle,
            weights,
        })
    }

    pub fn series(&self) -> Series {
        self.series
    }

    /// Residue at s = 1 of F(s)xˢ/s for real x > 0.
    pub fn residue(&self, x: f64) -> f64 {
        let l = x.ln();
        let sum: ComplexSum = self
            .weights
            .iter()
            .zip(self.circle.offsets())
            .map(|(&wt, w)| wt * (w * l).exp())
            .collect();
        x * sum.value().re / self.circle.nodes as f64
    }
}

/// Engines with the default radius at 128 and 256 nodes, shared per process.
fn default_engines(series: Series) -> Result<Arc<(ResidueEngine, ResidueEngine)>> {
    type Slot = Mutex<Option<Arc<(ResidueEngine, ResidueEngine)>>>;
    static D2: OnceLock<Slot> = OnceLock::new();
    static DCUBE: OnceLock<Slot> = OnceLock::new();
    let slot = match series {
        Series::D2 => D2.get_or_init(|| Mutex::new(None)),
        Series::DCube => DCUBE.get_or_init(|| Mutex::new(None)),
    };
    let mut guard = slot.lock().expect("engine cache poisoned");
    if let Some(e) = guard.as_ref() {
        return Ok(Arc::clone(e));
    }
    let pair = Arc::new((
        ResidueEngine::new(series, DEFAULT_RADIUS, DEFAULT_NODES)?,
        ResidueEngine::new(series, DEFAULT_RADIUS, 2 * DEFAULT_NODES)?,
    ));
    *guard = Some(Arc::clone(&pair));
    Ok(pair)
}

/// x·P(ln x) for Σd², or x·P₁(ln x) for Σd(n³), from the residue at s = 1.
pub fn residue_main_term(x: f64, series: Series) -> Result<f64> {
    if !(x.is_finite() && x >= 2.0) {
        return Err(Error::InvalidInput(format!("x must be >= 2, got {x}")));
    }
    let engines = default_engines(series)?;
    let coarse = engines.0.residue(x);
    let fine = engines.1.residue(x);
    if (coarse - fine).abs() > DOUBLING_TOLERANCE * fine.abs() {
        return Err(Error::Precision {
            message: format!(
                "node doubling moved the residue at x = {x} from {coarse} to {fine}"
            ),
            partial: Some(fine),
        });
    }
    Ok(coarse)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MainTermPoly {
    pub series: Series,
    /// (A, B, C, D) of P(y) = Ay³ + By² + Cy + D
    pub coeffs: [f64; 4],
    pub digits_valid: u32,
}

impl MainTermPoly {
    /// Horner evaluation of P(y).
    pub fn eval(&self, y: f64) -> f64 {
        let [a, b, c, d] = self.coeffs;
        ((a * y + b) * y + c) * y + d
    }

    /// x·P(ln x)
    pub fn main_term(&self, x: f64) -> f64 {
        x * self.eval(x.ln())
    }
}

/// (1/π², (12γ − 3)/π² − 36ζ′(2)/π⁴) from this crate's own γ and ζ′(2).
pub fn closed_form_ab() -> Result<(f64, f64)> {
    let pi2 = std::f64::consts::PI.powi(2);
    let gamma = stieltjes(0)?;
    let dz2 = zeta_derivatives(Complex128::new(2.0, 0.0), 1)?[1].re;
    Ok((1.0 / pi2, (12.0 * gamma - 3.0) / pi2 - 36.0 * dz2 / (pi2 * pi2)))
}

/// Fit sample points x = 10³, 10^{3.5}, …, 10⁸.
fn fit_points() -> Vec<f64> {
    (0..=10).map(|j| 10f64.powf(3.0 + 0.5 * j as f64)).collect()
}

/// Least-squares cubic through (ln x, residue/x) via Householder QR in the
/// scaled variable u = ln x / ln 10⁸.
fn fit_cubic(engine: &ResidueEngine) -> Result<[f64; 4]> {
    let xs = fit_points();
    let scale = 1e8f64.ln();
    let rows: Vec<[f64; 4]> = xs
        .iter()
        .map(|&x| {
            let u = x.ln() / scale;
            [u * u * u, u * u, u, 1.0]
        })
        .collect();
    let rhs: Vec<f64> = xs.iter().map(|&x| engine.residue(x) / x).collect();
    let sol = least_squares(rows, rhs)?;
    Ok([
        sol[0] / scale.powi(3),
        sol[1] / scale.powi(2),
        sol[2] / scale,
        sol[3],
    ])
}

fn least_squares(mut a: Vec<[f64; 4]>, mut b: Vec<f64>) -> Result<[f64; 4]> {
    let m = a.len();
    for col in 0..4 {
        let norm = (col..m).map(|i| a[i][col] * a[i][col]).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::precision("singular Vandermonde system"));
        }
        let alpha = if a[col][col] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (col..m).map(|i| a[i][col]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        for c in col..4 {
            let dot: f64 = (col..m).map(|i| v[i - col] * a[i][c]).sum();
            let f = 2.0 * dot / vnorm2;
            for i in col..m {
                a[i][c] -= f * v[i - col];
            }
        }
        let dot: f64 = (col..m).map(|i| v[i - col] * b[i]).sum();
        let f = 2.0 * dot / vnorm2;
        for i in col..m {
            b[i] -= f * v[i - col];
        }
    }
    let max_diag = (0..4).map(|i| a[i][i].abs()).fold(0.0, f64::max);
    let min_diag = (0..4).map(|i| a[i][i].abs()).fold(f64::INFINITY, f64::min);
    if min_diag < 1e-12 * max_diag {
        return Err(Error::precision(format!(
            "Vandermonde system ill-conditioned (diagonal ratio {:.3e})",
            min_diag / max_diag
        )));
    }
    let mut x = [0.0; 4];
    for i in (0..4).rev() {
        let s: f64 = (i + 1..4).map(|j| a[i][j] * x[j]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    Ok(x)
}

/// Cubic main-term polynomial, cross-checked between radii 1/4 and 1/3 and,
/// for Σd², against the closed forms of A and B.
pub fn main_term_coefficients(series: Series) -> Result<MainTermPoly> {
    let engines = default_engines(series)?;
    let primary = fit_cubic(&engines.0)?;
    let alt = fit_cubic(&ResidueEngine::new(series, 1.0 / 3.0, DEFAULT_NODES)?)?;
    let mut worst: f64 = 0.0;
    for (p, q) in primary.iter().zip(&alt) {
        worst = worst.max((p - q).abs() / p.abs().max(1e-300));
    }
    let digits_valid = if worst == 0.0 {
        15
    } else {
        (-worst.log10()).floor().clamp(0.0, 15.0) as u32
    };
    if series == Series::D2 {
        let (a, b) = closed_form_ab()?;
        if (primary[0] - a).abs() >= 1e-10 || (primary[1] - b).abs() >= 1e-8 {
            return Err(Error::precision(format!(
                "extracted A = {}, B = {} disagree with closed forms {a}, {b}",
                primary[0], primary[1]
            )));
        }
    }
    Ok(MainTermPoly {
        series,
        coeffs: primary,
        digits_valid,
    })
}
