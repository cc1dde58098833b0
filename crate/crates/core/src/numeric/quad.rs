//! Adaptive Gauss–Kronrod (7, 15) panel quadrature.
//!
//! The interval is first cut into panels whose width follows a caller-supplied
//! function of the left endpoint (so it can track the local oscillation scale),
//! then the panel with the largest error estimate is bisected until the global
//! estimate meets the tolerance. The final reduction runs in left-to-right
//! panel order with compensated summation, so results are bitwise reproducible
//! regardless of how panel evaluations are scheduled.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Complex128, ComplexSum, KahanSum};
use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralEstimate {
    pub value: f64,
    pub abs_err: f64,
    pub panels: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex128,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gk15<F: Fn(f64) -> Complex128>(f: &F, a: f64, b: f64) -> Panel {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let pair = f(c - dx) + f(c + dx);
        kron += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    Panel {
        a,
        b,
        value: kron * h,
        err: ((kron - gauss) * h).norm(),
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PanelQuadrature {
    /// Relative tolerance: stop when Σerr < tol·max(1, |value|).
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for PanelQuadrature {
    fn default() -> Self {
        PanelQuadrature {
            rel_tol: 1e-4,
            max_panels: 4_000_000,
        }
    }
}

/// Complex-valued result of [`PanelQuadrature::integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexEstimate {
    pub value: Complex128,
    pub abs_err: f64,
    pub panels: usize,
}

impl PanelQuadrature {
    /// ∫_a^b f, with initial panel width `width(t)` at left endpoint `t`.
    pub fn integrate<F, W>(&self, f: F, a: f64, b: f64, width: W) -> Result<ComplexEstimate>
    where
        F: Fn(f64) -> Complex128 + Sync,
        W: Fn(f64) -> f64,
    {
        if !(a.is_finite() && b.is_finite() && a <= b) {
            return Err(Error::InvalidInput(format!("bad interval [{a}, {b}]")));
        }
        let mut cuts = vec![a];
        let mut t = a;
        while t < b {
            let w = width(t);
            assert!(w > 0.0, "panel width must be positive");
            t = if t + w >= b - 1e-12 * w { b } else { t + w };
            cuts.push(t);
        }
        if cuts.len() - 1 > self.max_panels {
            return Err(Error::Resource(format!(
                "{} initial panels exceed cap {}",
                cuts.len() - 1,
                self.max_panels
            )));
        }
        let panels: Vec<Panel> = cuts
            .par_windows(2)
            .map(|w| gk15(&f, w[0], w[1]))
            .collect();

        let totals = |ps: &[Panel]| {
            let mut err = KahanSum::new();
            let v: ComplexSum = ps.iter().map(|p| p.value).collect();
            for p in ps {
                err.add(p.err);
            }
            (v.value(), err.value())
        };

        let (mut value, mut err) = totals(&panels);
        if err < self.rel_tol * value.norm().max(1.0) {
            return Ok(ComplexEstimate {
                value,
                abs_err: err,
                panels: panels.len(),
            });
        }

        let mut heap: BinaryHeap<Panel> = panels.into_iter().collect();
        while err >= self.rel_tol * value.norm().max(1.0) {
            if heap.len() >= self.max_panels {
                let (v, _) = totals(&heap.into_vec());
                return Err(Error::Precision {
                    message: format!("tolerance not met at panel cap {}", self.max_panels),
                    partial: Some(v.re),
                });
            }
            let worst = heap.pop().expect("non-empty");
            let mid = 0.5 * (worst.a + worst.b);
            let left = gk15(&f, worst.a, mid);
            let right = gk15(&f, mid, worst.b);
            value += left.value + right.value - worst.value;
            err += left.err + right.err - worst.err;
            heap.push(left);
            heap.push(right);
        }
        let mut panels = heap.into_vec();
        panels.sort_by(|x, y| x.a.total_cmp(&y.a));
        let (value, err) = totals(&panels);
        Ok(ComplexEstimate {
            value,
            abs_err: err,
            panels: panels.len(),
        })
    }

    /// Real-valued convenience wrapper.
    pub fn integrate_real<F, W>(&self, f: F, a: f64, b: f64, width: W) -> Result<IntegralEstimate>
    where
        F: Fn(f64) -> f64 + Sync,
        W: Fn(f64) -> f64,
    {
        let r = self.integrate(|t| Complex128::new(f(t), 0.0), a, b, width)?;
        Ok(IntegralEstimate {
            value: r.value.re,
            abs_err: r.abs_err,
            panels: r.panels,
        })
    }
}
