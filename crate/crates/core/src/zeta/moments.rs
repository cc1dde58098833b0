//! Mean values of ζ on the critical line.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::euler_maclaurin::zeta_em;
use super::riemann_siegel::zeta_half_line;
use crate::arith::{sieve_multiplicative, SieveKind};
use crate::error::{Error, Result};
use crate::numeric::quad::{IntegralEstimate, PanelQuadrature};
use crate::numeric::{Complex128, ComplexSum};

pub const MOMENT_REL_TOL: f64 = 1e-4;
pub const MAX_HEIGHT: f64 = 1e5;

/// Initial panel width: a fraction of the oscillation scale 2π/ln(t/2π).
pub fn panel_width(t: f64) -> f64 {
    let l = t.ln();
    if l <= 0.0 {
        0.5
    } else {
        0.5f64.min(PI / l)
    }
}

fn check_height(t_max: f64) -> Result<()> {
    if !(2.0..=MAX_HEIGHT).contains(&t_max) {
        return Err(Error::InvalidInput(format!(
            "T must lie in [2, {MAX_HEIGHT}], got {t_max}"
        )));
    }
    Ok(())
}

fn half_line_abs(t: f64) -> f64 {
    zeta_half_line(t).expect("height validated").norm()
}

/// ∫_1^T |ζ(1/2+it)|⁴ dt.
pub fn fourth_moment(t_max: f64) -> Result<IntegralEstimate> {
    fourth_moment_with(t_max, 1.0)
}

/// As [`fourth_moment`], with every initial panel scaled by `width_scale`.
pub fn fourth_moment_with(t_max: f64, width_scale: f64) -> Result<IntegralEstimate> {
    check_height(t_max)?;
    let quad = PanelQuadrature {
        rel_tol: MOMENT_REL_TOL,
        ..Default::default()
    };
    quad.integrate_real(
        |t| half_line_abs(t).powi(4),
        1.0,
        t_max,
        |t| panel_width(t) * width_scale,
    )
}

/// ∫_1^T |ζ(1/2+it)|⁴ / |ζ(1+2it)|^k dt, with ζ(1+2it) from Euler–Maclaurin.
pub fn ratio_moment(t_max: f64, k: f64) -> Result<IntegralEstimate> {
    check_height(t_max)?;
    if !(0.0..=8.0).contains(&k) {
        return Err(Error::InvalidInput(format!("k must lie in [0, 8], got {k}")));
    }
    let quad = PanelQuadrature {
        rel_tol: MOMENT_REL_TOL,
        ..Default::default()
    };
    quad.integrate_real(
        |t| {
            let num = half_line_abs(t).powi(4);
            if k == 0.0 {
                return num;
            }
            let den = zeta_em(Complex128::new(1.0, 2.0 * t)).expect("height validated").norm();
            num / den.powf(k)
        },
        1.0,
        t_max,
        panel_width,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaplaceSample {
    /// ∫_0^{t_cut} e^{-zt} |ζ(1/2+it)|² dt
    pub lhs: Complex128,
    /// 2π e^{iz/2} Σ_{l≤l_cut} d(l) exp(2πi l e^{iz})
    pub main: Complex128,
    pub diff: Complex128,
}

const LAPLACE_TRUNCATION: f64 = 1e-8;

/// Truncation points meeting the 1e-8 targets for a given z.
pub fn laplace_cuts(z: Complex128) -> Result<(f64, usize)> {
    check_laplace_z(z)?;
    let target = -LAPLACE_TRUNCATION.ln();
    let t_cut = (target / z.re).ceil() + 1.0;
    let decay = 2.0 * PI * (Complex128::i() * z).exp().im;
    // generous margin for the d(l) growth of the series terms
    let l_cut = ((target + 10.0) / decay).ceil() as usize + 10;
    Ok((t_cut, l_cut))
}

fn check_laplace_z(z: Complex128) -> Result<()> {
    if !(z.re > 0.0) || z.norm() >= 0.2 {
        return Err(Error::InvalidInput(format!("need Re z > 0 and |z| < 0.2, got {z}")));
    }
    if (Complex128::i() * z).exp().im <= 0.0 {
        return Err(Error::Domain(format!("Im e^(iz) <= 0 at z = {z}: series diverges")));
    }
    Ok(())
}

pub fn laplace_check(z: Complex128, t_cut: f64, l_cut: usize) -> Result<LaplaceSample> {
    check_laplace_z(z)?;
    if (-z.re * t_cut).exp() >= LAPLACE_TRUNCATION {
        return Err(Error::InvalidInput(format!(
            "t_cut = {t_cut} too small: e^(-Re z t_cut) >= {LAPLACE_TRUNCATION}"
        )));
    }
    let w = (Complex128::i() * z).exp();
    if (-2.0 * PI * l_cut as f64 * w.im).exp() >= LAPLACE_TRUNCATION {
        return Err(Error::InvalidInput(format!(
            "l_cut = {l_cut} too small for z = {z}"
        )));
    }
    if t_cut > MAX_HEIGHT {
        return Err(Error::Resource(format!("t_cut = {t_cut} exceeds {MAX_HEIGHT}")));
    }

    let quad = PanelQuadrature {
        rel_tol: 1e-11,
        ..Default::default()
    };
    let lhs = quad
        .integrate(
            |t| (-z * t).exp() * zeta_half_line(t).expect("t >= 0").norm_sqr(),
            0.0,
            t_cut,
            panel_width,
        )?
        .value;

    let d = sieve_multiplicative(1, l_cut.max(1) as u64, SieveKind::D)?;
    let series: ComplexSum = d
        .counts()
        .expect("d table")
        .iter()
        .enumerate()
        .map(|(i, &dl)| {
            let l = (i + 1) as f64;
            (Complex128::new(0.0, 2.0 * PI * l) * w).exp() * dl as f64
        })
        .collect();
    let main = 2.0 * PI * (Complex128::i() * z * 0.5).exp() * series.value();
    Ok(LaplaceSample {
        lhs,
        main,
        diff: lhs - main,
    })
}
