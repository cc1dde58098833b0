//! Complex evaluation of ζ(s), ζ(s, a), Γ(s) and the mean-value integrals
//! built on them.

mod euler_maclaurin;
mod gamma;
mod mollifier;
mod moments;
mod prime_sum;
mod riemann_siegel;

pub use euler_maclaurin::{hurwitz, zeta_derivatives, zeta_em, MAX_IMAG};
pub use gamma::complex_gamma;
pub use mollifier::{inv_zeta_mollified, Mollifier, MollifierParams, EPSILON, MAX_CUTOFF};
pub use moments::{
    fourth_moment, fourth_moment_with, laplace_check, laplace_cuts, panel_width, ratio_moment,
    LaplaceSample, MAX_HEIGHT, MOMENT_REL_TOL,
};
pub use prime_sum::{
    log_zeta_prime_sum, log_zeta_prime_sum_detailed, PrimeSumEstimate, DEFAULT_PRIME_CUTOFF,
};
pub use riemann_siegel::{hardy_z_rs, rs_theta, zeta_half_line, CROSSOVER};

pub use crate::numeric::quad::IntegralEstimate;
pub use crate::numeric::Complex128;

