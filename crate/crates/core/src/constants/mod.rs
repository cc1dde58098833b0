//! Main-term polynomials, Stieltjes constants and error-term scans.

mod euler_product;
mod main_term;
mod scan;
mod stieltjes;

pub use euler_product::{
    euler_product_g1, EulerProduct, DEFAULT_G1_PRIME_BOUND, MAX_G1_PRIME_BOUND,
};
pub use main_term::{
    closed_form_ab, main_term_coefficients, residue_main_term, MainTermPoly, ResidueEngine,
    Series, DEFAULT_NODES, DEFAULT_RADIUS, DOUBLING_TOLERANCE, ENGINE_G1_PRIME_BOUND,
};
pub use scan::{
    error_term, geometric_grid, scan_error_term, scan_error_term_with_checkpoint, ScanOutcome,
    ScanRow,
};
pub use stieltjes::{euler_gamma_from_laurent, stieltjes, MAX_STIELTJES_ORDER};
