//! Divisor-function sums, ζ on and near the critical line, and Estermann
//! functions.

pub mod arith;
pub mod constants;
pub mod error;
pub mod estermann;
pub mod numeric;
pub mod zeta;

pub use error::{Error, Result};
pub use numeric::Complex128;
