//! Trapezoidal rule on a circle. For f holomorphic in an annulus around the
//! circle the rule converges geometrically, so Laurent coefficients come out
//! to near machine precision with a few hundred nodes.

use super::{unit, Complex128, ComplexSum};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: Complex128,
    pub radius: f64,
    pub nodes: usize,
}

impl Circle {
    pub fn new(center: Complex128, radius: f64, nodes: usize) -> Self {
        Circle {
            center,
            radius,
            nodes,
        }
    }

    /// Offsets `s_j − center = r·e(j/n)`.
    pub fn offsets(&self) -> Vec<Complex128> {
        (0..self.nodes)
            .map(|j| unit(j as f64 / self.nodes as f64) * self.radius)
            .collect()
    }

    pub fn points(&self) -> Vec<Complex128> {
        self.offsets().into_iter().map(|w| self.center + w).collect()
    }

    /// Coefficient of `(s − center)^m` in the Laurent expansion, from samples
    /// of f at [`Circle::points`]: the mean of `f(s_j)·(s_j − center)^{−m}`.
    pub fn laurent_coefficient(&self, values: &[Complex128], m: i32) -> Complex128 {
        assert_eq!(values.len(), self.nodes);
        let sum: ComplexSum = self
            .offsets()
            .into_iter()
            .zip(values)
            .map(|(w, &f)| f * w.powi(-m))
            .collect();
        sum.value() / self.nodes as f64
    }
}
