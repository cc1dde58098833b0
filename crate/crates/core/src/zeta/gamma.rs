use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numeric::{ensure_finite, Complex128, BERNOULLI_OVER_FACTORIAL};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(s): Lanczos (g = 7, 9 terms) on Re s ≥ 1/2, reflection below.
pub fn complex_gamma(s: Complex128) -> Result<Complex128> {
    ensure_finite(s, "s")?;
    if s.im == 0.0 && s.re <= 0.0 && s.re == s.re.round() {
        return Err(Error::Pole(format!("Gamma has a pole at s = {}", s.re)));
    }
    Ok(gamma_unchecked(s))
}

fn gamma_unchecked(s: Complex128) -> Complex128 {
    if s.re < 0.5 {
        let sin = (s * PI).sin();
        return PI / (sin * gamma_unchecked(1.0 - s));
    }
    let z = s - 1.0;
    let mut x = Complex128::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    let log = (z + 0.5) * t.ln() - t;
    (2.0 * PI).sqrt() * log.exp() * x
}

/// ln Γ(z) on Re z > 0, continuous branch (Stirling after upward shift).
pub(crate) fn log_gamma(z: Complex128) -> Complex128 {
    debug_assert!(z.re > 0.0);
    let mut shift = Complex128::new(0.0, 0.0);
    let mut w = z;
    while w.norm() < 20.0 {
        shift += w.ln();
        w += 1.0;
    }
    let mut series = (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln();
    let w2 = w * w;
    let mut wp = w;
    // B_{2k}/((2k)(2k−1) w^{2k−1}) = (B_{2k}/(2k)!)·(2k−2)!/w^{2k−1}
    let mut fact = 1.0;
    for (k, &b) in BERNOULLI_OVER_FACTORIAL.iter().enumerate().take(10) {
        if k > 0 {
            let m = 2.0 * k as f64;
            fact *= (m - 1.0) * m;
        }
        series += b * fact / wp;
        wp *= w2;
    }
    series - shift
}
