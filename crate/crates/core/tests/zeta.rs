use std::f64::consts::PI;

use mslab_core::zeta::*;
use mslab_core::{Complex128, Error};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex128 {
    Complex128::new(re, im)
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config(100))]

    #[test]
    fn functional_equation(re in 0.01f64..0.99, im in -50.0f64..50.0) {
        let s = c(re, im);
        let one = c(1.0, 0.0);
        let chi = (s * 2f64.ln()).exp()
            * ((s - 1.0) * PI.ln()).exp()
            * (s * PI / 2.0).sin()
            * complex_gamma(one - s).unwrap();
        let z = zeta_em(s).unwrap();
        let r = (z - chi * zeta_em(one - s).unwrap()).norm() / (z.norm() + 1.0);
        prop_assert!(r < 1e-8, "residual {r:e} at {s}");
    }

    /// ζ(s, a) + ζ(s, a + 1/2) = 2^s ζ(s, 2a) for 0 < a ≤ 1/2, which is the
    /// shift a ↦ a + 1 applied to the half-step lattice.
    #[test]
    fn hurwitz_duplication(re in -2.0f64..3.0, im in -30.0f64..30.0, a in 0.01f64..=0.5) {
        let s = c(re, im);
        prop_assume!((s - 1.0).norm() > 1e-3);
        let lhs = hurwitz(s, a).unwrap() + hurwitz(s, a + 0.5).unwrap();
        let rhs = (s * 2f64.ln()).exp() * hurwitz(s, 2.0 * a).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * rhs.norm().max(1.0), "{lhs} vs {rhs}");
    }

    #[test]
    fn hurwitz_at_one_is_zeta(re in -2.0f64..3.0, im in -30.0f64..30.0) {
        let s = c(re, im);
        prop_assume!((s - 1.0).norm() > 1e-3);
        prop_assert_eq!(hurwitz(s, 1.0).unwrap(), zeta_em(s).unwrap());
    }

    #[test]
    fn schwarz_reflection(re in -3.0f64..4.0, im in -1e3f64..1e3) {
        let s = c(re, im);
        prop_assume!(s != c(1.0, 0.0));
        prop_assert_eq!(zeta_em(s.conj()).unwrap(), zeta_em(s).unwrap().conj());
    }

    #[test]
    fn prime_sum_exponentiates_to_zeta(re in 1.5f64..4.0, im in -20.0f64..20.0) {
        let s = c(re, im);
        let z = zeta_em(s).unwrap();
        prop_assert!((log_zeta_prime_sum(s).unwrap().exp() - z).norm() < 1e-8 * z.norm());
    }
}

/// ζ(s, 1/2) = (2^s − 1) ζ(s).
#[test]
fn hurwitz_half() {
    for s in [c(0.5, 14.0), c(2.0, 0.0), c(-1.5, 3.0)] {
        let lhs = hurwitz(s, 0.5).unwrap();
        let rhs = ((s * 2f64.ln()).exp() - 1.0) * zeta_em(s).unwrap();
        assert!((lhs - rhs).norm() < 1e-10 * rhs.norm(), "{s}: {lhs} vs {rhs}");
    }
}

#[test]
fn known_values() {
    assert!((zeta_em(c(2.0, 0.0)).unwrap().re - PI * PI / 6.0).abs() < 1e-14);
    assert!((zeta_em(c(0.0, 0.0)).unwrap().re + 0.5).abs() < 1e-14);
    // first nontrivial zero
    assert!(zeta_em(c(0.5, 14.134725141734693)).unwrap().norm() < 1e-12);
    assert!(matches!(zeta_em(c(1.0, 0.0)), Err(Error::Pole(_))));
}

#[test]
fn riemann_siegel_agrees_with_euler_maclaurin() {
    for t in [CROSSOVER, 40.0, 100.0, 1000.5, 5000.25] {
        let rs = zeta_half_line(t).unwrap();
        let em = zeta_em(c(0.5, t)).unwrap();
        assert!((rs - em).norm() < 1e-6, "t = {t}: {rs} vs {em}");
    }
}

#[test]
fn fourth_moment_panel_doubling() {
    for t in [200.0, 1000.0] {
        let coarse = fourth_moment(t).unwrap();
        let fine = fourth_moment_with(t, 0.5).unwrap();
        let moved = (coarse.value - fine.value).abs();
        assert!(moved < 10.0 * coarse.abs_err.max(fine.abs_err), "T = {t}: moved {moved:e}");
    }
}

#[test]
fn fourth_moment_monotone_and_positive() {
    let v: Vec<f64> = [2.0, 50.0, 100.0, 400.0]
        .iter()
        .map(|&t| fourth_moment(t).unwrap().value)
        .collect();
    assert!(v[0] > 0.0);
    assert!(v.windows(2).all(|w| w[0] < w[1]), "{v:?}");
    assert!(fourth_moment(1.5).is_err());
    assert!(fourth_moment(2e5).is_err());
}

#[test]
fn mollifier_cutoff_from_height_exceeds_guard() {
    let p = MollifierParams::from_height(1e3, EPSILON);
    let p = p.and_then(Mollifier::new);
    assert!(matches!(p, Err(Error::Resource(_))), "{p:?}");
}

fn deviations(x: f64) -> Vec<f64> {
    let m = Mollifier::new(MollifierParams::new(x, 1e3, EPSILON).unwrap()).unwrap();
    let mut d: Vec<f64> = (0..200)
        .map(|i| {
            let t = 1e3 + 1e3 * (i as f64 + 0.5) / 200.0;
            (m.eval(t).unwrap() - zeta_em(c(1.0, t)).unwrap().inv()).norm()
        })
        .collect();
    d.sort_by(f64::total_cmp);
    d
}

/// The height-derived cutoff is far past the guard, so the bound is checked at
/// cutoffs that fit, where it should hold with room to spare.
#[test]
fn mollifier_at_feasible_cutoff() {
    let small = deviations(1e4);
    let large = deviations(1e5);
    assert!(large[199] <= 5.0);
    assert!(small[199] <= 5.0);
    assert!(large[100] < small[100], "median should shrink with X");
}
