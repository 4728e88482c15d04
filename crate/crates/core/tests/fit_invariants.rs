//! Fitting, geometry recovery and rigidity properties.

use proptest::prelude::*;
use thermospec_core::fit::{fit_expansion, recover_from_coefficients, recover_geometry, rigidity_check};
use thermospec_core::spectra::{interval_spectrum, rectangle_decoupled_spectrum};
use thermospec_core::{BcKind, HeatCoefficients, MaterialParams};

fn decoupled(lambda_plus_mu: f64, mu: f64, alpha: f64) -> MaterialParams {
    MaterialParams::decoupled(lambda_plus_mu - mu, mu, alpha)
}

fn bc_strategy() -> impl Strategy<Value = BcKind> {
    prop::bool::ANY.prop_map(|d| if d { BcKind::Dirichlet } else { BcKind::Neumann })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closed_form_coefficients_round_trip(
        lambda_plus_mu in 0.0..3.0f64,
        mu in 0.1..3.0f64,
        alpha in 0.1..3.0f64,
        n in 1usize..5,
        vol in 0.1..10.0f64,
        area in 0.1..10.0f64,
        bc in bc_strategy(),
    ) {
        let params = decoupled(lambda_plus_mu, mu, alpha);
        let c = HeatCoefficients::closed_form(&params, n, vol, area).unwrap();
        let (v, s) = recover_from_coefficients(c.a0, c.a1(bc), &params, n).unwrap();
        prop_assert!((v - vol).abs() <= 1e-12 * vol);
        prop_assert!((s - area).abs() <= 1e-12 * area);
    }

    #[test]
    fn rigidity_ratio_is_scale_invariant(
        vol in 0.1..10.0f64,
        area in 0.1..10.0f64,
        n in 1usize..5,
        s in 0.1..10.0f64,
    ) {
        let base = rigidity_check(vol, area, n, 0.01).unwrap();
        let scaled = rigidity_check(vol * s.powi(n as i32), area * s.powi(n as i32 - 1), n, 0.01).unwrap();
        prop_assert!((base.ratio - scaled.ratio).abs() <= 1e-11 * base.ratio);
        prop_assert_eq!(base.is_ball, scaled.is_ball);
    }
}

proptest! {
    // Each case fits a full spectrum, so fewer cases.
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn interval_fit_is_consistent_with_its_bound(
        length in 1.0..4.0f64,
        lambda_plus_mu in 0.2..2.0f64,
        alpha in 0.3..2.0f64,
        bc in bc_strategy(),
    ) {
        let params = decoupled(lambda_plus_mu, 1.0, alpha);
        let sample = interval_spectrum(&params, length, bc, 1e4).unwrap();
        let fit = fit_expansion(&sample, 1, 3).unwrap();
        let exact = HeatCoefficients::closed_form(&params, 1, length, 2.0).unwrap();
        let delta = fit.compare(&exact);
        // The bound covers the degree change and the noise of a0.
        prop_assert!((fit.a0() - exact.a0).abs() <= fit.a0_bound.max(1e-10 * exact.a0));
        prop_assert!(delta.a0_relative <= 1e-5, "{:?}", delta);
        // Sign law: a1 < 0 under Dirichlet and > 0 under Neumann.
        prop_assert_eq!(fit.a1().signum(), bc.sign());
        let geometry = recover_geometry(&fit, &params, 1, bc).unwrap();
        prop_assert!(geometry.sign_consistent);
        prop_assert!((geometry.vol - length).abs() <= 1e-5 * length);
    }

    #[test]
    fn rectangle_fit_obeys_the_sign_law(
        a in 0.6..1.6f64,
        b in 0.6..1.6f64,
        bc in bc_strategy(),
    ) {
        let params = decoupled(0.0, 1.0, 1.0);
        let sample = rectangle_decoupled_spectrum(&params, a, b, bc, 1e4).unwrap();
        let fit = fit_expansion(&sample, 2, 3).unwrap();
        let exact = HeatCoefficients::closed_form(&params, 2, a * b, 2.0 * (a + b)).unwrap();
        prop_assert_eq!(fit.a1().signum(), bc.sign());
        let delta = fit.compare(&exact);
        prop_assert!(delta.a0_relative <= 1e-3, "{:?}", delta);
        prop_assert!(delta.a1_relative <= 1e-2, "{:?}", delta);
    }
}

#[test]
fn rectangle_is_not_a_ball_but_the_disk_is() {
    let square = rigidity_check(1.0, 4.0, 2, 0.01).unwrap();
    assert!(!square.is_ball);
    assert!((square.ratio - 4.0 / std::f64::consts::PI).abs() < 1e-12);
    let disk = rigidity_check(std::f64::consts::PI, 2.0 * std::f64::consts::PI, 2, 0.01).unwrap();
    assert!(disk.is_ball);
    assert!((disk.radius - 1.0).abs() < 1e-12);
}
