//! Property tests for residues, closed-form coefficients and spectra.

use std::f64::consts::PI;

use proptest::prelude::*;
use thermospec_core::geometry::MetricChart;
use thermospec_core::spectra::{
    disk_decoupled_spectrum, fd_heat_eigenvalues_exact, fd_spectrum, interval_spectrum, rectangle_decoupled_spectrum,
    torus_spectrum,
};
use thermospec_core::symbol::{decompose_trace, MaterialParams, Parametrix};
use thermospec_core::trace::{a1_coefficient, gaussian_xi_integral, image_integral, residue_heat};
use thermospec_core::{BcKind, Complex64};

/// `(1/2πi) ∮ f(τ) dτ` on a circle by the trapezoid rule, which converges
/// geometrically for analytic periodic integrands.
fn contour_integral(centre: f64, radius: f64, points: usize, f: impl Fn(Complex64) -> Complex64) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..points {
        let phase = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / points as f64);
        let tau = centre + radius * phase;
        // dτ = i r e^{iφ} dφ, and the 1/(2πi) cancels the i.
        sum += f(tau) * radius * phase;
    }
    sum / points as f64
}

fn decoupled(lambda_plus_mu: f64, mu: f64, alpha: f64) -> MaterialParams {
    MaterialParams::decoupled(lambda_plus_mu - mu, mu, alpha)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn residue_matches_contour_quadrature(
        rates in prop::collection::vec(0.2..4.0f64, 1..4),
        orders in prop::collection::vec(1u32..3, 3),
        q in 0.3..2.0f64,
        t in 0.05..2.0f64,
    ) {
        let poles: Vec<(f64, u32)> = rates.iter().zip(&orders).map(|(&c, &e)| (c, e)).collect();
        let locations: Vec<f64> = rates.iter().map(|c| c * q).collect();
        let lo = locations.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = locations.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let centre = 0.5 * (lo + hi);
        let radius = 0.5 * (hi - lo) + 1.0;
        let numeric = contour_integral(centre, radius, 4096, |tau| {
            poles.iter().fold((-t * tau).exp(), |acc, &(c, e)| {
                acc / (tau - c * q).powu(e)
            })
        });
        let r = residue_heat(&poles, q, t).unwrap();
        prop_assume!(!r.ill_conditioned);
        prop_assert!(numeric.im.abs() < 1e-9);
        prop_assert!((r.value - numeric.re).abs() <= 1e-8 * (1.0 + numeric.re.abs()), "{} vs {}", r.value, numeric.re);
    }

    #[test]
    fn trace_decomposition_matches_direct_trace(
        lambda_plus_mu in 0.0..2.0f64,
        mu in 0.5..2.0f64,
        alpha in 0.5..3.0f64,
        r in 0.3..0.9f64,
        phi in 0.0..6.0f64,
        xi in prop::collection::vec(-1.5..1.5f64, 2),
        tau_im in 0.5..4.0f64,
        l in 0usize..2,
    ) {
        let params = decoupled(lambda_plus_mu, mu, alpha);
        let chart = MetricChart::polar_disk(1.0);
        let p = Parametrix::new(&chart, params);
        let x = [r, phi];
        let q = xi[0] * xi[0] + xi[1] * xi[1] / (r * r);
        prop_assume!(q > 0.05);
        let rates = [mu, alpha, lambda_plus_mu + mu];
        let gap = rates.iter().flat_map(|a| rates.iter().map(move |b| (a - b).abs())).filter(|g| *g > 0.0).fold(f64::INFINITY, f64::min);
        prop_assume!(gap > 0.05 || gap.is_infinite());
        let d = decompose_trace(&p, l, &x, &xi).unwrap();
        let tau = Complex64::new(-0.7, tau_im);
        let direct = p.term(l, &x, &xi, tau).unwrap().trace();
        prop_assert!((d.eval(tau) - direct).norm() <= 1e-7 * (1.0 + direct.norm()));
    }

    #[test]
    fn dirichlet_and_neumann_boundary_terms_cancel(
        lambda_plus_mu in 0.0..3.0f64,
        mu in 0.1..3.0f64,
        alpha in 0.1..3.0f64,
        n in 1usize..5,
        area in 0.1..10.0f64,
    ) {
        let params = decoupled(lambda_plus_mu, mu, alpha);
        let d = a1_coefficient(&params, n, area, BcKind::Dirichlet).unwrap();
        let nm = a1_coefficient(&params, n, area, BcKind::Neumann).unwrap();
        prop_assert!(d < 0.0 && nm > 0.0);
        prop_assert!((d + nm).abs() <= 1e-15 * nm);
    }

    #[test]
    fn gaussian_integral_normalisation(n in 1usize..6, c in 0.01..10.0f64, t in 1e-4..10.0f64) {
        let v = gaussian_xi_integral(n, c, t) * (4.0 * PI * c * t).powf(n as f64 / 2.0);
        prop_assert!((v - 1.0).abs() <= 1e-13);
    }

    #[test]
    fn image_integral_decays_away_from_the_wall(
        n in 1usize..4,
        c in 0.1..3.0f64,
        t in 1e-3..1.0f64,
        x in 0.0..2.0f64,
        dx in 1e-3..1.0f64,
    ) {
        let near = image_integral(n, c, t, x);
        let far = image_integral(n, c, t, x + dx);
        prop_assert!(far <= near);
        prop_assert!(near <= gaussian_xi_integral(n, c, t) * (1.0 + 1e-15));
    }

    #[test]
    fn torus_counts_match_brute_force(
        l1 in 1.0..3.0f64,
        l2 in 1.0..3.0f64,
        mu in 0.5..2.0f64,
        alpha in 0.5..2.0f64,
        tau in 5.0..200.0f64,
    ) {
        let params = decoupled(1.0, mu, alpha);
        let sample = torus_spectrum(&params, &[l1, l2], 250.0).unwrap();
        let rates = [mu, alpha, 1.0 + mu];
        let mut brute = 0usize;
        let bound = 60i64;
        for j in -bound..=bound {
            for k in -bound..=bound {
                let q = (2.0 * PI * j as f64 / l1).powi(2) + (2.0 * PI * k as f64 / l2).powi(2);
                brute += rates.iter().filter(|&&c| c * q <= tau).count();
            }
        }
        // Skip levels sitting on a lattice value, where rounding decides.
        let near_level = sample.values().iter().any(|v| (v - tau).abs() < 1e-9 * tau);
        prop_assume!(!near_level);
        prop_assert_eq!(sample.count_at(tau), brute);
    }

    #[test]
    fn dirichlet_eigenvalues_dominate_neumann(
        a in 0.5..2.0f64,
        b in 0.5..2.0f64,
        mu in 0.5..2.0f64,
        alpha in 0.5..2.0f64,
    ) {
        let params = decoupled(0.0, mu, alpha);
        let cutoff = 400.0;
        let d = rectangle_decoupled_spectrum(&params, a, b, BcKind::Dirichlet, cutoff).unwrap().expanded();
        let nm = rectangle_decoupled_spectrum(&params, a, b, BcKind::Neumann, cutoff).unwrap().expanded();
        prop_assert!(d.len() <= nm.len());
        for (dk, nk) in d.iter().zip(&nm) {
            prop_assert!(dk >= nk);
        }
        let params = decoupled(0.7, mu, alpha);
        let d = interval_spectrum(&params, a, BcKind::Dirichlet, cutoff).unwrap().expanded();
        let nm = interval_spectrum(&params, a, BcKind::Neumann, cutoff).unwrap().expanded();
        for (dk, nk) in d.iter().zip(&nm) {
            prop_assert!(dk >= nk);
        }
    }

    #[test]
    fn eigenvalues_scale_inversely_with_area(s in 0.3..3.0f64, l in 0.5..2.0f64, bc in prop::bool::ANY) {
        let bc = if bc { BcKind::Dirichlet } else { BcKind::Neumann };
        let params = decoupled(1.0, 1.0, 1.5);
        let base = interval_spectrum(&params, l, bc, 500.0).unwrap();
        let scaled = interval_spectrum(&params, s * l, bc, 500.0 / (s * s)).unwrap();
        prop_assert_eq!(base.multiplicities(), scaled.multiplicities());
        for (v, w) in base.values().iter().zip(scaled.values()) {
            prop_assert!((w * s * s - v).abs() <= 1e-12 * v.max(1.0));
        }
        let base = rectangle_decoupled_spectrum(&params_shear(), l, 1.0, bc, 300.0).unwrap();
        let scaled = rectangle_decoupled_spectrum(&params_shear(), s * l, s, bc, 300.0 / (s * s)).unwrap();
        prop_assert_eq!(base.total_count(), scaled.total_count());
        for (v, w) in base.expanded().iter().zip(scaled.expanded()) {
            prop_assert!((w * s * s - v).abs() <= 1e-10 * v.max(1.0));
        }
    }

    #[test]
    fn heat_trace_is_completely_monotone(t in 1e-3..0.5f64, dt in 1e-3..0.05f64) {
        let params = decoupled(0.0, 1.0, 1.0);
        let sample = rectangle_decoupled_spectrum(&params, 1.0, 1.3, BcKind::Neumann, 2e4).unwrap();
        let h = |s: f64| sample.heat_trace_unguarded(s);
        let d1 = h(t + dt) - h(t);
        let d2 = h(t + 2.0 * dt) - 2.0 * h(t + dt) + h(t);
        let d3 = h(t + 3.0 * dt) - 3.0 * h(t + 2.0 * dt) + 3.0 * h(t + dt) - h(t);
        let scale = h(t) * 1e-12;
        prop_assert!(d1 <= scale);
        prop_assert!(d2 >= -scale);
        prop_assert!(d3 <= scale);
    }
}

fn params_shear() -> MaterialParams {
    decoupled(0.0, 1.2, 0.8)
}

#[test]
fn disk_dirichlet_dominates_neumann() {
    let params = decoupled(0.0, 1.0, 1.0);
    let d = disk_decoupled_spectrum(&params, 1.0, BcKind::Dirichlet, 800.0).unwrap().expanded();
    let n = disk_decoupled_spectrum(&params, 1.0, BcKind::Neumann, 800.0).unwrap().expanded();
    assert!(d.len() < n.len());
    assert!(d.iter().zip(&n).all(|(a, b)| a >= b));
}

#[test]
fn finite_difference_error_is_second_order() {
    // Lowest eigenvalues of the assembled blocks against 2π²c on the unit square.
    let params = decoupled(0.0, 1.0, 1.7);
    let runs: Vec<_> = [0.1, 0.05, 0.025]
        .iter()
        .map(|&h| fd_spectrum(&params, 1.0, 1.0, h, BcKind::Dirichlet).unwrap())
        .collect();
    let exact = 2.0 * PI * PI;
    let heat: Vec<f64> = runs.iter().map(|r| (r.heat[0] - 1.7 * exact).abs()).collect();
    let elastic: Vec<f64> = runs.iter().map(|r| (r.elastic[0] - exact).abs()).collect();
    for errors in [heat, elastic] {
        for pair in errors.windows(2) {
            let ratio = pair[0] / pair[1];
            assert!((3.8..4.2).contains(&ratio), "error ratio {ratio}");
        }
    }
    // The heat block agrees with the separable discrete formula.
    let formula = fd_heat_eigenvalues_exact(1.7, 1.0, 1.0, 0.05).unwrap();
    for (a, b) in runs[1].heat.iter().zip(&formula).take(50) {
        assert!((a - b).abs() <= 1e-9 * b);
    }
}
