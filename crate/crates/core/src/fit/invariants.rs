use alloc::vec::Vec;

use super::{FitError, FitReport};
use crate::geometry::gauss_legendre;
use crate::math::{powf, powi, sin, sqrt, unit_ball_volume, PI};
use crate::spectra::{DomainSpec, SpectrumSample};
use crate::symbol::MaterialParams;
use crate::trace::{weyl_prediction, BcKind};

pub const DEFAULT_RIGIDITY_TOL: f64 = 0.01;
const WEYL_BAND: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct WeylPoint {
    pub tau: f64,
    pub count: usize,
    pub prediction: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct WeylReport {
    pub points: Vec<WeylPoint>,
    pub terminal_ratio: f64,
    /// Largest grid `τ` with `|ratio − 1| > 2%`.
    pub last_excursion: Option<f64>,
}

/// `N(τ)/prediction(τ)` on `points` equally spaced values up to
/// `min(tau_max, cutoff)`.
pub fn weyl_check(sample: &SpectrumSample, params: &MaterialParams, domain: &DomainSpec, tau_max: f64, points: usize) -> WeylReport {
    let top = tau_max.min(sample.cutoff());
    let points = points.max(1);
    let grid: Vec<WeylPoint> = (1..=points)
        .map(|k| {
            let tau = top * k as f64 / points as f64;
            let count = sample.count_at(tau);
            let prediction = weyl_prediction(params, domain.dim(), domain.vol(), tau);
            WeylPoint {
                tau,
                count,
                prediction,
                ratio: count as f64 / prediction,
            }
        })
        .collect();
    let last_excursion = grid
        .iter()
        .rev()
        .find(|p| (p.ratio - 1.0).abs() > WEYL_BAND)
        .map(|p| p.tau);
    WeylReport {
        terminal_ratio: grid.last().map_or(f64::NAN, |p| p.ratio),
        points: grid,
        last_excursion,
    }
}

/// Volume and boundary volume read off `a₀`, `a₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RecoveredGeometry {
    pub vol: f64,
    pub vol_boundary: f64,
    /// `a₁` has the sign required by the boundary condition.
    pub sign_consistent: bool,
}

/// `vol = a₀(4π)^{n/2}/Σ_n`, `vol∂ = 4|a₁|(4π)^{(n−1)/2}/Σ_{n−1}`.
pub fn recover_from_coefficients(a0: f64, a1: f64, params: &MaterialParams, n: usize) -> Result<(f64, f64), FitError> {
    params.validate()?;
    if n == 0 {
        return Err(FitError::InvalidArgument("dimension must be positive"));
    }
    let vol = a0 * powf(4.0 * PI, n as f64 / 2.0) / params.channel_sum(n, n);
    let vol_boundary = 4.0 * a1.abs() * powf(4.0 * PI, (n - 1) as f64 / 2.0) / params.channel_sum(n, n - 1);
    Ok((vol, vol_boundary))
}

pub fn recover_geometry(fit: &FitReport, params: &MaterialParams, n: usize, bc: BcKind) -> Result<RecoveredGeometry, FitError> {
    let (vol, vol_boundary) = recover_from_coefficients(fit.a0(), fit.a1(), params, n)?;
    Ok(RecoveredGeometry {
        vol,
        vol_boundary,
        sign_consistent: fit.a1() * bc.sign() > 0.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RigidityVerdict {
    pub is_ball: bool,
    /// `S^n / (n^n ω_n V^{n−1})`, equal to one exactly for balls.
    pub ratio: f64,
    /// Radius of the ball with volume `V`.
    pub radius: f64,
    pub tolerance: f64,
}

/// Euclidean isoperimetric equality test.
pub fn rigidity_check(vol: f64, vol_boundary: f64, n: usize, tolerance: f64) -> Result<RigidityVerdict, FitError> {
    if !(vol > 0.0 && vol_boundary > 0.0 && vol.is_finite() && vol_boundary.is_finite()) {
        return Err(FitError::InvalidArgument("volume and boundary volume must be positive"));
    }
    if n == 0 || !(tolerance >= 0.0) {
        return Err(FitError::InvalidArgument("dimension must be positive and tolerance nonnegative"));
    }
    let omega = unit_ball_volume(n);
    // (S/(nω_n))^n / (V/ω_n)^{n−1} avoids overflowing the raw powers.
    let s = vol_boundary / (n as f64 * omega);
    let v = vol / omega;
    let ratio = powi(s, n as i32) / powi(v, n as i32 - 1);
    Ok(RigidityVerdict {
        is_ball: (ratio - 1.0).abs() <= tolerance,
        ratio,
        radius: powf(v, 1.0 / n as f64),
        tolerance,
    })
}

/// Perimeter `4a ∫₀^{π/2} √(1 − e² sin²θ) dθ` of the ellipse with semiaxes
/// `a`, `b`.
pub fn ellipse_perimeter(a: f64, b: f64) -> f64 {
    let (a, b) = if a >= b { (a, b) } else { (b, a) };
    let e2 = 1.0 - (b / a) * (b / a);
    let (nodes, weights) = gauss_legendre(64);
    let half = PI / 4.0;
    let integral: f64 = nodes
        .iter()
        .zip(&weights)
        .map(|(x, w)| {
            let s = sin(half * (x + 1.0));
            w * sqrt(1.0 - e2 * s * s)
        })
        .sum();
    4.0 * a * half * integral
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::{a0_coefficient, a1_coefficient};

    #[test]
    fn round_trip() {
        let p = MaterialParams::decoupled(0.3, 1.2, 0.7);
        for n in 1..=3 {
            let a0 = a0_coefficient(&p, n, 2.5).unwrap();
            let a1 = a1_coefficient(&p, n, 4.0, BcKind::Dirichlet).unwrap();
            let (v, s) = recover_from_coefficients(a0, a1, &p, n).unwrap();
            assert!((v - 2.5).abs() < 1e-12 * 2.5);
            assert!((s - 4.0).abs() < 1e-12 * 4.0);
        }
    }

    #[test]
    fn balls_and_ellipse() {
        let disk = rigidity_check(PI, 2.0 * PI, 2, 0.01).unwrap();
        assert!(disk.is_ball && (disk.radius - 1.0).abs() < 1e-12);
        let ball = rigidity_check(4.0 * PI / 3.0, 4.0 * PI, 3, 0.01).unwrap();
        assert!(ball.is_ball && (ball.ratio - 1.0).abs() < 1e-12);
        let per = ellipse_perimeter(2.0, 0.5);
        let h = (1.5f64 / 2.5).powi(2);
        let ramanujan = PI * 2.5 * (1.0 + 3.0 * h / (10.0 + sqrt(4.0 - 3.0 * h)));
        assert!((per - ramanujan).abs() < 1e-3 * per);
        let e = rigidity_check(PI, per, 2, 0.01).unwrap();
        assert!(!e.is_ball);
        assert!((e.ratio - 1.864).abs() < 2e-3);
        assert!(rigidity_check(0.0, 1.0, 2, 0.01).is_err());
    }

    #[test]
    fn circle_perimeter() {
        assert!((ellipse_perimeter(3.0, 3.0) - 6.0 * PI).abs() < 1e-12);
    }
}
