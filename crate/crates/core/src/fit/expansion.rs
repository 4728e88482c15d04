use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use super::FitError;
use crate::math::{ln, powf, powi, sqrt};
use crate::spectra::{SpectrumSample, TAIL_TOLERANCE};
use crate::trace::{BcKind, HeatCoefficients};

pub const DEFAULT_DEGREE: usize = 3;
pub const DEFAULT_POINTS: usize = 40;
/// Condition number above which coefficients beyond `a₁` are untrusted.
pub const CONDITION_LIMIT: f64 = 1e12;
/// For a finite operator the window starts at `FINITE_T_MIN / λ_max`.
const FINITE_T_MIN: f64 = 50.0;
/// The window never extends past `WINDOW_CAP / λ₁` (first positive value).
const WINDOW_CAP: f64 = 0.5;
const SHRINK: f64 = 0.8;

/// Fitting interval in `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Window {
    pub t_min: f64,
    pub t_max: f64,
}

impl Window {
    pub fn new(t_min: f64, t_max: f64) -> Result<Self, FitError> {
        if !(t_min > 0.0 && t_max > t_min && t_max.is_finite()) {
            return Err(FitError::InvalidArgument("window needs 0 < t_min < t_max"));
        }
        Ok(Self { t_min, t_max })
    }

    /// `points` geometrically spaced values from `t_min` to `t_max`.
    pub fn grid(&self, points: usize) -> Vec<f64> {
        if points == 1 {
            return alloc::vec![self.t_min];
        }
        let ratio = self.t_max / self.t_min;
        (0..points)
            .map(|i| match i {
                0 => self.t_min,
                _ if i == points - 1 => self.t_max,
                _ => self.t_min * powf(ratio, i as f64 / (points - 1) as f64),
            })
            .collect()
    }

    pub fn ratio(&self) -> f64 {
        self.t_max / self.t_min
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub degree: usize,
    pub points: usize,
    /// Relative residual above which the window is shrunk.
    pub residual_tol: f64,
    /// Smallest admissible `t_max / t_min`.
    pub min_ratio: f64,
    /// The first omitted term must stay below this fraction of `a₀`.
    pub pilot_fraction: f64,
    /// Fixed window; skips the automatic choice.
    pub window: Option<Window>,
    /// Evaluate the heat trace below the tail guard.
    pub override_tail_guard: bool,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            degree: DEFAULT_DEGREE,
            points: DEFAULT_POINTS,
            residual_tol: 1e-6,
            min_ratio: 3.0,
            pilot_fraction: 0.01,
            window: None,
            override_tail_guard: false,
        }
    }
}

/// Coefficients of `h(t) t^{n/2} ≈ Σ_k a_k t^{k/2}` over a window.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct FitReport {
    pub n: usize,
    pub degree: usize,
    /// `a₀, a₁, …, a_d`.
    pub coefficients: Vec<f64>,
    pub window: Window,
    pub points: usize,
    /// Euclidean norm of the residual vector.
    pub residual_norm: f64,
    /// Residual norm over data norm.
    pub relative_residual: f64,
    /// 2-norm condition number of the column-scaled design matrix.
    pub condition: f64,
    pub ill_conditioned: bool,
    /// Change of `a₀` under one more degree plus its standard error.
    pub a0_bound: f64,
    pub bc: Option<BcKind>,
}

/// Differences between fitted and closed-form coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct FitDelta {
    pub a0_expected: f64,
    pub a1_expected: f64,
    pub a0_relative: f64,
    pub a1_absolute: f64,
    pub a1_relative: f64,
}

impl FitReport {
    pub fn a0(&self) -> f64 {
        self.coefficients[0]
    }

    pub fn a1(&self) -> f64 {
        self.coefficients[1]
    }

    /// `a₂, …, a_d`.
    pub fn higher(&self) -> &[f64] {
        &self.coefficients[2..]
    }

    /// Number of leading coefficients that are trusted.
    pub fn trusted(&self) -> usize {
        if self.ill_conditioned {
            2
        } else {
            self.coefficients.len()
        }
    }

    pub fn compare(&self, exact: &HeatCoefficients) -> FitDelta {
        let a1 = exact.a1(self.bc.unwrap_or(BcKind::Dirichlet));
        let d1 = (self.a1() - a1).abs();
        FitDelta {
            a0_expected: exact.a0,
            a1_expected: a1,
            a0_relative: (self.a0() - exact.a0).abs() / exact.a0.abs(),
            a1_absolute: d1,
            a1_relative: if a1 == 0.0 { d1 } else { d1 / a1.abs() },
        }
    }
}

struct Lsq {
    coef: Vec<f64>,
    residual_norm: f64,
    data_norm: f64,
    condition: f64,
    a0_sigma: f64,
}

/// Least squares of `ys` against `Σ_j c_j s^j`, `s = √t`, via QR on the
/// column-equilibrated Vandermonde matrix.
fn polyfit(ts: &[f64], ys: &[f64], degree: usize) -> Result<Lsq, FitError> {
    let m = ts.len();
    let p = degree + 1;
    if m < p {
        return Err(FitError::InvalidArgument("fewer points than coefficients"));
    }
    let mut a = DMatrix::<f64>::from_fn(m, p, |i, j| powi(sqrt(ts[i]), j as i32));
    let mut scale = Vec::with_capacity(p);
    for j in 0..p {
        let norm = a.column(j).norm();
        scale.push(norm);
        a.column_mut(j).scale_mut(1.0 / norm);
    }
    let sv = a.clone().svd(false, false).singular_values;
    let smax = sv.max();
    let smin = sv.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    let y = DVector::from_column_slice(ys);
    let qr = a.clone().qr();
    let r = qr.r();
    let qty = qr.q().transpose() * &y;
    let z = r
        .solve_upper_triangular(&qty)
        .ok_or(FitError::InvalidArgument("singular design matrix"))?;
    let resid = &y - &a * &z;
    let residual_norm = resid.norm();
    let dof = (m - p).max(1) as f64;
    let sigma = residual_norm / sqrt(dof);
    let a0_sigma = match r.try_inverse() {
        Some(rinv) => sigma * rinv.row(0).norm() / scale[0],
        None => f64::INFINITY,
    };
    Ok(Lsq {
        coef: (0..p).map(|j| z[j] / scale[j]).collect(),
        residual_norm,
        data_norm: y.norm(),
        condition,
        a0_sigma,
    })
}

fn samples(sample: &SpectrumSample, n: usize, window: &Window, points: usize, unguarded: bool) -> Result<(Vec<f64>, Vec<f64>), FitError> {
    let ts = window.grid(points);
    let mut ys = Vec::with_capacity(points);
    for &t in &ts {
        let h = if unguarded {
            sample.heat_trace_unguarded(t)
        } else {
            sample.heat_trace(t)?
        };
        ys.push(h * powf(t, n as f64 / 2.0));
    }
    Ok((ts, ys))
}

/// Fit of degree `degree` over a fixed window.
pub fn fit_on_window(
    sample: &SpectrumSample,
    n: usize,
    degree: usize,
    window: Window,
    points: usize,
    override_tail_guard: bool,
) -> Result<FitReport, FitError> {
    if degree < 1 {
        return Err(FitError::InvalidArgument("degree must be at least 1"));
    }
    let (ts, ys) = samples(sample, n, &window, points, override_tail_guard)?;
    let fit = polyfit(&ts, &ys, degree)?;
    let a0_shift = if points > degree + 2 {
        (polyfit(&ts, &ys, degree + 1)?.coef[0] - fit.coef[0]).abs()
    } else {
        0.0
    };
    Ok(FitReport {
        n,
        degree,
        coefficients: fit.coef,
        window,
        points,
        residual_norm: fit.residual_norm,
        relative_residual: fit.residual_norm / fit.data_norm,
        condition: fit.condition,
        ill_conditioned: fit.condition > CONDITION_LIMIT,
        a0_bound: a0_shift + fit.a0_sigma,
        bc: sample.bc(),
    })
}

pub fn choose_window(sample: &SpectrumSample, n: usize) -> Result<Window, FitError> {
    choose_window_with(sample, n, &FitOptions::default())
}

/// Window from the tail guard below and, above, the tighter of
/// `0.5/λ₁`, the pilot estimate of the first omitted term and a residual
/// check that shrinks `t_max` until the degree-`d` fit is consistent.
pub fn choose_window_with(sample: &SpectrumSample, n: usize, opts: &FitOptions) -> Result<Window, FitError> {
    if let Some(w) = opts.window {
        return Ok(w);
    }
    let cutoff = sample.cutoff();
    let count = sample.total_count().max(1) as f64;
    let required = |t_hi: f64| opts.min_ratio * ln(count / TAIL_TOLERANCE) / t_hi;
    let t_min = if sample.is_finite_operator() {
        let top = sample.values().last().copied().unwrap_or(0.0);
        if top <= 0.0 {
            return Err(FitError::InsufficientSpectrum { cutoff, required: f64::INFINITY });
        }
        FINITE_T_MIN / top
    } else {
        sample.tail_guard()
    };
    let lambda1 = match sample.smallest_positive() {
        Some(v) => v,
        None => return Err(FitError::InsufficientSpectrum { cutoff, required: f64::INFINITY }),
    };
    let t_cap = WINDOW_CAP / lambda1;
    if !(t_min > 0.0) || t_cap < opts.min_ratio * t_min {
        return Err(FitError::InsufficientSpectrum { cutoff, required: required(t_cap) });
    }

    let d = opts.degree;
    let pilot = fit_on_window(sample, n, d + 1, Window::new(t_min, t_cap)?, opts.points, opts.override_tail_guard)?;
    let lead = pilot.coefficients[0].abs();
    let next = pilot.coefficients[d + 1].abs();
    let mut t_max = if next > 0.0 {
        t_cap.min(powf(opts.pilot_fraction * lead / next, 2.0 / (d + 1) as f64))
    } else {
        t_cap
    };
    loop {
        if t_max < opts.min_ratio * t_min {
            return Err(FitError::InsufficientSpectrum { cutoff, required: required(t_max) });
        }
        let w = Window::new(t_min, t_max)?;
        let fit = fit_on_window(sample, n, d, w, opts.points, opts.override_tail_guard)?;
        if fit.relative_residual <= opts.residual_tol {
            return Ok(w);
        }
        t_max *= SHRINK;
    }
}

pub fn fit_expansion(sample: &SpectrumSample, n: usize, degree: usize) -> Result<FitReport, FitError> {
    fit_expansion_with(
        sample,
        n,
        &FitOptions {
            degree,
            ..FitOptions::default()
        },
    )
}

pub fn fit_expansion_with(sample: &SpectrumSample, n: usize, opts: &FitOptions) -> Result<FitReport, FitError> {
    if opts.degree < 1 {
        return Err(FitError::InvalidArgument("degree must be at least 1"));
    }
    let window = choose_window_with(sample, n, opts)?;
    fit_on_window(sample, n, opts.degree, window, opts.points, opts.override_tail_guard)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::PI;
    use crate::spectra::interval_spectrum;
    use crate::symbol::MaterialParams;

    #[test]
    fn polynomial_is_recovered() {
        let ts: Vec<f64> = Window::new(1e-3, 1e-1).unwrap().grid(40);
        let ys: Vec<f64> = ts.iter().map(|t| 2.0 - 3.0 * sqrt(*t) + 0.5 * t).collect();
        let f = polyfit(&ts, &ys, 3).unwrap();
        assert!((f.coef[0] - 2.0).abs() < 1e-10);
        assert!((f.coef[1] + 3.0).abs() < 1e-9);
        assert!(f.coef[3].abs() < 1e-7);
        assert!(f.condition > 1.0 && f.condition < 1e6);
    }

    #[test]
    fn interval_fit() {
        let p = MaterialParams::decoupled(-1.0, 1.0, 1.0);
        let s = interval_spectrum(&p, PI, BcKind::Dirichlet, 1e4).unwrap();
        let f = fit_expansion(&s, 1, 3).unwrap();
        assert!((f.a0() - sqrt(PI)).abs() < 1e-4 * sqrt(PI));
        assert!((f.a1() + 1.0).abs() < 1e-3);
        let neu = interval_spectrum(&p, PI, BcKind::Neumann, 1e4).unwrap();
        assert!((fit_expansion(&neu, 1, 3).unwrap().a1() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn short_spectrum_is_rejected() {
        let p = MaterialParams::decoupled(-1.0, 1.0, 1.0);
        let s = interval_spectrum(&p, PI, BcKind::Dirichlet, 9.5).unwrap();
        assert!(matches!(choose_window(&s, 1), Err(FitError::InsufficientSpectrum { .. })));
    }
}
