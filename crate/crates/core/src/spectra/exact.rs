//! Separable spectra: interval, flat torus and rectangle.

use alloc::vec::Vec;

use super::{require_decoupled, SpectraError, SpectrumSample, Source};
use crate::math::{floor, sqrt, PI};
use crate::symbol::MaterialParams;
use crate::trace::BcKind;

fn first_index(bc: BcKind) -> u64 {
    match bc {
        BcKind::Dirichlet => 1,
        BcKind::Neumann => 0,
    }
}

/// Pressure channel `(λ+2μ)(kπ/L)²` and heat channel `α(kπ/L)²`.
pub fn interval_spectrum(params: &MaterialParams, length: f64, bc: BcKind, cutoff: f64) -> Result<SpectrumSample, SpectraError> {
    require_decoupled(params)?;
    if !(length > 0.0) {
        return Err(SpectraError::InvalidArgument("length must be positive"));
    }
    let mut raw = Vec::new();
    for rate in [params.pressure_rate(), params.alpha] {
        let base = rate * (PI / length) * (PI / length);
        let mut k = first_index(bc);
        loop {
            let v = base * (k * k) as f64;
            if v > cutoff {
                break;
            }
            raw.push(v);
            k += 1;
        }
    }
    Ok(SpectrumSample::from_values(raw, cutoff, Source::Exact, Some(bc)))
}

/// Every `ξ` of the dual lattice `2π k_i / L_i` contributes `μ|ξ|²` (×(n−1)),
/// `(λ+2μ)|ξ|²` and `α|ξ|²`.
pub fn torus_spectrum(params: &MaterialParams, lengths: &[f64], cutoff: f64) -> Result<SpectrumSample, SpectraError> {
    require_decoupled(params)?;
    if lengths.is_empty() || lengths.iter().any(|l| !(*l > 0.0)) {
        return Err(SpectraError::InvalidArgument("torus lengths must be positive"));
    }
    let n = lengths.len();
    let channels = params.channels(n);
    let slowest = channels
        .iter()
        .filter(|c| c.multiplicity > 0)
        .map(|c| c.rate)
        .fold(f64::INFINITY, f64::min);
    let xi_bound = cutoff / slowest;
    let steps: Vec<f64> = lengths.iter().map(|l| 2.0 * PI / l).collect();
    let mut norms = Vec::new();
    lattice_scan(&steps, xi_bound, 0, 0.0, &mut norms);
    let mut raw = Vec::new();
    for q in norms {
        for ch in &channels {
            let v = ch.rate * q;
            if v <= cutoff {
                raw.extend(core::iter::repeat_n(v, ch.multiplicity));
            }
        }
    }
    Ok(SpectrumSample::from_values(raw, cutoff, Source::Exact, None))
}

/// Pushes `|ξ|²` for all integer vectors `k` with `Σ (k_i s_i)² ≤ bound`.
fn lattice_scan(steps: &[f64], bound: f64, axis: usize, partial: f64, out: &mut Vec<f64>) {
    if axis == steps.len() {
        out.push(partial);
        return;
    }
    let s = steps[axis];
    let kmax = floor(sqrt((bound - partial).max(0.0)) / s) as i64;
    for k in -kmax..=kmax {
        let q = partial + (k as f64 * s) * (k as f64 * s);
        if q <= bound {
            lattice_scan(steps, bound, axis + 1, q, out);
        }
    }
}

/// Scalar Laplacian `c π²(j²/a² + k²/b²)` on a rectangle.
pub fn rectangle_laplacian_spectrum(a: f64, b: f64, rate: f64, bc: BcKind, cutoff: f64) -> Result<SpectrumSample, SpectraError> {
    if !(a > 0.0 && b > 0.0 && rate > 0.0) {
        return Err(SpectraError::InvalidArgument("sides and rate must be positive"));
    }
    let ua = rate * (PI / a) * (PI / a);
    let ub = rate * (PI / b) * (PI / b);
    let start = first_index(bc);
    let mut raw = Vec::new();
    let mut j = start;
    while ua * (j * j) as f64 + ub * (start * start) as f64 <= cutoff {
        let mut k = start;
        loop {
            let v = ua * (j * j) as f64 + ub * (k * k) as f64;
            if v > cutoff {
                break;
            }
            raw.push(v);
            k += 1;
        }
        j += 1;
    }
    Ok(SpectrumSample::from_values(raw, cutoff, Source::Exact, Some(bc)))
}

/// With `λ+μ = 0` the elastic block is a componentwise Laplacian: `n = 2`
/// copies at rate `μ` and one heat copy at rate `α`. Neumann uses the
/// componentwise scalar condition.
pub fn rectangle_decoupled_spectrum(
    params: &MaterialParams,
    a: f64,
    b: f64,
    bc: BcKind,
    cutoff: f64,
) -> Result<SpectrumSample, SpectraError> {
    require_decoupled(params)?;
    if (params.lambda + params.mu).abs() > 1e-12 {
        return Err(SpectraError::Unsupported(
            "rectangle spectrum needs lambda + mu = 0; use the finite-difference solver",
        ));
    }
    let elastic = rectangle_laplacian_spectrum(a, b, params.mu, bc, cutoff)?;
    let heat = rectangle_laplacian_spectrum(a, b, params.alpha, bc, cutoff)?;
    Ok(super::merge_samples(&[elastic.clone(), elastic, heat]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> MaterialParams {
        MaterialParams::decoupled(-1.0, 1.0, 1.0)
    }

    #[test]
    fn interval_values() {
        let s = interval_spectrum(&unit(), PI, BcKind::Dirichlet, 30.0).unwrap();
        assert_eq!(s.values(), &[1.0, 4.0, 9.0, 16.0, 25.0]);
        assert!(s.multiplicities().iter().all(|&m| m == 2));
        let n = interval_spectrum(&unit(), PI, BcKind::Neumann, 30.0).unwrap();
        assert_eq!(n.values()[0], 0.0);
        assert_eq!(n.zero_modes(), 2);
        let p = MaterialParams::decoupled(2.0, 1.0, 10.0);
        let s = interval_spectrum(&p, 1.0, BcKind::Dirichlet, 100.0).unwrap();
        assert!((s.values()[0] - 4.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn torus_first_mode() {
        let p = MaterialParams::decoupled(1.0, 1.0, 1.0);
        let s = torus_spectrum(&p, &[2.0 * PI, 2.0 * PI], 3.5).unwrap();
        // k = 0 gives three zeros; |k| = 1 (four vectors) gives {1, 1, 3} each.
        assert_eq!(s.values(), &[0.0, 1.0, 2.0, 3.0]);
        assert_eq!(s.multiplicities(), &[3, 8, 8, 4]);
    }

    #[test]
    fn rectangle_values() {
        let s = rectangle_decoupled_spectrum(&unit(), 1.0, 1.0, BcKind::Dirichlet, 60.0).unwrap();
        assert!((s.values()[0] - 2.0 * PI * PI).abs() < 1e-12);
        assert_eq!(s.multiplicities()[0], 3);
        assert_eq!(s.multiplicities()[1], 6);
        let coupled = MaterialParams::decoupled(1.0, 1.0, 1.0);
        assert!(rectangle_decoupled_spectrum(&coupled, 1.0, 1.0, BcKind::Dirichlet, 60.0).is_err());
    }

    #[test]
    fn lattice_count_against_brute_force() {
        let (a, b, cutoff) = (1.0, 1.7, 1000.0);
        let s = rectangle_laplacian_spectrum(a, b, 1.0, BcKind::Dirichlet, cutoff).unwrap();
        let mut count = 0;
        for j in 1..200u64 {
            for k in 1..200u64 {
                let v = PI * PI * ((j * j) as f64 / (a * a) + (k * k) as f64 / (b * b));
                if v <= cutoff {
                    count += 1;
                }
            }
        }
        assert_eq!(s.total_count(), count);
    }
}
