//! Bessel functions of the first kind, their zeros, and disk spectra.

use alloc::vec::Vec;

use super::{merge_samples, require_decoupled, SpectraError, SpectrumSample, Source};
use crate::math::{sqrt, PI};
use crate::symbol::MaterialParams;
use crate::trace::BcKind;

/// Arguments up to this use the power series.
const SERIES_LIMIT: f64 = 8.0;
const BISECTION_TOL: f64 = 1e-12;

/// `J_m(x)` for `x ≥ 0`.
pub fn bessel_j(m: usize, x: f64) -> f64 {
    if x == 0.0 {
        return if m == 0 { 1.0 } else { 0.0 };
    }
    if x <= SERIES_LIMIT {
        series(m, x)
    } else {
        miller(m, x)
    }
}

/// `J_m′(x)`.
pub fn bessel_j_prime(m: usize, x: f64) -> f64 {
    if m == 0 {
        -bessel_j(1, x)
    } else {
        0.5 * (bessel_j(m - 1, x) - bessel_j(m + 1, x))
    }
}

fn series(m: usize, x: f64) -> f64 {
    let half = 0.5 * x;
    // (x/2)^m / m!
    let mut lead = 1.0;
    for k in 1..=m {
        lead *= half / k as f64;
    }
    let q = -half * half;
    let mut term = lead;
    let mut sum = term;
    let mut k = 1.0;
    loop {
        term *= q / (k * (k + m as f64));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() || k > 200.0 {
            break;
        }
        k += 1.0;
    }
    sum
}

/// Miller's backward recurrence normalised by `J₀ + 2 Σ J_{2k} = 1`.
fn miller(m: usize, x: f64) -> f64 {
    let top = (m as f64).max(x);
    let mut start = (top + 30.0 + 2.0 * sqrt(40.0 * top)) as usize;
    start += start % 2;
    let (mut next, mut cur) = (0.0f64, 1e-30f64);
    let mut norm = 0.0;
    let mut target = 0.0;
    for k in (1..=start).rev() {
        // cur = J_k, next = J_{k+1}; compute J_{k−1}
        let prev = 2.0 * k as f64 / x * cur - next;
        next = cur;
        cur = prev;
        let idx = k - 1;
        if idx == m {
            target = cur;
        }
        if idx % 2 == 0 && idx > 0 {
            norm += 2.0 * cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
            target *= 1e-250;
        }
    }
    norm += cur;
    target / norm
}

fn bisect<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64) -> Option<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= BISECTION_TOL * mid.max(1.0) {
            return Some(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Positive zeros of `J₀` up to `limit`, bracketed by a uniform scan.
fn j0_zeros(limit: f64) -> Result<Vec<f64>, SpectraError> {
    let f = |x: f64| bessel_j(0, x);
    let step = 0.5;
    let mut zeros = Vec::new();
    let mut a = step;
    while a < limit + PI {
        let b = a + step;
        if f(a).signum() != f(b).signum() {
            let z = bisect(&f, a, b).ok_or(SpectraError::BracketExhausted { m: 0, k: zeros.len() + 1 })?;
            if z > limit {
                break;
            }
            zeros.push(z);
        }
        a = b;
    }
    Ok(zeros)
}

/// Zeros `j_{m,k} ≤ limit` for every order `m = 0, 1, …` that has one, using
/// the interlacing `j_{m,k} < j_{m+1,k} < j_{m,k+1}`.
fn zero_table(limit: f64) -> Result<Vec<Vec<f64>>, SpectraError> {
    // Each order loses at most one bracket at the top, spaced by less than π,
    // so order 0 has to reach roughly (1 + π) · limit.
    let reach = |m: usize| limit + (limit - m as f64).max(0.0) * PI + 2.0 * PI;
    let mut table = Vec::new();
    let mut prev = j0_zeros(reach(0))?;
    let mut m = 0usize;
    loop {
        let visible: Vec<f64> = prev.iter().copied().filter(|&z| z <= limit).collect();
        if visible.is_empty() {
            break;
        }
        table.push(visible);
        let next_order = m + 1;
        let f = |x: f64| bessel_j(next_order, x);
        let bound = reach(next_order);
        let mut next = Vec::new();
        for (k, w) in prev.windows(2).enumerate() {
            if w[0] > bound {
                break;
            }
            let z = bisect(&f, w[0], w[1]).ok_or(SpectraError::BracketExhausted { m: next_order, k: k + 1 })?;
            next.push(z);
        }
        prev = next;
        m = next_order;
    }
    Ok(table)
}

/// The first `count` positive zeros of `J_m`.
pub fn bessel_j_zeros(m: usize, count: usize) -> Result<Vec<f64>, SpectraError> {
    // j_{m,k} < m + kπ + 2m^{1/3} + 2 comfortably bounds the k-th zero.
    let limit = m as f64 + (count as f64 + 1.0) * PI + 2.0 * libm::cbrt(m as f64) + 2.0;
    let table = zero_table(limit)?;
    let zeros = table.get(m).ok_or(SpectraError::BracketExhausted { m, k: 1 })?;
    if zeros.len() < count {
        return Err(SpectraError::BracketExhausted { m, k: zeros.len() + 1 });
    }
    Ok(zeros[..count].to_vec())
}

/// The first `count` positive zeros of `J_m′`.
pub fn bessel_jp_zeros(m: usize, count: usize) -> Result<Vec<f64>, SpectraError> {
    let zeros = if m == 0 {
        bessel_j_zeros(1, count)?
    } else {
        let jz = bessel_j_zeros(m, count)?;
        derivative_zeros(m, &jz, f64::INFINITY)?
    };
    Ok(zeros.into_iter().take(count).collect())
}

/// Zeros of `J_m′` (`m ≥ 1`) below `limit`: one in `(m, j_{m,1})`, then one
/// between consecutive zeros of `J_m`.
fn derivative_zeros(m: usize, jz: &[f64], limit: f64) -> Result<Vec<f64>, SpectraError> {
    let f = |x: f64| bessel_j_prime(m, x);
    let mut out = Vec::new();
    let mut lo = m as f64;
    for (k, &hi) in jz.iter().enumerate() {
        if lo > limit {
            break;
        }
        let z = bisect(&f, lo, hi).ok_or(SpectraError::BracketExhausted { m, k: k + 1 })?;
        if z <= limit {
            out.push(z);
        }
        lo = hi;
    }
    Ok(out)
}

/// Scalar Laplacian on the disk of radius `r`, scaled by `rate`:
/// Dirichlet `c (j_{m,k}/r)²`, Neumann `c (j′_{m,k}/r)²` plus `0`;
/// multiplicity 2 for `m ≥ 1`.
pub fn disk_laplacian_spectrum(radius: f64, rate: f64, bc: BcKind, cutoff: f64) -> Result<SpectrumSample, SpectraError> {
    if !(radius > 0.0 && rate > 0.0 && cutoff >= 0.0) {
        return Err(SpectraError::InvalidArgument("radius and rate must be positive"));
    }
    let limit = radius * sqrt(cutoff / rate);
    let scale = rate / (radius * radius);
    let mut raw = Vec::new();
    let mut push = |m: usize, z: f64| {
        let copies = if m == 0 { 1 } else { 2 };
        raw.extend(core::iter::repeat_n(scale * z * z, copies));
    };
    match bc {
        BcKind::Dirichlet => {
            for (m, zeros) in zero_table(limit)?.into_iter().enumerate() {
                zeros.into_iter().for_each(|z| push(m, z));
            }
        }
        BcKind::Neumann => {
            push(0, 0.0);
            // Zeros of J_m′ interlace below those of J_m, so the J_m zeros up to
            // one spacing past `limit` bracket all of them.
            let table = zero_table(limit + PI)?;
            for (m, zeros) in table.iter().enumerate() {
                if m == 0 {
                    if let Some(j1) = table.get(1) {
                        j1.iter().filter(|&&z| z <= limit).for_each(|&z| push(0, z));
                    }
                    continue;
                }
                for z in derivative_zeros(m, zeros, limit)? {
                    push(m, z);
                }
            }
            // Orders whose first J_m zero exceeds limit + π can still have
            // j′_{m,1} ∈ (m, j_{m,1}) below `limit`.
            let mut m = table.len();
            while (m as f64) < limit {
                let first = bessel_j_zeros(m, 1)?;
                for z in derivative_zeros(m, &first, limit)? {
                    push(m, z);
                }
                m += 1;
            }
        }
    }
    Ok(SpectrumSample::from_values(raw, cutoff, Source::Exact, Some(bc)))
}

/// Decoupled thermoelastic disk (`λ+μ = 0`): two copies at rate `μ` and one
/// at rate `α`.
pub fn disk_decoupled_spectrum(params: &MaterialParams, radius: f64, bc: BcKind, cutoff: f64) -> Result<SpectrumSample, SpectraError> {
    require_decoupled(params)?;
    if (params.lambda + params.mu).abs() > 1e-12 {
        return Err(SpectraError::Unsupported("disk spectrum needs lambda + mu = 0"));
    }
    let elastic = disk_laplacian_spectrum(radius, params.mu, bc, cutoff)?;
    let heat = if params.alpha == params.mu {
        elastic.clone()
    } else {
        disk_laplacian_spectrum(radius, params.alpha, bc, cutoff)?
    };
    Ok(merge_samples(&[elastic.clone(), elastic, heat]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        assert!((bessel_j(0, 1.0) - 0.7651976865579666).abs() < 1e-15);
        assert!((bessel_j(1, 2.5) - 0.4970941024642741).abs() < 1e-15);
        assert!((bessel_j(0, 10.0) + 0.2459357644513483).abs() < 1e-14);
        assert!((bessel_j(5, 20.0) - 0.15116976798239493).abs() < 1e-14);
        assert!((bessel_j(30, 12.0) - 2.5522590430344187e-10).abs() < 1e-22);
        assert!((bessel_j(2, 50.0) + 0.05971280079425882).abs() < 1e-14);
    }

    #[test]
    fn series_and_recurrence_agree_at_the_switch() {
        for m in [0usize, 1, 3, 7, 12] {
            let a = series(m, 8.0);
            let b = miller(m, 8.0);
            assert!((a - b).abs() < 1e-13, "m = {m}: {a} vs {b}");
        }
    }

    #[test]
    fn first_zeros() {
        let z = bessel_j_zeros(0, 3).unwrap();
        assert!((z[0] - 2.404825557695773).abs() < 1e-11);
        assert!((z[2] - 8.653727912911013).abs() < 1e-11);
        let z1 = bessel_j_zeros(1, 1).unwrap();
        assert!((z1[0] - 3.831705970207512).abs() < 1e-11);
        let zp = bessel_jp_zeros(1, 1).unwrap();
        assert!((zp[0] - 1.841183781340659).abs() < 1e-11);
        let z10 = bessel_j_zeros(10, 2).unwrap();
        assert!((z10[0] - 14.47550068655454).abs() < 1e-10);
    }

    #[test]
    fn disk_spectra() {
        let d = disk_laplacian_spectrum(1.0, 1.0, BcKind::Dirichlet, 100.0).unwrap();
        assert!((d.values()[0] - 5.783185962946784).abs() < 1e-10);
        assert_eq!(d.multiplicities()[0], 1);
        assert_eq!(d.multiplicities()[1], 2);
        let n = disk_laplacian_spectrum(1.0, 1.0, BcKind::Neumann, 100.0).unwrap();
        assert_eq!(n.values()[0], 0.0);
        assert!((n.values()[1] - 3.3899577166718897).abs() < 1e-9);
        let r2 = disk_laplacian_spectrum(2.0, 1.0, BcKind::Dirichlet, 25.0).unwrap();
        for (a, b) in r2.values().iter().zip(d.values()) {
            assert!((a * 4.0 - b).abs() < 1e-9);
        }
    }
}
