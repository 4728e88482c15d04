//! Block Lanczos with full reorthogonalization for the low end of a
//! symmetric spectrum.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::math::sqrt;

/// Ritz values that met the relative residual tolerance, ascending and
/// contiguous from the bottom of the computed spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct LanczosResult {
    pub values: Vec<f64>,
    /// `‖A y − θ y‖` for each returned value.
    pub residuals: Vec<f64>,
    pub basis_size: usize,
}

/// Up to `count` smallest eigenvalues of the symmetric operator `apply` of
/// dimension `dim`, from a Krylov basis of at most `max_basis` vectors grown
/// in blocks of `block` (which bounds the multiplicities that are resolved).
pub fn lanczos_smallest<F>(apply: F, dim: usize, count: usize, block: usize, max_basis: usize, tol: f64) -> LanczosResult
where
    F: Fn(&[f64], &mut [f64]),
{
    let block = block.clamp(1, dim.max(1));
    let max_basis = max_basis.min(dim).max(block);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(max_basis);
    let mut images: Vec<Vec<f64>> = Vec::with_capacity(max_basis);
    let mut state = 0x9E37_79B9_7F4A_7C15u64;
    let mut current: Vec<Vec<f64>> = (0..block)
        .map(|_| (0..dim).map(|_| next_uniform(&mut state) - 0.5).collect())
        .collect();

    while basis.len() < max_basis {
        let mut added = Vec::new();
        for mut v in current.drain(..) {
            if basis.len() + added.len() >= max_basis {
                break;
            }
            if orthonormalize(&mut v, basis.iter().chain(added.iter())) {
                added.push(v);
            }
        }
        if added.is_empty() {
            break;
        }
        for v in &added {
            let mut av = vec![0.0; dim];
            apply(v, &mut av);
            current.push(av.clone());
            images.push(av);
        }
        basis.extend(added);
    }

    let m = basis.len();
    let mut t = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        for j in 0..=i {
            let v = 0.5 * (dot(&basis[i], &images[j]) + dot(&basis[j], &images[i]));
            t[(i, j)] = v;
            t[(j, i)] = v;
        }
    }
    let eig = t.symmetric_eigen();
    let scale = eig.eigenvalues.amax();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let mut values = Vec::new();
    let mut residuals = Vec::new();
    for &idx in order.iter().take(count) {
        let theta = eig.eigenvalues[idx];
        let y = eig.eigenvectors.column(idx);
        let mut r = vec![0.0; dim];
        for (k, (q, aq)) in basis.iter().zip(&images).enumerate() {
            let c = y[k];
            for i in 0..dim {
                r[i] += c * (aq[i] - theta * q[i]);
            }
        }
        let res = sqrt(dot(&r, &r));
        if res > tol * theta.abs().max(1e-12 * scale) {
            break;
        }
        values.push(theta);
        residuals.push(res);
    }
    LanczosResult {
        values,
        residuals,
        basis_size: m,
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Two passes of Gram–Schmidt against `against`, then normalisation.
/// Returns `false` when `v` is numerically in their span.
fn orthonormalize<'a, I>(v: &mut [f64], against: I) -> bool
where
    I: Iterator<Item = &'a Vec<f64>> + Clone,
{
    let original = sqrt(dot(v, v));
    if original == 0.0 {
        return false;
    }
    for _ in 0..2 {
        for q in against.clone() {
            let c = dot(q, v);
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= c * qi;
            }
        }
    }
    let norm = sqrt(dot(v, v));
    if norm <= 1e-10 * original {
        return false;
    }
    v.iter_mut().for_each(|x| *x /= norm);
    true
}

fn next_uniform(state: &mut u64) -> f64 {
    *state ^= *state << 13;
    *state ^= *state >> 7;
    *state ^= *state << 17;
    (*state >> 11) as f64 / (1u64 << 53) as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_operator_with_repeats() {
        let diag: Vec<f64> = (0..300).map(|i| 1.0 + (i / 2) as f64).collect();
        let apply = |x: &[f64], y: &mut [f64]| {
            for i in 0..x.len() {
                y[i] = diag[i] * x[i];
            }
        };
        let r = lanczos_smallest(apply, 300, 6, 4, 300, 1e-8);
        assert_eq!(r.values.len(), 6);
        for (v, e) in r.values.iter().zip([1.0, 1.0, 2.0, 2.0, 3.0, 3.0]) {
            assert!((v - e).abs() < 1e-9);
        }
    }
}
