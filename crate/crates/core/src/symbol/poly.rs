//! Matrix-valued polynomials of degree ≤ 2 in the covector ξ.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

pub(crate) type CMatrix = DMatrix<Complex64>;

/// `C + Σ_i L_i ξ_i + Σ_{i,j} Q_ij ξ_i ξ_j` with `Q_ij = Q_ji`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolPoly {
    n: usize,
    size: usize,
    pub(crate) constant: CMatrix,
    pub(crate) linear: Vec<CMatrix>,
    pub(crate) quadratic: Vec<CMatrix>,
}

impl SymbolPoly {
    pub(crate) fn zeros(n: usize, size: usize) -> Self {
        Self {
            n,
            size,
            constant: CMatrix::zeros(size, size),
            linear: vec![CMatrix::zeros(size, size); n],
            quadratic: vec![CMatrix::zeros(size, size); n * n],
        }
    }

    /// Adds `v` to the coefficient of `ξ_i ξ_j` at `(row, col)`, split
    /// symmetrically between `Q_ij` and `Q_ji`.
    pub(crate) fn add_quadratic(&mut self, i: usize, j: usize, row: usize, col: usize, v: Complex64) {
        let n = self.n;
        if i == j {
            self.quadratic[i * n + i][(row, col)] += v;
        } else {
            self.quadratic[i * n + j][(row, col)] += v * 0.5;
            self.quadratic[j * n + i][(row, col)] += v * 0.5;
        }
    }

    pub(crate) fn add_linear(&mut self, i: usize, row: usize, col: usize, v: Complex64) {
        self.linear[i][(row, col)] += v;
    }

    pub fn matrix_size(&self) -> usize {
        self.size
    }

    pub fn eval(&self, xi: &[f64]) -> CMatrix {
        let mut out = self.constant.clone();
        for i in 0..self.n {
            if xi[i] != 0.0 {
                out += &self.linear[i] * Complex64::from(xi[i]);
            }
            for j in 0..self.n {
                let w = xi[i] * xi[j];
                if w != 0.0 {
                    out += &self.quadratic[i * self.n + j] * Complex64::from(w);
                }
            }
        }
        out
    }

    /// `∂_ξ^J` at `xi`, with `J` given as per-axis counts.
    pub fn derivative(&self, counts: &[usize], xi: &[f64]) -> CMatrix {
        let order: usize = counts.iter().sum();
        match order {
            0 => self.eval(xi),
            1 => {
                let a = counts.iter().position(|&c| c == 1).expect("order-1 multi-index");
                let mut out = self.linear[a].clone();
                for j in 0..self.n {
                    if xi[j] != 0.0 {
                        out += &self.quadratic[a * self.n + j] * Complex64::from(2.0 * xi[j]);
                    }
                }
                out
            }
            2 => {
                let mut axes = counts
                    .iter()
                    .enumerate()
                    .flat_map(|(axis, &c)| core::iter::repeat_n(axis, c));
                let a = axes.next().unwrap();
                let b = axes.next().unwrap();
                &self.quadratic[a * self.n + b] * Complex64::from(2.0)
            }
            _ => CMatrix::zeros(self.size, self.size),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivatives_match_hand_expansion() {
        // p(ξ) = 3 + 2ξ_0 + ξ_0 ξ_1 (scalar)
        let mut p = SymbolPoly::zeros(2, 1);
        p.constant[(0, 0)] = Complex64::from(3.0);
        p.add_linear(0, 0, 0, Complex64::from(2.0));
        p.add_quadratic(0, 1, 0, 0, Complex64::from(1.0));
        let xi = [0.5, -2.0];
        assert_eq!(p.eval(&xi)[(0, 0)].re, 3.0 + 1.0 - 1.0);
        assert_eq!(p.derivative(&[1, 0], &xi)[(0, 0)].re, 2.0 - 2.0);
        assert_eq!(p.derivative(&[0, 1], &xi)[(0, 0)].re, 0.5);
        assert_eq!(p.derivative(&[1, 1], &xi)[(0, 0)].re, 1.0);
        assert_eq!(p.derivative(&[2, 0], &xi)[(0, 0)].re, 0.0);
        assert_eq!(p.derivative(&[2, 1], &xi)[(0, 0)].re, 0.0);
    }
}
