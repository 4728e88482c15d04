use alloc::vec::Vec;

use nalgebra::DMatrix;

use super::chart::{MetricChart, MetricDerivatives};
use super::tensor::{Tensor3, Tensor4};
use super::GeometryError;

/// `(g_ij)^{-1}` for a symmetric positive definite `g`.
///
/// Rejects asymmetric or indefinite input; the error carries the smallest
/// eigenvalue and the spectral condition number.
pub fn invert_metric(g: &DMatrix<f64>) -> Result<DMatrix<f64>, GeometryError> {
    let scale = g.amax().max(f64::MIN_POSITIVE);
    let asymmetry = (g - g.transpose()).amax();
    if asymmetry > 1e-12 * scale {
        return Err(GeometryError::NotSymmetric { asymmetry });
    }
    let indefinite = || {
        let eig = g.clone().symmetric_eigenvalues();
        let min = eig.min();
        let max = eig.max();
        GeometryError::NotPositiveDefinite {
            min_eigenvalue: min,
            condition: if min > 0.0 { max / min } else { f64::INFINITY },
        }
    };
    match g.clone().cholesky() {
        Some(ch) => {
            if ch.l_dirty().diagonal().iter().any(|d| !(*d > 0.0)) {
                return Err(indefinite());
            }
            Ok(ch.inverse())
        }
        None => Err(indefinite()),
    }
}

/// Pointwise geometric data of a metric: `g`, `g⁻¹`, `det g`, Christoffel
/// symbols and their derivatives, the Riemann and Ricci tensors.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometryJet {
    pub point: Vec<f64>,
    pub metric: DMatrix<f64>,
    pub inverse: DMatrix<f64>,
    pub det: f64,
    /// `∂_m g^{ij}`, indexed by `m`.
    pub inverse_deriv: Vec<DMatrix<f64>>,
    /// `Γ^k_ij` stored as `[k][i][j]`.
    pub christoffel: Tensor3,
    /// `∂_m Γ^k_ij` stored as `[m][k][i][j]`.
    pub christoffel_deriv: Tensor4,
    /// `R^l_ijk` stored as `[l][i][j][k]`.
    pub riemann: Tensor4,
    pub ricci: DMatrix<f64>,
}

impl GeometryJet {
    pub fn from_derivatives(x: &[f64], d: &MetricDerivatives) -> Result<Self, GeometryError> {
        let n = d.metric.nrows();
        let inverse = invert_metric(&d.metric)?;
        let det = d.metric.determinant();
        let inverse_deriv: Vec<DMatrix<f64>> =
            d.first.iter().map(|dg| -(&inverse * dg * &inverse)).collect();

        // Γ^k_ij = ½ g^{kl} (∂_i g_jl + ∂_j g_il − ∂_l g_ij)
        let lowered = |i: usize, j: usize, l: usize| -> f64 {
            d.first[i][(j, l)] + d.first[j][(i, l)] - d.first[l][(i, j)]
        };
        let mut christoffel = Tensor3::zeros(n);
        for k in 0..n {
            for i in 0..n {
                for j in i..n {
                    let v = 0.5 * (0..n).map(|l| inverse[(k, l)] * lowered(i, j, l)).sum::<f64>();
                    christoffel.set(k, i, j, v);
                    christoffel.set(k, j, i, v);
                }
            }
        }

        // ∂_m Γ^k_ij from ∂_m g^{kl} and second metric derivatives.
        let dd = |m: usize, a: usize| &d.second[m * n + a];
        let mut christoffel_deriv = Tensor4::zeros(n);
        for m in 0..n {
            for k in 0..n {
                for i in 0..n {
                    for j in i..n {
                        let mut v = 0.0;
                        for l in 0..n {
                            let second = dd(m, i)[(j, l)] + dd(m, j)[(i, l)] - dd(m, l)[(i, j)];
                            v += inverse_deriv[m][(k, l)] * lowered(i, j, l) + inverse[(k, l)] * second;
                        }
                        christoffel_deriv.set(m, k, i, j, 0.5 * v);
                        christoffel_deriv.set(m, k, j, i, 0.5 * v);
                    }
                }
            }
        }

        // R^l_ijk = ∂_i Γ^l_jk − ∂_j Γ^l_ik + Γ^h_jk Γ^l_ih − Γ^h_ik Γ^l_jh
        let mut riemann = Tensor4::zeros(n);
        for l in 0..n {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let mut v = christoffel_deriv.get(i, l, j, k) - christoffel_deriv.get(j, l, i, k);
                        for h in 0..n {
                            v += christoffel.get(h, j, k) * christoffel.get(l, i, h)
                                - christoffel.get(h, i, k) * christoffel.get(l, j, h);
                        }
                        riemann.set(l, i, j, k, v);
                    }
                }
            }
        }

        // R_ij = g^{kl} R_iklj with R_iklj = g_jm R^m_ikl
        let mut ricci = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut v = 0.0;
                for k in 0..n {
                    for l in 0..n {
                        let lowered: f64 = (0..n).map(|m| d.metric[(j, m)] * riemann.get(m, i, k, l)).sum();
                        v += inverse[(k, l)] * lowered;
                    }
                }
                ricci[(i, j)] = v;
            }
        }

        Ok(Self {
            point: x.to_vec(),
            metric: d.metric.clone(),
            inverse,
            det,
            inverse_deriv,
            christoffel,
            christoffel_deriv,
            riemann,
            ricci,
        })
    }

    /// Jet of a constant metric (all connection data vanish).
    pub fn constant(x: &[f64], g: &DMatrix<f64>) -> Result<Self, GeometryError> {
        let n = g.nrows();
        let d = MetricDerivatives {
            metric: g.clone(),
            first: alloc::vec![DMatrix::zeros(n, n); n],
            second: alloc::vec![DMatrix::zeros(n, n); n * n],
        };
        Self::from_derivatives(x, &d)
    }

    pub fn flat(dim: usize) -> Self {
        Self::constant(&alloc::vec![0.0; dim], &DMatrix::identity(dim, dim))
            .expect("identity metric is SPD")
    }

    pub fn dim(&self) -> usize {
        self.metric.nrows()
    }

    /// `|ξ|² = g^{ij} ξ_i ξ_j`.
    pub fn norm_sq(&self, xi: &[f64]) -> f64 {
        let n = self.dim();
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += self.inverse[(i, j)] * xi[i] * xi[j];
            }
        }
        s
    }

    /// `g^{ml} Γ^s_ml`.
    pub fn contracted_christoffel(&self, s: usize) -> f64 {
        let n = self.dim();
        let mut v = 0.0;
        for m in 0..n {
            for l in 0..n {
                v += self.inverse[(m, l)] * self.christoffel.get(s, m, l);
            }
        }
        v
    }

    /// `Γ^l_kl` (summed over `l`).
    pub fn christoffel_trace(&self, k: usize) -> f64 {
        (0..self.dim()).map(|l| self.christoffel.get(l, k, l)).sum()
    }

    /// `∂_m Γ^l_kl` (summed over `l`).
    pub fn christoffel_trace_deriv(&self, m: usize, k: usize) -> f64 {
        (0..self.dim()).map(|l| self.christoffel_deriv.get(m, l, k, l)).sum()
    }

    /// Sectional curvature of the coordinate plane `(i, j)`.
    pub fn sectional_curvature(&self, i: usize, j: usize) -> f64 {
        let n = self.dim();
        // R_ijji = g_im R^m_ijj
        let r: f64 = (0..n).map(|m| self.metric[(i, m)] * self.riemann.get(m, i, j, j)).sum();
        let g = &self.metric;
        r / (g[(i, i)] * g[(j, j)] - g[(i, j)] * g[(i, j)])
    }
}

/// `Γ^k_ij` at `x`.
pub fn christoffel(chart: &MetricChart, x: &[f64]) -> Result<Tensor3, GeometryError> {
    Ok(chart.jet(x)?.christoffel)
}

/// `R^l_ijk` at `x`.
pub fn curvature(chart: &MetricChart, x: &[f64]) -> Result<Tensor4, GeometryError> {
    Ok(chart.jet(x)?.riemann)
}

/// `R_ij` at `x`.
pub fn ricci(chart: &MetricChart, x: &[f64]) -> Result<DMatrix<f64>, GeometryError> {
    Ok(chart.jet(x)?.ricci)
}
