//! Experimental dense discretization of the fully coupled operator on a
//! rectangle with Dirichlet conditions. The matrix is not Hermitian once
//! `β` or `ω` is nonzero, so the eigenvalues are complex in general.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::fd::{elastic_block, heat_block, Grid};
use super::SpectraError;
use crate::symbol::MaterialParams;

/// Largest number of unknowns (`3 × interior nodes`) accepted.
pub const COUPLED_MAX_UNKNOWNS: usize = 1200;

/// Eigenvalues of the discretized `−L` with all coupling terms:
/// elastic rows `−μΔu − (λ+μ)∇div u − ρω²u + β∇θ`, heat row
/// `−αΔθ − iωγθ − iωβθ₀ div u`. Sorted by real part, then imaginary part.
pub fn coupled_fd_eigenvalues(params: &MaterialParams, a: f64, b: f64, h: f64) -> Result<Vec<Complex64>, SpectraError> {
    params.validate()?;
    let grid = Grid::new(a, b, h)?;
    let nodes = grid.nodes();
    let dim = 3 * nodes;
    if dim > COUPLED_MAX_UNKNOWNS {
        return Err(SpectraError::InvalidArgument("grid too fine for the dense coupled solver"));
    }
    let i = Complex64::new(0.0, 1.0);
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);

    let elastic = elastic_block(&grid, params.mu, params.lambda);
    for r in 0..elastic.n {
        for k in elastic.row_ptr[r]..elastic.row_ptr[r + 1] {
            m[(r, elastic.cols[k])] = Complex64::from(elastic.vals[k]);
        }
        m[(r, r)] -= Complex64::from(params.rho * params.omega * params.omega);
    }
    let heat = heat_block(&grid, params.alpha);
    let off = 2 * nodes;
    for r in 0..heat.n {
        for k in heat.row_ptr[r]..heat.row_ptr[r + 1] {
            m[(off + r, off + heat.cols[k])] = Complex64::from(heat.vals[k]);
        }
        m[(off + r, off + r)] -= i * (params.omega * params.gamma);
    }

    // Centred first differences for ∇θ and div u.
    let w = 1.0 / (2.0 * grid.h);
    for (x, y) in grid.interior() {
        let p = grid.index(x, y).unwrap();
        for (comp, (dx, dy)) in [(1i64, 0i64), (0, 1)].into_iter().enumerate() {
            for (s, sign) in [(1i64, 1.0), (-1, -1.0)] {
                if let Some(q) = grid.index(x + s * dx, y + s * dy) {
                    m[(2 * p + comp, off + q)] += Complex64::from(params.beta * sign * w);
                    m[(off + p, 2 * q + comp)] -= i * (params.omega * params.beta * params.theta0 * sign * w);
                }
            }
        }
    }

    let mut values: Vec<Complex64> = m
        .schur()
        .eigenvalues()
        .ok_or(SpectraError::Solver("Schur decomposition did not converge"))?
        .iter()
        .copied()
        .collect();
    values.sort_by(|p, q| p.re.total_cmp(&q.re).then(p.im.total_cmp(&q.im)));
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::fd_spectrum;
    use crate::trace::BcKind;

    #[test]
    fn reduces_to_decoupled_solver() {
        let p = MaterialParams::decoupled(0.5, 1.0, 2.0);
        let c = coupled_fd_eigenvalues(&p, 1.0, 1.0, 0.125).unwrap();
        let mut real = fd_spectrum(&p, 1.0, 1.0, 0.125, BcKind::Dirichlet).unwrap().discrete.expanded();
        real.sort_by(f64::total_cmp);
        assert_eq!(c.len(), real.len());
        for (z, r) in c.iter().zip(&real) {
            assert!(z.im.abs() < 1e-8 * r);
            assert!((z.re - r).abs() < 1e-8 * r);
        }
    }

    #[test]
    fn frequency_shift_without_coupling() {
        let mut p = MaterialParams::decoupled(-1.0, 1.0, 1.0);
        p.omega = 2.0;
        p.rho = 0.5;
        p.gamma = 3.0;
        let c = coupled_fd_eigenvalues(&p, 1.0, 1.0, 0.25).unwrap();
        let base = crate::spectra::fd_heat_eigenvalues_exact(1.0, 1.0, 1.0, 0.25).unwrap();
        // Two elastic copies shifted by −ρω² and one heat copy shifted by −iωγ.
        let shifted_heat = c.iter().filter(|z| (z.im + 6.0).abs() < 1e-8).count();
        assert_eq!(shifted_heat, base.len());
        assert!((c[0].re - (base[0] - 2.0)).abs() < 1e-8);
    }

    #[test]
    fn size_guard() {
        let p = MaterialParams::decoupled(1.0, 1.0, 1.0);
        assert!(coupled_fd_eigenvalues(&p, 1.0, 1.0, 0.01).is_err());
    }
}
