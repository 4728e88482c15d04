//! Second-order finite differences for `−(μΔ + (λ+μ) grad div)` and `−αΔ`
//! on a rectangle with Dirichlet conditions.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use super::lanczos::lanczos_smallest;
use super::{merge_samples, require_decoupled, SpectraError, SpectrumSample, Source};
use crate::math::{round, sin, sqrt, PI};
use crate::symbol::MaterialParams;
use crate::trace::BcKind;

/// Largest block solved by the dense symmetric eigensolver.
pub const DENSE_LIMIT: usize = 4000;
const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FdSolver {
    Dense,
    Lanczos,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdOptions {
    /// Relative two-grid error estimate allowed below the completeness cutoff.
    pub completeness_tol: f64,
    /// Requested cutoff; the reported one is capped by the completeness
    /// estimate.
    pub requested_cutoff: Option<f64>,
    pub dense_limit: usize,
    /// Eigenvalues per block requested from the iterative solver.
    pub lanczos_count: usize,
}

impl Default for FdOptions {
    fn default() -> Self {
        Self {
            completeness_tol: 1e-2,
            requested_cutoff: None,
            dense_limit: DENSE_LIMIT,
            lanczos_count: 400,
        }
    }
}

/// Result of a finite-difference eigensolve.
#[derive(Debug, Clone, PartialEq)]
pub struct FdSpectrum {
    /// Values below the completeness cutoff.
    pub sample: SpectrumSample,
    /// Every computed discrete eigenvalue, flagged as a finite operator.
    pub discrete: SpectrumSample,
    /// Elastic block eigenvalues, ascending.
    pub elastic: Vec<f64>,
    /// Heat block eigenvalues, ascending.
    pub heat: Vec<f64>,
    /// Largest value whose two-grid error estimate stays below tolerance.
    pub completeness: f64,
    /// Set when a requested cutoff exceeded the completeness estimate.
    pub capped: bool,
    pub asymmetry: f64,
    pub solver: FdSolver,
    pub nx: usize,
    pub ny: usize,
    pub h: f64,
}

/// Compressed sparse rows.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Csr {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub cols: Vec<usize>,
    pub vals: Vec<f64>,
}

impl Csr {
    pub(crate) fn from_triplets(n: usize, mut t: Vec<(usize, usize, f64)>) -> Self {
        t.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut row_ptr = vec![0; n + 1];
        let mut cols = Vec::with_capacity(t.len());
        let mut vals: Vec<f64> = Vec::with_capacity(t.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in t {
            if last == Some((r, c)) {
                *vals.last_mut().unwrap() += v;
                continue;
            }
            cols.push(c);
            vals.push(v);
            row_ptr[r + 1] += 1;
            last = Some((r, c));
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Self { n, row_ptr, cols, vals }
    }

    pub(crate) fn get(&self, r: usize, c: usize) -> f64 {
        let row = &self.cols[self.row_ptr[r]..self.row_ptr[r + 1]];
        match row.binary_search(&c) {
            Ok(k) => self.vals[self.row_ptr[r] + k],
            Err(_) => 0.0,
        }
    }

    /// `max |A_ij − A_ji|` relative to `max |A_ij|`.
    pub(crate) fn asymmetry(&self) -> f64 {
        let scale = self.vals.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
        let mut worst = 0.0f64;
        for r in 0..self.n {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                worst = worst.max((self.vals[k] - self.get(self.cols[k], r)).abs());
            }
        }
        worst / scale
    }

    pub(crate) fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for r in 0..self.n {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                m[(r, self.cols[k])] = self.vals[k];
            }
        }
        m
    }
}

/// Interior grid of an `a × b` rectangle with spacing `h`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Grid {
    pub nx: usize,
    pub ny: usize,
    pub h: f64,
}

impl Grid {
    pub(crate) fn new(a: f64, b: f64, h: f64) -> Result<Self, SpectraError> {
        if !(a > 0.0 && b > 0.0 && h > 0.0) {
            return Err(SpectraError::InvalidArgument("rectangle sides and grid spacing must be positive"));
        }
        let nx = round(a / h) as usize;
        let ny = round(b / h) as usize;
        if nx < 2 || ny < 2 || (nx as f64 * h - a).abs() > 1e-9 * a || (ny as f64 * h - b).abs() > 1e-9 * b {
            return Err(SpectraError::InvalidArgument("grid spacing must divide both sides into at least two cells"));
        }
        Ok(Self { nx, ny, h })
    }

    /// Interior nodes.
    pub(crate) fn nodes(&self) -> usize {
        (self.nx - 1) * (self.ny - 1)
    }

    /// Index of interior node `(i, j)`, `1 ≤ i < nx`, `1 ≤ j < ny`.
    pub(crate) fn index(&self, i: i64, j: i64) -> Option<usize> {
        if i < 1 || j < 1 || i >= self.nx as i64 || j >= self.ny as i64 {
            return None;
        }
        Some((j as usize - 1) * (self.nx - 1) + (i as usize - 1))
    }

    pub(crate) fn interior(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        (1..self.ny as i64).flat_map(move |j| (1..self.nx as i64).map(move |i| (i, j)))
    }
}

/// `−αΔ_h` with the 5-point stencil.
pub(crate) fn heat_block(grid: &Grid, alpha: f64) -> Csr {
    let w = alpha / (grid.h * grid.h);
    let mut t = Vec::new();
    for (i, j) in grid.interior() {
        let p = grid.index(i, j).unwrap();
        t.push((p, p, 4.0 * w));
        for (di, dj) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
            if let Some(q) = grid.index(i + di, j + dj) {
                t.push((p, q, -w));
            }
        }
    }
    Csr::from_triplets(grid.nodes(), t)
}

/// `−(μΔ_h + (λ+μ) grad_h div_h)` on the displacement pair `(u₁, u₂)`,
/// interleaved per node (row `2p + c`) to keep the band narrow.
///
/// `∂xx`, `∂yy` are 3-point stencils and `∂xy` the 4-corner centred stencil,
/// which keeps the assembled matrix symmetric.
pub(crate) fn elastic_block(grid: &Grid, mu: f64, lambda: f64) -> Csr {
    let nodes = grid.nodes();
    let h2 = grid.h * grid.h;
    let lm = lambda + mu;
    let mut t = Vec::new();
    for (i, j) in grid.interior() {
        let p = grid.index(i, j).unwrap();
        for comp in 0..2usize {
            let row = 2 * p + comp;
            // μΔ plus (λ+μ)∂_cc on the same component.
            let (along_i, along_j) = if comp == 0 { (mu + lm, mu) } else { (mu, mu + lm) };
            t.push((row, row, 2.0 * (along_i + along_j) / h2));
            for (di, dj, w) in [(1, 0, along_i), (-1, 0, along_i), (0, 1, along_j), (0, -1, along_j)] {
                if let Some(q) = grid.index(i + di, j + dj) {
                    t.push((row, 2 * q + comp, -w / h2));
                }
            }
            // (λ+μ)∂xy on the other component.
            let other = 1 - comp;
            for (di, dj, s) in [(1, 1, 1.0), (-1, -1, 1.0), (1, -1, -1.0), (-1, 1, -1.0)] {
                if let Some(q) = grid.index(i + di, j + dj) {
                    t.push((row, 2 * q + other, -lm * s / (4.0 * h2)));
                }
            }
        }
    }
    Csr::from_triplets(2 * nodes, t)
}

fn solve_block(m: &Csr, opts: &FdOptions) -> Result<(Vec<f64>, FdSolver), SpectraError> {
    let asym = m.asymmetry();
    if asym > SYMMETRY_TOL {
        return Err(SpectraError::Assembly { asymmetry: asym });
    }
    if m.n <= opts.dense_limit {
        let mut values: Vec<f64> = m.to_dense().symmetric_eigenvalues().iter().copied().collect();
        values.sort_by(f64::total_cmp);
        return Ok((values, FdSolver::Dense));
    }
    // Shift-invert: the smallest values of A are the extreme ones of −A⁻¹.
    let chol = BandCholesky::new(m).ok_or(SpectraError::Solver("operator is not positive definite"))?;
    let count = opts.lanczos_count.min(m.n);
    let basis = (2 * count + 100).min(m.n);
    let r = lanczos_smallest(
        |x, y| {
            chol.solve(x, y);
            y.iter_mut().for_each(|v| *v = -*v);
        },
        m.n,
        count,
        8,
        basis,
        1e-10,
    );
    if r.values.is_empty() {
        return Err(SpectraError::Solver("no Ritz value converged"));
    }
    Ok((r.values.iter().map(|th| -1.0 / th).collect(), FdSolver::Lanczos))
}

/// Cholesky factor of a symmetric positive definite banded matrix, stored
/// row-wise over the band.
struct BandCholesky {
    n: usize,
    bw: usize,
    /// `l[i * (bw + 1) + (j + bw − i)]` holds `L_ij` for `i − bw ≤ j ≤ i`.
    l: Vec<f64>,
}

impl BandCholesky {
    fn new(m: &Csr) -> Option<Self> {
        let n = m.n;
        let mut bw = 0;
        for r in 0..n {
            for k in m.row_ptr[r]..m.row_ptr[r + 1] {
                bw = bw.max(r.abs_diff(m.cols[k]));
            }
        }
        let w = bw + 1;
        let mut l = vec![0.0; n * w];
        for r in 0..n {
            for k in m.row_ptr[r]..m.row_ptr[r + 1] {
                let c = m.cols[k];
                if c <= r {
                    l[r * w + (c + bw - r)] = m.vals[k];
                }
            }
        }
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            for j in lo..=i {
                let mut s = l[i * w + (j + bw - i)];
                let start = lo.max(j.saturating_sub(bw));
                for k in start..j {
                    s -= l[i * w + (k + bw - i)] * l[j * w + (k + bw - j)];
                }
                if j == i {
                    if !(s > 0.0) {
                        return None;
                    }
                    l[i * w + bw] = sqrt(s);
                } else {
                    l[i * w + (j + bw - i)] = s / l[j * w + bw];
                }
            }
        }
        Some(Self { n, bw, l })
    }

    fn solve(&self, b: &[f64], x: &mut [f64]) {
        let (n, bw, w) = (self.n, self.bw, self.bw + 1);
        x.copy_from_slice(b);
        for i in 0..n {
            let mut s = x[i];
            for k in i.saturating_sub(bw)..i {
                s -= self.l[i * w + (k + bw - i)] * x[k];
            }
            x[i] = s / self.l[i * w + bw];
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in i + 1..(i + bw + 1).min(n) {
                s -= self.l[k * w + (i + bw - k)] * x[k];
            }
            x[i] = s / self.l[i * w + bw];
        }
    }
}

/// Largest value of `fine` below which every two-grid estimate
/// `|λ_h − λ_2h|/3` is within `tol` relative.
fn completeness(fine: &[f64], coarse: &[f64], tol: f64) -> f64 {
    for (k, (f, c)) in fine.iter().zip(coarse).enumerate() {
        if (f - c).abs() / 3.0 > tol * f.abs() {
            return if k == 0 { 0.0 } else { fine[k - 1] };
        }
    }
    fine[coarse.len().min(fine.len()) - 1]
}

/// Finite-difference spectrum with default options.
pub fn fd_spectrum(params: &MaterialParams, a: f64, b: f64, h: f64, bc: BcKind) -> Result<FdSpectrum, SpectraError> {
    fd_spectrum_with(params, a, b, h, bc, &FdOptions::default())
}

pub fn fd_spectrum_with(
    params: &MaterialParams,
    a: f64,
    b: f64,
    h: f64,
    bc: BcKind,
    opts: &FdOptions,
) -> Result<FdSpectrum, SpectraError> {
    require_decoupled(params)?;
    if bc != BcKind::Dirichlet {
        return Err(SpectraError::Unsupported("finite differences support Dirichlet conditions only"));
    }
    let grid = Grid::new(a, b, h)?;
    if grid.nx % 2 != 0 || grid.ny % 2 != 0 {
        return Err(SpectraError::InvalidArgument("cell counts must be even for the two-grid estimate"));
    }
    let coarse = Grid::new(a, b, 2.0 * h)?;

    let elastic_m = elastic_block(&grid, params.mu, params.lambda);
    let heat_m = heat_block(&grid, params.alpha);
    let asymmetry = elastic_m.asymmetry().max(heat_m.asymmetry());
    let (elastic, solver) = solve_block(&elastic_m, opts)?;
    let (heat, _) = solve_block(&heat_m, opts)?;
    let (elastic_c, _) = solve_block(&elastic_block(&coarse, params.mu, params.lambda), opts)?;
    let (heat_c, _) = solve_block(&heat_block(&coarse, params.alpha), opts)?;

    let mut complete = completeness(&elastic, &elastic_c, opts.completeness_tol)
        .min(completeness(&heat, &heat_c, opts.completeness_tol));
    // A truncated iterative solve is only complete up to its last value.
    if solver == FdSolver::Lanczos {
        complete = complete.min(*elastic.last().unwrap()).min(*heat.last().unwrap());
    }
    let mut cutoff = complete;
    let mut capped = false;
    if let Some(req) = opts.requested_cutoff {
        if req > complete {
            capped = true;
        } else {
            cutoff = req;
        }
    }
    let all_max = elastic.iter().chain(&heat).fold(0.0f64, |m, v| m.max(*v));
    let e_sample = SpectrumSample::from_values(elastic.clone(), all_max, Source::Discretized, Some(bc));
    let h_sample = SpectrumSample::from_values(heat.clone(), all_max, Source::Discretized, Some(bc));
    let mut discrete = merge_samples(&[e_sample, h_sample]);
    if solver == FdSolver::Dense {
        discrete = discrete.into_finite_operator();
    }
    let sample = SpectrumSample::from_values(discrete.expanded(), cutoff, Source::Discretized, Some(bc));
    Ok(FdSpectrum {
        sample,
        discrete,
        elastic,
        heat,
        completeness: complete,
        capped,
        asymmetry,
        solver,
        nx: grid.nx,
        ny: grid.ny,
        h,
    })
}

/// Closed-form eigenvalues of `−αΔ_h` on the `nx × ny` grid:
/// `α (4/h²)(sin²(jπ/2nx) + sin²(kπ/2ny))`.
pub fn fd_heat_eigenvalues_exact(alpha: f64, a: f64, b: f64, h: f64) -> Result<Vec<f64>, SpectraError> {
    let g = Grid::new(a, b, h)?;
    let mut out = Vec::with_capacity(g.nodes());
    for j in 1..g.nx {
        for k in 1..g.ny {
            let sx = sin(j as f64 * PI / (2.0 * g.nx as f64));
            let sy = sin(k as f64 * PI / (2.0 * g.ny as f64));
            out.push(alpha * 4.0 / (h * h) * (sx * sx + sy * sy));
        }
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}
