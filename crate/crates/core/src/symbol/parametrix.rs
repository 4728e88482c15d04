//! Parametrix terms `b₋₂₋ₗ` from the symbol recursion, and composition checks.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::assemble::{invert_c2, GradedSymbol, SymbolMatrix};
use super::params::MaterialParams;
use super::poly::CMatrix;
use super::SymbolError;
use crate::geometry::MetricChart;
use crate::math::factorial;

pub const DEFAULT_MAX_ORDER: usize = 2;
/// Step of the nested central differences in `x`.
pub const DEFAULT_X_STEP: f64 = 1e-4;
/// Relative step of the central differences in `ξ` used by the left
/// composition check.
const XI_STEP: f64 = 1e-4;

/// All multi-indices `J ∈ ℕⁿ` with `|J| = order`, as per-axis counts, in
/// lexicographic order.
pub fn multi_indices(n: usize, order: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = vec![0; n];
    fill(&mut out, &mut current, 0, order);
    out
}

fn fill(out: &mut Vec<Vec<usize>>, current: &mut Vec<usize>, axis: usize, remaining: usize) {
    let n = current.len();
    if axis + 1 == n {
        current[axis] = remaining;
        out.push(current.clone());
        current[axis] = 0;
        return;
    }
    if n == 0 {
        if remaining == 0 {
            out.push(Vec::new());
        }
        return;
    }
    for c in (0..=remaining).rev() {
        current[axis] = c;
        fill(out, current, axis + 1, remaining - c);
    }
    current[axis] = 0;
}

fn multi_factorial(counts: &[usize]) -> f64 {
    counts.iter().map(|&c| factorial(c)).product()
}

/// `(−i)^k`.
fn minus_i_pow(k: usize) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

/// Identity defects of the composition at one order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderDefect {
    pub order: usize,
    /// `‖Σ (1/J!) ∂_ξ^J c_k D_x^J b₋₂₋ⱼ − δ_{l0} I‖_max`.
    pub right: f64,
    /// `‖Σ (1/J!) ∂_ξ^J b₋₂₋ⱼ D_x^J c_k − δ_{l0} I‖_max`.
    pub left: f64,
}

impl OrderDefect {
    pub fn max(&self) -> f64 {
        self.right.max(self.left)
    }
}

/// Pointwise evaluator of the parametrix of `τI + L_g` on a chart.
#[derive(Debug, Clone)]
pub struct Parametrix<'a> {
    chart: &'a MetricChart,
    params: MaterialParams,
    max_order: usize,
    step: f64,
}

impl<'a> Parametrix<'a> {
    pub fn new(chart: &'a MetricChart, params: MaterialParams) -> Self {
        Self {
            chart,
            params,
            max_order: DEFAULT_MAX_ORDER,
            step: DEFAULT_X_STEP,
        }
    }

    pub fn with_max_order(mut self, max_order: usize) -> Self {
        self.max_order = max_order;
        self
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }

    pub fn chart(&self) -> &'a MetricChart {
        self.chart
    }

    pub fn params(&self) -> &MaterialParams {
        &self.params
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    fn check_order(&self, l: usize) -> Result<(), SymbolError> {
        if l > self.max_order {
            return Err(SymbolError::UnsupportedOrder {
                order: l,
                max: self.max_order,
            });
        }
        Ok(())
    }

    fn graded(&self, x: &[f64], tau: Complex64) -> Result<GradedSymbol, SymbolError> {
        let jet = self.chart.jet(x)?;
        Ok(GradedSymbol::new(&self.params, &jet, tau))
    }

    /// `b₋₂₋ₗ(x, ξ, τ)`.
    pub fn term(&self, l: usize, x: &[f64], xi: &[f64], tau: Complex64) -> Result<SymbolMatrix, SymbolError> {
        self.check_order(l)?;
        Ok(SymbolMatrix::new(self.term_raw(l, x, xi, tau)?))
    }

    fn term_raw(&self, l: usize, x: &[f64], xi: &[f64], tau: Complex64) -> Result<CMatrix, SymbolError> {
        let jet = self.chart.jet(x)?;
        let b2 = invert_c2(&self.params, &jet, xi, tau)?.entries;
        if l == 0 {
            return Ok(b2);
        }
        let sym = GradedSymbol::new(&self.params, &jet, tau);
        let sum = self.right_sum(l, &sym, x, xi, tau, false)?;
        Ok(-(&b2 * sum))
    }

    /// `Σ (1/J!) ∂_ξ^J c_k D_x^J b₋₂₋ⱼ` over the terms of order `−l`, with
    /// `j < l` only, or with `j ≤ l` when `include_top` is set.
    fn right_sum(
        &self,
        l: usize,
        sym: &GradedSymbol,
        x: &[f64],
        xi: &[f64],
        tau: Complex64,
        include_top: bool,
    ) -> Result<CMatrix, SymbolError> {
        let n = x.len();
        let size = n + 1;
        let mut sum = CMatrix::zeros(size, size);
        let top = if include_top { l + 1 } else { l };
        for j in 0..top {
            for k in 0..=2usize {
                let order = k as i64 + l as i64 - j as i64 - 2;
                if order < 0 || order > k as i64 {
                    continue;
                }
                let order = order as usize;
                for counts in multi_indices(n, order) {
                    let dc = sym.grade(k).derivative(&counts, xi);
                    let db = self.dx_term(j, &counts, x, xi, tau)?;
                    let w = minus_i_pow(order) / multi_factorial(&counts);
                    sum += dc * db * w;
                }
            }
        }
        Ok(sum)
    }

    /// `∂_x^J b₋₂₋ⱼ` by nested fourth-order central differences.
    fn dx_term(&self, j: usize, counts: &[usize], x: &[f64], xi: &[f64], tau: Complex64) -> Result<CMatrix, SymbolError> {
        match counts.iter().position(|&c| c > 0) {
            None => self.term_raw(j, x, xi, tau),
            Some(axis) => {
                let mut rest = counts.to_vec();
                rest[axis] -= 1;
                five_point(x, axis, self.step, |y| self.dx_term(j, &rest, y, xi, tau))
            }
        }
    }

    /// `∂_x^J c_k` by nested fourth-order central differences.
    fn dx_grade(&self, k: usize, counts: &[usize], x: &[f64], xi: &[f64], tau: Complex64) -> Result<CMatrix, SymbolError> {
        match counts.iter().position(|&c| c > 0) {
            None => Ok(self.graded(x, tau)?.grade(k).eval(xi)),
            Some(axis) => {
                let mut rest = counts.to_vec();
                rest[axis] -= 1;
                five_point(x, axis, self.step, |y| self.dx_grade(k, &rest, y, xi, tau))
            }
        }
    }

    /// `∂_ξ^J b₋₂₋ⱼ`: analytic for `b₋₂` up to second order, nested central
    /// differences otherwise.
    fn dxi_term(&self, j: usize, counts: &[usize], x: &[f64], xi: &[f64], tau: Complex64) -> Result<CMatrix, SymbolError> {
        let order: usize = counts.iter().sum();
        if j == 0 && order <= 2 {
            let jet = self.chart.jet(x)?;
            let b = invert_c2(&self.params, &jet, xi, tau)?.entries;
            if order == 0 {
                return Ok(b);
            }
            let sym = GradedSymbol::new(&self.params, &jet, tau);
            let axes: Vec<usize> = counts
                .iter()
                .enumerate()
                .flat_map(|(axis, &c)| core::iter::repeat_n(axis, c))
                .collect();
            let unit = |a: usize| {
                let mut e = vec![0; counts.len()];
                e[a] = 1;
                sym.c2.derivative(&e, xi)
            };
            if order == 1 {
                return Ok(-(&b * unit(axes[0]) * &b));
            }
            let (da, db) = (unit(axes[0]), unit(axes[1]));
            let dab = sym.c2.derivative(counts, xi);
            return Ok(&b * &da * &b * &db * &b + &b * &db * &b * &da * &b - &b * dab * &b);
        }
        match counts.iter().position(|&c| c > 0) {
            None => self.term_raw(j, x, xi, tau),
            Some(axis) => {
                let mut rest = counts.to_vec();
                rest[axis] -= 1;
                let h = XI_STEP * (1.0 + xi.iter().fold(0.0f64, |m, v| m.max(v.abs())));
                let (plus, minus) = shifted(xi, axis, h);
                let fp = self.dxi_term(j, &rest, x, &plus, tau)?;
                let fm = self.dxi_term(j, &rest, x, &minus, tau)?;
                Ok((fp - fm) / Complex64::from(2.0 * h))
            }
        }
    }

    /// Left composition `Σ (1/J!) ∂_ξ^J b₋₂₋ⱼ D_x^J c_k` at order `−l`.
    fn left_sum(&self, l: usize, x: &[f64], xi: &[f64], tau: Complex64) -> Result<CMatrix, SymbolError> {
        let n = x.len();
        let mut sum = CMatrix::zeros(n + 1, n + 1);
        for j in 0..=l {
            for k in 0..=2usize {
                let order = k as i64 + l as i64 - j as i64 - 2;
                if order < 0 || order > (l - j) as i64 {
                    continue;
                }
                let order = order as usize;
                for counts in multi_indices(n, order) {
                    let db = self.dxi_term(j, &counts, x, xi, tau)?;
                    let dc = self.dx_grade(k, &counts, x, xi, tau)?;
                    let w = minus_i_pow(order) / multi_factorial(&counts);
                    sum += db * dc * w;
                }
            }
        }
        Ok(sum)
    }

    /// Identity defects of both compositions for orders `0..=up_to`.
    pub fn verify(&self, x: &[f64], xi: &[f64], tau: Complex64, up_to: usize) -> Result<Vec<OrderDefect>, SymbolError> {
        self.check_order(up_to)?;
        let sym = self.graded(x, tau)?;
        let size = x.len() + 1;
        let identity = CMatrix::identity(size, size);
        let mut out = Vec::with_capacity(up_to + 1);
        for l in 0..=up_to {
            let mut right = self.right_sum(l, &sym, x, xi, tau, true)?;
            let mut left = self.left_sum(l, x, xi, tau)?;
            if l == 0 {
                right -= &identity;
                left -= &identity;
            }
            out.push(OrderDefect {
                order: l,
                right: max_abs(&right),
                left: max_abs(&left),
            });
        }
        Ok(out)
    }
}

/// `(−f(x+2h) + 8f(x+h) − 8f(x−h) + f(x−2h)) / 12h` along `axis`.
fn five_point<F>(x: &[f64], axis: usize, h: f64, f: F) -> Result<CMatrix, SymbolError>
where
    F: Fn(&[f64]) -> Result<CMatrix, SymbolError>,
{
    let (p1, m1) = shifted(x, axis, h);
    let (p2, m2) = shifted(x, axis, 2.0 * h);
    let near = f(&p1)? - f(&m1)?;
    let far = f(&p2)? - f(&m2)?;
    Ok((near * Complex64::from(8.0) - far) / Complex64::from(12.0 * h))
}

fn shifted(x: &[f64], axis: usize, h: f64) -> (Vec<f64>, Vec<f64>) {
    let mut plus = x.to_vec();
    let mut minus = x.to_vec();
    plus[axis] += h;
    minus[axis] -= h;
    (plus, minus)
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| f64::max(acc, z.norm()))
}

/// `b₋₂₋ₗ(x, ξ, τ)` with the default maximum order and step.
pub fn parametrix_term(
    l: usize,
    chart: &MetricChart,
    params: &MaterialParams,
    x: &[f64],
    xi: &[f64],
    tau: Complex64,
) -> Result<SymbolMatrix, SymbolError> {
    Parametrix::new(chart, *params).term(l, x, xi, tau)
}

/// Composition defects for orders `0..=up_to` with default settings.
pub fn verify_parametrix(
    chart: &MetricChart,
    params: &MaterialParams,
    x: &[f64],
    xi: &[f64],
    tau: Complex64,
    up_to: usize,
) -> Result<Vec<OrderDefect>, SymbolError> {
    Parametrix::new(chart, *params).verify(x, xi, tau, up_to)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::{assemble_c1, invert_c2};
    use crate::GeometryJet;

    #[test]
    fn multi_index_enumeration() {
        assert_eq!(multi_indices(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(multi_indices(3, 0), vec![vec![0, 0, 0]]);
        assert_eq!(multi_indices(3, 2).len(), 6);
        assert_eq!(multi_indices(1, 3), vec![vec![3]]);
    }

    #[test]
    fn flat_decoupled_first_term_vanishes() {
        let chart = MetricChart::euclidean(2);
        let p = MaterialParams::decoupled(1.0, 1.0, 2.0);
        let b = parametrix_term(1, &chart, &p, &[0.5, 0.5], &[0.3, 0.8], Complex64::from(-1.0)).unwrap();
        assert!(b.max_abs() < 1e-15);
    }

    #[test]
    fn flat_coupled_first_term_is_direct_product() {
        let chart = MetricChart::euclidean(2);
        let mut p = MaterialParams::decoupled(1.0, 1.0, 2.0);
        p.beta = 1.0;
        p.omega = 0.7;
        let (x, xi, tau) = ([0.5, 0.5], [0.3, 0.8], Complex64::new(-1.0, 0.5));
        let b3 = parametrix_term(1, &chart, &p, &x, &xi, tau).unwrap();
        let jet = GeometryJet::flat(2);
        let b2 = invert_c2(&p, &jet, &xi, tau).unwrap().entries;
        let c1 = assemble_c1(&p, &jet, &xi).entries;
        let expected = -(&b2 * c1 * &b2);
        assert!(b3.max_abs_diff(&SymbolMatrix::new(expected)) < 1e-12);
    }

    #[test]
    fn polar_composition_defects() {
        let chart = MetricChart::polar_disk(3.0);
        let p = MaterialParams::decoupled(1.0, 1.0, 2.0);
        let d = verify_parametrix(&chart, &p, &[2.0, 1.0], &[0.7, -0.4], Complex64::from(-1.0), 2).unwrap();
        assert!(d[0].max() < 1e-12);
        assert!(d[1].max() < 1e-6, "{:?}", d[1]);
        assert!(d[2].max() < 1e-4, "{:?}", d[2]);
    }

    #[test]
    fn order_above_maximum_is_rejected() {
        let chart = MetricChart::euclidean(1);
        let p = MaterialParams::decoupled(0.0, 1.0, 1.0);
        let err = parametrix_term(3, &chart, &p, &[0.5], &[1.0], Complex64::from(-1.0)).unwrap_err();
        assert_eq!(err, SymbolError::UnsupportedOrder { order: 3, max: 2 });
    }
}
