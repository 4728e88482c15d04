use alloc::vec;
use alloc::vec::Vec;

use super::chart::MetricChart;
use super::GeometryError;
use crate::math::{cos, sqrt, PI};

pub const DEFAULT_QUADRATURE_ORDER: usize = 32;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1);
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let n = order as f64;
    for i in 0..order.div_ceil(2) {
        let mut x = cos(PI * (i as f64 + 0.75) / (n + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence for P_n(x) and P_n'(x).
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=order {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            let p = if order == 1 { x } else { p1 };
            let pm1 = if order == 1 { 1.0 } else { p0 };
            dp = n * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    (nodes, weights)
}

/// Integral value with a two-level refinement error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureEstimate {
    pub value: f64,
    /// `|I(2q) − I(q)|` for base order `q`.
    pub error_estimate: f64,
    pub order: usize,
}

/// `∫ f √det g dx` over the chart box with the default order.
pub fn integrate_chart<F>(chart: &MetricChart, f: F) -> Result<QuadratureEstimate, GeometryError>
where
    F: Fn(&[f64]) -> f64,
{
    integrate_chart_with_order(chart, f, DEFAULT_QUADRATURE_ORDER)
}

pub fn integrate_chart_with_order<F>(
    chart: &MetricChart,
    f: F,
    order: usize,
) -> Result<QuadratureEstimate, GeometryError>
where
    F: Fn(&[f64]) -> f64,
{
    let coarse = tensor_gauss(chart, &f, order)?;
    let fine = tensor_gauss(chart, &f, 2 * order)?;
    Ok(QuadratureEstimate {
        value: fine,
        error_estimate: (fine - coarse).abs(),
        order: 2 * order,
    })
}

fn tensor_gauss<F>(chart: &MetricChart, f: &F, order: usize) -> Result<f64, GeometryError>
where
    F: Fn(&[f64]) -> f64,
{
    let (nodes, weights) = gauss_legendre(order);
    let dom = chart.domain();
    let n = chart.dim();
    let half: Vec<f64> = (0..n).map(|k| 0.5 * (dom.upper[k] - dom.lower[k])).collect();
    let mid: Vec<f64> = (0..n).map(|k| 0.5 * (dom.upper[k] + dom.lower[k])).collect();
    let jacobian: f64 = half.iter().product();

    let mut idx = vec![0usize; n];
    let mut x = vec![0.0; n];
    let mut total = 0.0;
    loop {
        let mut w = jacobian;
        for k in 0..n {
            x[k] = mid[k] + half[k] * nodes[idx[k]];
            w *= weights[idx[k]];
        }
        let g = chart.metric(&x)?;
        total += w * f(&x) * sqrt(g.determinant().max(0.0));

        let mut k = 0;
        loop {
            if k == n {
                return Ok(total);
            }
            idx[k] += 1;
            if idx[k] < order {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}
