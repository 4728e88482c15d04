use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use super::jet::GeometryJet;
use super::GeometryError;
use crate::math::{cos, sin, PI};

/// Relative central-difference step for first metric derivatives:
/// `h = DEFAULT_FD_STEP * (1 + |x_k|)`.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Relative step for second metric derivatives in finite-difference mode.
/// Second differences at `1e-5` lose ~6 digits to rounding.
pub const FD_SECOND_STEP: f64 = 1e-4;

/// How metric derivatives are obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DerivativeMode {
    Analytic,
    FiniteDifference { step: f64 },
}

/// Axis-aligned coordinate box `[lower_k, upper_k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoordBox {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl CoordBox {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Self {
        assert_eq!(lower.len(), upper.len());
        Self { lower, upper }
    }

    pub fn cube(dim: usize, lo: f64, hi: f64) -> Self {
        Self::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn contains(&self, x: &[f64]) -> Result<(), GeometryError> {
        if x.len() != self.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        for (axis, &xk) in x.iter().enumerate() {
            if !(xk >= self.lower[axis] && xk <= self.upper[axis]) {
                return Err(GeometryError::OutsideDomain {
                    point: x.to_vec(),
                    axis,
                });
            }
        }
        Ok(())
    }

    /// Maps `u ∈ [0,1]^n` affinely onto the box.
    pub fn lerp(&self, u: &[f64]) -> Vec<f64> {
        u.iter()
            .enumerate()
            .map(|(k, &t)| self.lower[k] + t * (self.upper[k] - self.lower[k]))
            .collect()
    }
}

/// Built-in metric families.
#[derive(Debug, Clone, PartialEq)]
pub enum ChartKind {
    /// `δ_ij` on the unit cube.
    Euclidean { dim: usize },
    /// `dr² + r²dθ²` on `[0, radius] × [0, 2π]`.
    PolarDisk { radius: f64 },
    /// Unit round sphere in hyperspherical angles `θ_1 … θ_{n-1} ∈ [0, π]`,
    /// `θ_n ∈ [0, 2π]`, with `g_ii = Π_{k<i} sin²θ_k`.
    RoundSphere { dim: usize },
    /// Poincaré ball `4|dx|²/(1-|x|²)²` restricted to `[-½, ½]^n`.
    HyperbolicBall { dim: usize },
    /// A constant SPD metric on the unit cube.
    Constant { metric: DMatrix<f64> },
}

/// Metric together with its first and second coordinate derivatives.
///
/// `first[k]` is `∂_k g`, `second[k * n + l]` is `∂_k ∂_l g`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricDerivatives {
    pub metric: DMatrix<f64>,
    pub first: Vec<DMatrix<f64>>,
    pub second: Vec<DMatrix<f64>>,
}

/// A single coordinate chart carrying a metric `g_ij(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricChart {
    kind: ChartKind,
    domain: CoordBox,
    mode: DerivativeMode,
    // Coordinates y = scale * x; g̃(y) = g(y / scale) / scale².
    scale: f64,
}

impl MetricChart {
    pub fn new(kind: ChartKind) -> Self {
        let domain = match &kind {
            ChartKind::Euclidean { dim } => CoordBox::cube(*dim, 0.0, 1.0),
            ChartKind::PolarDisk { radius } => CoordBox::new(vec![0.0, 0.0], vec![*radius, 2.0 * PI]),
            ChartKind::RoundSphere { dim } => {
                let mut upper = vec![PI; *dim];
                upper[dim - 1] = 2.0 * PI;
                CoordBox::new(vec![0.0; *dim], upper)
            }
            ChartKind::HyperbolicBall { dim } => CoordBox::cube(*dim, -0.5, 0.5),
            ChartKind::Constant { metric } => CoordBox::cube(metric.nrows(), 0.0, 1.0),
        };
        Self {
            kind,
            domain,
            mode: DerivativeMode::Analytic,
            scale: 1.0,
        }
    }

    pub fn euclidean(dim: usize) -> Self {
        Self::new(ChartKind::Euclidean { dim })
    }

    pub fn polar_disk(radius: f64) -> Self {
        Self::new(ChartKind::PolarDisk { radius })
    }

    pub fn sphere(dim: usize) -> Self {
        Self::new(ChartKind::RoundSphere { dim })
    }

    pub fn hyperbolic(dim: usize) -> Self {
        Self::new(ChartKind::HyperbolicBall { dim })
    }

    pub fn constant(metric: DMatrix<f64>) -> Self {
        Self::new(ChartKind::Constant { metric })
    }

    /// Looks up a catalog chart: `euclidean-N`, `polar-disk`, `sphere-N`,
    /// `hyperbolic-N`.
    pub fn from_id(id: &str) -> Result<Self, GeometryError> {
        let unknown = || GeometryError::UnknownChart(String::from(id));
        if id == "polar-disk" {
            return Ok(Self::polar_disk(1.0));
        }
        let (family, dim) = id.rsplit_once('-').ok_or_else(unknown)?;
        let dim: usize = dim.parse().map_err(|_| unknown())?;
        if dim == 0 || dim > 8 {
            return Err(unknown());
        }
        match family {
            "euclidean" => Ok(Self::euclidean(dim)),
            "sphere" if dim >= 2 => Ok(Self::sphere(dim)),
            "hyperbolic" => Ok(Self::hyperbolic(dim)),
            _ => Err(unknown()),
        }
    }

    /// The ids accepted by [`MetricChart::from_id`] for the standard test set.
    pub fn catalog_ids() -> &'static [&'static str] {
        &[
            "euclidean-2",
            "euclidean-3",
            "polar-disk",
            "sphere-2",
            "sphere-3",
            "hyperbolic-2",
            "hyperbolic-3",
        ]
    }

    pub fn id(&self) -> String {
        match &self.kind {
            ChartKind::Euclidean { dim } => format!("euclidean-{dim}"),
            ChartKind::PolarDisk { .. } => String::from("polar-disk"),
            ChartKind::RoundSphere { dim } => format!("sphere-{dim}"),
            ChartKind::HyperbolicBall { dim } => format!("hyperbolic-{dim}"),
            ChartKind::Constant { metric } => format!("constant-{}", metric.nrows()),
        }
    }

    pub fn with_mode(mut self, mode: DerivativeMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn finite_difference(self) -> Self {
        self.with_mode(DerivativeMode::FiniteDifference {
            step: DEFAULT_FD_STEP,
        })
    }

    /// Re-expresses the chart in coordinates `y = s·x`.
    pub fn with_coordinate_scale(mut self, s: f64) -> Self {
        assert!(s > 0.0, "coordinate scale must be positive");
        let ratio = s / self.scale;
        self.domain = CoordBox::new(
            self.domain.lower.iter().map(|v| v * ratio).collect(),
            self.domain.upper.iter().map(|v| v * ratio).collect(),
        );
        self.scale = s;
        self
    }

    pub fn kind(&self) -> &ChartKind {
        &self.kind
    }

    pub fn domain(&self) -> &CoordBox {
        &self.domain
    }

    pub fn mode(&self) -> DerivativeMode {
        self.mode
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    /// `g_ij(x)`; the point must lie in the chart domain.
    pub fn metric(&self, x: &[f64]) -> Result<DMatrix<f64>, GeometryError> {
        self.domain.contains(x)?;
        Ok(self.metric_unchecked(x))
    }

    fn metric_unchecked(&self, y: &[f64]) -> DMatrix<f64> {
        let x: Vec<f64> = y.iter().map(|v| v / self.scale).collect();
        let g = analytic_metric(&self.kind, &x, 0).metric;
        g / (self.scale * self.scale)
    }

    /// Metric and derivatives at `x`, analytic or by finite differences
    /// depending on the chart's [`DerivativeMode`].
    pub fn metric_derivatives(&self, x: &[f64]) -> Result<MetricDerivatives, GeometryError> {
        self.domain.contains(x)?;
        match self.mode {
            DerivativeMode::Analytic => {
                let s = self.scale;
                let xs: Vec<f64> = x.iter().map(|v| v / s).collect();
                let d = analytic_metric(&self.kind, &xs, 2);
                let (s2, s3, s4) = (s * s, s * s * s, s * s * s * s);
                Ok(MetricDerivatives {
                    metric: d.metric / s2,
                    first: d.first.into_iter().map(|m| m / s3).collect(),
                    second: d.second.into_iter().map(|m| m / s4).collect(),
                })
            }
            DerivativeMode::FiniteDifference { step } => Ok(self.fd_derivatives(x, step)),
        }
    }

    pub fn jet(&self, x: &[f64]) -> Result<GeometryJet, GeometryError> {
        let d = self.metric_derivatives(x)?;
        GeometryJet::from_derivatives(x, &d)
    }

    fn fd_derivatives(&self, x: &[f64], step: f64) -> MetricDerivatives {
        let n = x.len();
        let metric = self.metric_unchecked(x);
        let eval = |offsets: &[(usize, f64)]| {
            let mut p = x.to_vec();
            for &(axis, delta) in offsets {
                p[axis] += delta;
            }
            self.metric_unchecked(&p)
        };

        let mut first = Vec::with_capacity(n);
        for k in 0..n {
            let h = step * (1.0 + x[k].abs());
            let side = self.side(x, k, h, 2);
            let mut acc = DMatrix::zeros(n, n);
            for &(o, w) in first_stencil(side) {
                acc += eval(&[(k, o * h)]) * w;
            }
            first.push(acc / h);
        }

        let mut second = vec![DMatrix::zeros(n, n); n * n];
        for k in 0..n {
            let hk = FD_SECOND_STEP * (1.0 + x[k].abs());
            let side_k2 = self.side(x, k, hk, 3);
            let mut acc = DMatrix::zeros(n, n);
            for &(o, w) in second_stencil(side_k2) {
                acc += eval(&[(k, o * hk)]) * w;
            }
            second[k * n + k] = acc / (hk * hk);

            let side_k = self.side(x, k, hk, 2);
            for l in (k + 1)..n {
                let hl = FD_SECOND_STEP * (1.0 + x[l].abs());
                let side_l = self.side(x, l, hl, 2);
                let mut acc = DMatrix::zeros(n, n);
                for &(ok, wk) in first_stencil(side_k) {
                    for &(ol, wl) in first_stencil(side_l) {
                        acc += eval(&[(k, ok * hk), (l, ol * hl)]) * (wk * wl);
                    }
                }
                let mixed = acc / (hk * hl);
                second[l * n + k] = mixed.clone();
                second[k * n + l] = mixed;
            }
        }
        MetricDerivatives {
            metric,
            first,
            second,
        }
    }

    // Central if the stencil fits inside the box, otherwise one-sided.
    fn side(&self, x: &[f64], axis: usize, h: f64, reach: usize) -> Side {
        let lo = self.domain.lower[axis];
        let hi = self.domain.upper[axis];
        if x[axis] - h >= lo && x[axis] + h <= hi {
            Side::Central
        } else if x[axis] + reach as f64 * h <= hi {
            Side::Forward
        } else {
            Side::Backward
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Side {
    Central,
    Forward,
    Backward,
}

// (offset in steps, weight); derivative = Σ w f(x + o h) / h.
fn first_stencil(side: Side) -> &'static [(f64, f64)] {
    match side {
        Side::Central => &[(-1.0, -0.5), (1.0, 0.5)],
        Side::Forward => &[(0.0, -1.5), (1.0, 2.0), (2.0, -0.5)],
        Side::Backward => &[(0.0, 1.5), (-1.0, -2.0), (-2.0, 0.5)],
    }
}

fn second_stencil(side: Side) -> &'static [(f64, f64)] {
    match side {
        Side::Central => &[(-1.0, 1.0), (0.0, -2.0), (1.0, 1.0)],
        Side::Forward => &[(0.0, 2.0), (1.0, -5.0), (2.0, 4.0), (3.0, -1.0)],
        Side::Backward => &[(0.0, 2.0), (-1.0, -5.0), (-2.0, 4.0), (-3.0, -1.0)],
    }
}

/// Closed-form metric and derivatives up to `order` (0 or 2).
fn analytic_metric(kind: &ChartKind, x: &[f64], order: usize) -> MetricDerivatives {
    let n = x.len();
    let mut metric = DMatrix::zeros(n, n);
    let mut first = vec![DMatrix::zeros(n, n); if order > 0 { n } else { 0 }];
    let mut second = vec![DMatrix::zeros(n, n); if order > 0 { n * n } else { 0 }];

    match kind {
        ChartKind::Euclidean { .. } => metric.fill_with_identity(),
        ChartKind::Constant { metric: g } => metric.copy_from(g),
        ChartKind::PolarDisk { .. } => {
            let r = x[0];
            metric[(0, 0)] = 1.0;
            metric[(1, 1)] = r * r;
            if order > 0 {
                first[0][(1, 1)] = 2.0 * r;
                second[0][(1, 1)] = 2.0;
            }
        }
        ChartKind::RoundSphere { .. } => {
            // g_ii = Π_{k<i} f(θ_k), f = sin², f' = sin 2θ, f'' = 2 cos 2θ.
            let f: Vec<f64> = x.iter().map(|&t| sin(t) * sin(t)).collect();
            let df: Vec<f64> = x.iter().map(|&t| sin(2.0 * t)).collect();
            let ddf: Vec<f64> = x.iter().map(|&t| 2.0 * cos(2.0 * t)).collect();
            for i in 0..n {
                let prod_except = |skip: &[usize]| -> f64 {
                    (0..i).filter(|k| !skip.contains(k)).map(|k| f[k]).product()
                };
                metric[(i, i)] = prod_except(&[]);
                if order > 0 {
                    for m in 0..i {
                        first[m][(i, i)] = df[m] * prod_except(&[m]);
                        second[m * n + m][(i, i)] = ddf[m] * prod_except(&[m]);
                        for l in 0..i {
                            if l != m {
                                second[m * n + l][(i, i)] = df[m] * df[l] * prod_except(&[m, l]);
                            }
                        }
                    }
                }
            }
        }
        ChartKind::HyperbolicBall { .. } => {
            let r2: f64 = x.iter().map(|v| v * v).sum();
            let q = 1.0 - r2;
            let phi = 4.0 / (q * q);
            metric.fill_with_identity();
            metric *= phi;
            if order > 0 {
                let eye = DMatrix::<f64>::identity(n, n);
                for k in 0..n {
                    first[k] = &eye * (16.0 * x[k] / (q * q * q));
                    for l in 0..n {
                        let delta = if k == l { 1.0 } else { 0.0 };
                        let d2 = 16.0 * delta / (q * q * q) + 96.0 * x[k] * x[l] / (q * q * q * q);
                        second[k * n + l] = &eye * d2;
                    }
                }
            }
        }
    }
    MetricDerivatives {
        metric,
        first,
        second,
    }
}
