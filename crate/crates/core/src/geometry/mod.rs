//! Coordinate metrics and the differential geometry derived from them.

mod chart;
mod jet;
mod quadrature;
mod tensor;

pub use chart::{
    ChartKind, CoordBox, DerivativeMode, MetricChart, MetricDerivatives, DEFAULT_FD_STEP,
    FD_SECOND_STEP,
};
pub use jet::{christoffel, curvature, invert_metric, ricci, GeometryJet};
pub use quadrature::{
    gauss_legendre, integrate_chart, integrate_chart_with_order, QuadratureEstimate,
    DEFAULT_QUADRATURE_ORDER,
};
pub use tensor::{Tensor3, Tensor4};

use alloc::string::String;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("metric is not symmetric positive definite (min eigenvalue {min_eigenvalue:e}, condition {condition:e})")]
    NotPositiveDefinite { min_eigenvalue: f64, condition: f64 },
    #[error("metric is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },
    #[error("point {point:?} lies outside the chart domain on axis {axis}")]
    OutsideDomain { point: Vec<f64>, axis: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("unknown chart id `{0}`")]
    UnknownChart(String),
}
