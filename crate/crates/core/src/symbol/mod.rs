//! Graded symbol of `τI + L_g`, its parametrix and the rational structure of
//! the parametrix traces.

mod assemble;
mod params;
mod parametrix;
mod poly;
mod rational;

pub use assemble::{
    assemble_c0, assemble_c1, assemble_c2, invert_c2, pole_locations, trace_b2, GradedSymbol,
    SymbolMatrix, POLE_EPS,
};
pub use params::{Channel, MaterialParams, ParamError};
pub use parametrix::{
    multi_indices, parametrix_term, verify_parametrix, OrderDefect, Parametrix,
    DEFAULT_MAX_ORDER, DEFAULT_X_STEP,
};
pub use poly::SymbolPoly;
pub use rational::{decompose_trace, RationalSymbolTerm, TraceDecomposition};

use num_complex::Complex64;

use crate::geometry::GeometryError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SymbolError {
    #[error("tau = {tau} lies on the pole {pole}")]
    Pole { tau: Complex64, pole: f64 },
    #[error("parametrix order {order} exceeds the configured maximum {max}")]
    UnsupportedOrder { order: usize, max: usize },
    #[error("invalid bookkeeping: k - 2(j + m + p) = {lhs}, expected {expected}")]
    Bookkeeping { lhs: i64, expected: i64 },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Param(#[from] ParamError),
}
