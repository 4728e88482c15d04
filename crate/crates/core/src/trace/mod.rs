//! Residues, ξ-integrals and the closed-form heat-trace coefficients.

mod coefficients;
mod integrals;
mod residue;

pub use coefficients::{
    a0_coefficient, a1_coefficient, interior_trace_density, weyl_prediction, BcKind,
    HeatCoefficients, Provenance,
};
pub use integrals::{
    boundary_layer_mass, boundary_layer_tail, gaussian_xi_integral, image_integral,
};
pub use residue::{
    channel_residue, residue_heat, Residue, ILL_CONDITIONED_GAP, MAX_POLE_ORDER, MERGE_TOL,
};

use crate::symbol::ParamError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TraceError {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error("merged pole of order {order} exceeds the supported maximum {max}")]
    UnsupportedPoleOrder { order: u32, max: u32 },
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}
