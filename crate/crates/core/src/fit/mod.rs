//! Least-squares extraction of heat-trace coefficients, the Weyl counting
//! check, geometry recovery and the ball rigidity test.

mod expansion;
mod invariants;

pub use expansion::{
    choose_window, choose_window_with, fit_expansion, fit_expansion_with, fit_on_window, FitDelta, FitOptions,
    FitReport, Window, CONDITION_LIMIT, DEFAULT_DEGREE, DEFAULT_POINTS,
};
pub use invariants::{
    ellipse_perimeter, recover_from_coefficients, recover_geometry, rigidity_check, weyl_check, RecoveredGeometry,
    RigidityVerdict, WeylPoint, WeylReport, DEFAULT_RIGIDITY_TOL,
};

use crate::spectra::SpectraError;
use crate::symbol::ParamError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FitError {
    #[error("spectrum too short: cutoff {cutoff} leaves no fitting window; about {required:.3e} is needed")]
    InsufficientSpectrum { cutoff: f64, required: f64 },
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}
