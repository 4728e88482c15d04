//! Spectral geometry of the thermoelastic operator.
//!
//! The crate is `no_std` (with `alloc`) and purely computational:
//!
//! - [`geometry`]: coordinate metrics, Christoffel symbols, curvature and
//!   chart quadrature.
//! - [`symbol`]: the graded symbol `c₂ + c₁ + c₀` of `τI + L_g`, the
//!   parametrix terms `b₋₂₋ₗ` and composition checks.
//! - [`trace`]: residues, Gaussian and image integrals, and the closed-form
//!   heat-trace coefficients `a₀`, `a₁∓`.
//! - [`spectra`]: exact and finite-difference eigenvalue samples and their
//!   heat traces.
//! - [`fit`]: least-squares extraction of expansion coefficients, the Weyl
//!   counting check and the ball rigidity test.
//!
//! IO, configuration and the command line live in the `thermospec` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod fit;
pub mod geometry;
pub mod spectra;
pub mod symbol;
pub mod trace;

mod math;

pub use num_complex::Complex64;

pub use fit::{FitReport, RigidityVerdict, Window};
pub use geometry::{GeometryJet, MetricChart};
pub use spectra::{DomainSpec, SpectrumSample};
pub use symbol::{MaterialParams, SymbolMatrix};
pub use trace::{BcKind, HeatCoefficients};
