//! Exact and finite-difference eigenvalue samples and their heat traces.

mod bessel;
mod coupled;
mod domain;
mod exact;
mod fd;
mod lanczos;

pub use bessel::{
    bessel_j, bessel_j_prime, bessel_j_zeros, bessel_jp_zeros, disk_decoupled_spectrum,
    disk_laplacian_spectrum,
};
pub use coupled::{coupled_fd_eigenvalues, COUPLED_MAX_UNKNOWNS};
pub use domain::{DomainKind, DomainSpec};
pub use exact::{
    interval_spectrum, rectangle_decoupled_spectrum, rectangle_laplacian_spectrum, torus_spectrum,
};
pub use fd::{
    fd_heat_eigenvalues_exact, fd_spectrum, fd_spectrum_with, FdOptions, FdSolver, FdSpectrum,
    DENSE_LIMIT,
};
pub use lanczos::{lanczos_smallest, LanczosResult};

use alloc::vec::Vec;

use crate::math::{exp, ln};
use crate::symbol::{MaterialParams, ParamError};
use crate::trace::BcKind;

/// Bound on the omitted heat-trace tail `e^{−tΛ} N(Λ)`.
pub const TAIL_TOLERANCE: f64 = 1e-8;
/// Relative tolerance for merging equal eigenvalues.
pub const MERGE_RTOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpectraError {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error("unsupported configuration: {0}")]
    Unsupported(&'static str),
    #[error("coupled parameters (beta = {beta}, omega = {omega}) have no exact decoupled spectrum")]
    Coupled { beta: f64, omega: f64 },
    #[error("Bessel zero bracket exhausted for order {m}, zero {k}")]
    BracketExhausted { m: usize, k: usize },
    #[error("assembled operator is not symmetric (max asymmetry {asymmetry:e})")]
    Assembly { asymmetry: f64 },
    #[error("t = {t} is below the tail guard t_min = {t_min}")]
    TailGuard { t: f64, t_min: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
    #[error("eigenvalue solver failed: {0}")]
    Solver(&'static str),
}

/// Where the eigenvalues come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Exact,
    Discretized,
}

impl Source {
    pub fn as_str(self) -> &'static str {
        match self {
            Source::Exact => "exact",
            Source::Discretized => "discretized",
        }
    }
}

/// Sorted eigenvalues with multiplicities, complete below `cutoff`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSample {
    values: Vec<f64>,
    multiplicities: Vec<usize>,
    cutoff: f64,
    source: Source,
    /// `None` for boundaryless domains.
    bc: Option<BcKind>,
    /// The sample is the entire spectrum of a finite matrix, so no tail is
    /// omitted from its heat trace.
    finite_operator: bool,
}

impl SpectrumSample {
    /// Sorts `raw`, drops values above `cutoff` and merges values equal to
    /// within [`MERGE_RTOL`].
    pub fn from_values(mut raw: Vec<f64>, cutoff: f64, source: Source, bc: Option<BcKind>) -> Self {
        raw.retain(|v| *v <= cutoff);
        raw.sort_by(f64::total_cmp);
        let mut values: Vec<f64> = Vec::new();
        let mut multiplicities: Vec<usize> = Vec::new();
        for v in raw {
            match values.last() {
                Some(&last) if (v - last).abs() <= MERGE_RTOL * v.abs().max(last.abs()) => {
                    *multiplicities.last_mut().unwrap() += 1;
                }
                _ => {
                    values.push(v);
                    multiplicities.push(1);
                }
            }
        }
        Self {
            values,
            multiplicities,
            cutoff,
            source,
            bc,
            finite_operator: false,
        }
    }

    /// Marks the sample as the complete spectrum of a finite operator.
    pub fn into_finite_operator(mut self) -> Self {
        self.finite_operator = true;
        self
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn source(&self) -> Source {
        self.source
    }

    pub fn bc(&self) -> Option<BcKind> {
        self.bc
    }

    pub fn is_finite_operator(&self) -> bool {
        self.finite_operator
    }

    /// Eigenvalues repeated by multiplicity.
    pub fn expanded(&self) -> Vec<f64> {
        self.values
            .iter()
            .zip(&self.multiplicities)
            .flat_map(|(&v, &m)| core::iter::repeat_n(v, m))
            .collect()
    }

    /// Number of eigenvalues (with multiplicity) `≤ tau`.
    pub fn count_at(&self, tau: f64) -> usize {
        let end = self.values.partition_point(|&v| v <= tau);
        self.multiplicities[..end].iter().sum()
    }

    pub fn total_count(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    /// Multiplicity of the eigenvalue `0`.
    pub fn zero_modes(&self) -> usize {
        match self.values.first() {
            Some(&v) if v == 0.0 => self.multiplicities[0],
            _ => 0,
        }
    }

    /// Smallest positive eigenvalue.
    pub fn smallest_positive(&self) -> Option<f64> {
        self.values.iter().copied().find(|&v| v > 0.0)
    }

    /// Smallest `t` with `e^{−tΛ} N(Λ) ≤ 10⁻⁸`; zero when nothing is omitted.
    pub fn tail_guard(&self) -> f64 {
        let count = self.total_count();
        if self.finite_operator || count == 0 {
            return 0.0;
        }
        (ln(count as f64 / TAIL_TOLERANCE) / self.cutoff).max(0.0)
    }

    /// `Σ m_k e^{−tτ_k}`, refusing `t` below the tail guard.
    pub fn heat_trace(&self, t: f64) -> Result<f64, SpectraError> {
        let t_min = self.tail_guard();
        if t < t_min {
            return Err(SpectraError::TailGuard { t, t_min });
        }
        Ok(self.heat_trace_unguarded(t))
    }

    /// `Σ m_k e^{−tτ_k}` without the tail guard.
    pub fn heat_trace_unguarded(&self, t: f64) -> f64 {
        // Smallest terms first.
        self.values
            .iter()
            .zip(&self.multiplicities)
            .rev()
            .map(|(&v, &m)| m as f64 * exp(-t * v))
            .sum()
    }

    /// Multiplies every eigenvalue (and the cutoff) by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= factor);
        out.cutoff *= factor;
        out
    }
}

/// Merges samples of independent channels into one sample with the smallest
/// cutoff.
pub fn merge_samples(parts: &[SpectrumSample]) -> SpectrumSample {
    let cutoff = parts.iter().map(|p| p.cutoff).fold(f64::INFINITY, f64::min);
    let raw: Vec<f64> = parts.iter().flat_map(|p| p.expanded()).collect();
    let first = &parts[0];
    let mut out = SpectrumSample::from_values(raw, cutoff, first.source, first.bc);
    out.finite_operator = parts.iter().all(|p| p.finite_operator);
    out
}

pub(crate) fn require_decoupled(params: &MaterialParams) -> Result<(), SpectraError> {
    params.validate()?;
    if params.beta != 0.0 || params.omega != 0.0 {
        return Err(SpectraError::Coupled {
            beta: params.beta,
            omega: params.omega,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn merge_and_count() {
        let s = SpectrumSample::from_values(vec![2.0, 1.0, 1.0 + 1e-13, 0.0, 5.0], 3.0, Source::Exact, Some(BcKind::Neumann));
        assert_eq!(s.values(), &[0.0, 1.0, 2.0]);
        assert_eq!(s.multiplicities(), &[1, 2, 1]);
        assert_eq!(s.count_at(1.5), 3);
        assert_eq!(s.zero_modes(), 1);
        assert_eq!(s.smallest_positive(), Some(1.0));
    }

    #[test]
    fn tail_guard_formula() {
        let s = SpectrumSample::from_values(vec![1.0; 100], 100.0, Source::Exact, None);
        let expected = ln(100.0 / TAIL_TOLERANCE) / 100.0;
        assert!((s.tail_guard() - expected).abs() < 1e-15);
        assert!(matches!(s.heat_trace(expected * 0.5), Err(SpectraError::TailGuard { .. })));
        assert!(s.heat_trace(expected).is_ok());
        assert_eq!(s.clone().into_finite_operator().tail_guard(), 0.0);
    }

    #[test]
    fn coupled_parameters_rejected() {
        let mut p = MaterialParams::decoupled(0.0, 1.0, 1.0);
        p.beta = 1.0;
        assert!(matches!(require_decoupled(&p), Err(SpectraError::Coupled { .. })));
    }
}
