use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use super::integrals::gaussian_xi_integral;
use crate::geometry::GeometryJet;
use crate::math::{gamma, powf, PI};
use crate::symbol::{MaterialParams, ParamError};

/// Boundary condition of the eigenvalue problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum BcKind {
    Dirichlet,
    Neumann,
}

impl BcKind {
    /// `−1` for Dirichlet, `+1` for Neumann.
    pub fn sign(self) -> f64 {
        match self {
            BcKind::Dirichlet => -1.0,
            BcKind::Neumann => 1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BcKind::Dirichlet => "dirichlet",
            BcKind::Neumann => "neumann",
        }
    }
}

impl fmt::Display for BcKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BcKind {
    type Err = &'static str;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("dirichlet") {
            Ok(BcKind::Dirichlet)
        } else if s.eq_ignore_ascii_case("neumann") {
            Ok(BcKind::Neumann)
        } else {
            Err("expected `dirichlet` or `neumann`")
        }
    }
}

/// Whether coefficients come from the closed forms or from a fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Provenance {
    ClosedForm,
    Fitted,
}

/// Heat-trace expansion coefficients `a₀, a₁∓` (and fitted higher terms).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct HeatCoefficients {
    pub n: usize,
    pub a0: f64,
    pub a1_dirichlet: f64,
    pub a1_neumann: f64,
    /// Fitted coefficients of `t^{k/2}`, `k ≥ 2`; empty for closed forms.
    pub higher: Vec<f64>,
    pub provenance: Provenance,
}

impl HeatCoefficients {
    pub fn closed_form(params: &MaterialParams, n: usize, vol: f64, vol_boundary: f64) -> Result<Self, ParamError> {
        Ok(Self {
            n,
            a0: a0_coefficient(params, n, vol)?,
            a1_dirichlet: a1_coefficient(params, n, vol_boundary, BcKind::Dirichlet)?,
            a1_neumann: a1_coefficient(params, n, vol_boundary, BcKind::Neumann)?,
            higher: Vec::new(),
            provenance: Provenance::ClosedForm,
        })
    }

    pub fn a1(&self, bc: BcKind) -> f64 {
        match bc {
            BcKind::Dirichlet => self.a1_dirichlet,
            BcKind::Neumann => self.a1_neumann,
        }
    }
}

/// `a₀ = vol(Ω)/(4π)^{n/2} · ((n−1)/μ^{n/2} + 1/(λ+2μ)^{n/2} + 1/α^{n/2})`.
pub fn a0_coefficient(params: &MaterialParams, n: usize, vol: f64) -> Result<f64, ParamError> {
    params.validate()?;
    Ok(vol / powf(4.0 * PI, n as f64 / 2.0) * params.channel_sum(n, n))
}

/// `a₁∓ = ∓¼ vol(∂Ω)/(4π)^{(n−1)/2} · ((n−1)/μ^{(n−1)/2} + 1/(λ+2μ)^{(n−1)/2} + 1/α^{(n−1)/2})`.
pub fn a1_coefficient(params: &MaterialParams, n: usize, vol_boundary: f64, bc: BcKind) -> Result<f64, ParamError> {
    params.validate()?;
    let m = n - 1;
    Ok(bc.sign() * 0.25 * vol_boundary / powf(4.0 * PI, m as f64 / 2.0) * params.channel_sum(n, m))
}

/// Leading interior heat-kernel density `Σ_channels mult · (4π c t)^{−n/2}`.
pub fn interior_trace_density(params: &MaterialParams, jet: &GeometryJet, t: f64) -> f64 {
    let n = jet.dim();
    params
        .channels(n)
        .iter()
        .map(|ch| ch.multiplicity as f64 * gaussian_xi_integral(n, ch.rate, t))
        .sum()
}

/// Weyl counting prediction
/// `vol(Ω)/((4π)^{n/2} Γ(1+n/2)) · Σ_n · τ^{n/2}`.
pub fn weyl_prediction(params: &MaterialParams, n: usize, vol: f64, tau: f64) -> f64 {
    let half = n as f64 / 2.0;
    vol / (powf(4.0 * PI, half) * gamma(1.0 + half)) * params.channel_sum(n, n) * powf(tau, half)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::sqrt;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn a0_hand_values() {
        let unit = MaterialParams::decoupled(-1.0, 1.0, 1.0);
        assert!(close(a0_coefficient(&unit, 1, PI).unwrap(), 1.7724538509055159, 1e-14));
        let p = MaterialParams::decoupled(0.0, 1.0, 1.0);
        assert!(close(a0_coefficient(&p, 1, PI).unwrap(), 0.5 * sqrt(PI) * (1.0 + 1.0 / sqrt(2.0)), 1e-14));
        assert!(close(a0_coefficient(&p, 2, PI).unwrap(), 0.625, 1e-14));
        assert!(close(a0_coefficient(&p, 3, 1.0).unwrap(), 0.07528187528871759, 1e-14));
    }

    #[test]
    fn a1_hand_values() {
        let p = MaterialParams::decoupled(0.3, 1.7, 0.4);
        assert!(close(a1_coefficient(&p, 1, 2.0, BcKind::Dirichlet).unwrap(), -1.0, 1e-14));
        let q = MaterialParams::decoupled(-1.0, 1.0, 1.0);
        let v = a1_coefficient(&q, 2, 2.0 * PI, BcKind::Neumann).unwrap();
        assert!(close(v, 0.75 * sqrt(PI), 1e-14));
        let r = MaterialParams::decoupled(0.0, 1.0, 1.0);
        let w = a1_coefficient(&r, 2, 2.0 * PI, BcKind::Neumann).unwrap();
        assert!(close(w, 0.25 * sqrt(PI) * (2.0 + 1.0 / sqrt(2.0)), 1e-14));
        let d = a1_coefficient(&q, 2, 2.0 * PI, BcKind::Dirichlet).unwrap();
        assert_eq!(d + v, 0.0);
    }

    #[test]
    fn parameter_errors_propagate() {
        let p = MaterialParams::decoupled(0.0, -1.0, 1.0);
        assert_eq!(a0_coefficient(&p, 2, 1.0).unwrap_err().field(), "mu");
    }

    #[test]
    fn density_and_weyl() {
        let p = MaterialParams::decoupled(-1.0, 1.0, 1.0);
        let d = interior_trace_density(&p, &GeometryJet::flat(1), 1.0);
        assert!(close(d, 2.0 / sqrt(4.0 * PI), 1e-14));
        let q = MaterialParams::decoupled(-1.0, 1.0, 1.0);
        assert!(close(weyl_prediction(&q, 2, PI * PI, 1.0), 0.75 * PI, 1e-14));
        let ratio = weyl_prediction(&q, 2, 1.0, 2.0) / weyl_prediction(&q, 2, 1.0, 1.0);
        assert!(close(ratio, 2.0, 1e-14));
    }

    #[test]
    fn bc_parsing() {
        assert_eq!("Dirichlet".parse::<BcKind>().unwrap(), BcKind::Dirichlet);
        assert_eq!("neumann".parse::<BcKind>().unwrap(), BcKind::Neumann);
        assert!("robin".parse::<BcKind>().is_err());
    }
}
