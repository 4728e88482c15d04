#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::math::powf;

/// Physical constants of the thermoelastic operator.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct MaterialParams {
    /// Lamé λ.
    pub lambda: f64,
    /// Lamé μ (shear modulus), must be positive.
    pub mu: f64,
    /// Heat conduction coefficient, must be positive.
    pub alpha: f64,
    /// Thermoelastic coupling.
    #[cfg_attr(feature = "serde", serde(default))]
    pub beta: f64,
    /// Specific heat per unit volume.
    #[cfg_attr(feature = "serde", serde(default = "one"))]
    pub gamma: f64,
    /// Density.
    #[cfg_attr(feature = "serde", serde(default = "one"))]
    pub rho: f64,
    /// Angular frequency.
    #[cfg_attr(feature = "serde", serde(default))]
    pub omega: f64,
    /// Reference temperature.
    #[cfg_attr(feature = "serde", serde(default = "one"))]
    pub theta0: f64,
}

#[cfg(feature = "serde")]
fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum ParamError {
    #[error("mu must be positive (got {0})")]
    Mu(f64),
    #[error("lambda + mu must be nonnegative (lambda = {lambda}, mu = {mu})")]
    Lambda { lambda: f64, mu: f64 },
    #[error("alpha must be positive (got {0})")]
    Alpha(f64),
    #[error("{0} must be finite")]
    NotFinite(&'static str),
}

impl ParamError {
    /// Name of the offending field.
    pub fn field(&self) -> &'static str {
        match self {
            ParamError::Mu(_) => "mu",
            ParamError::Lambda { .. } => "lambda",
            ParamError::Alpha(_) => "alpha",
            ParamError::NotFinite(name) => name,
        }
    }
}

/// One diffusion channel of the principal symbol: rate and multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Channel {
    pub rate: f64,
    pub multiplicity: usize,
}

impl MaterialParams {
    /// Decoupled, self-adjoint configuration (`β = ω = 0`).
    pub fn decoupled(lambda: f64, mu: f64, alpha: f64) -> Self {
        Self {
            lambda,
            mu,
            alpha,
            beta: 0.0,
            gamma: 1.0,
            rho: 1.0,
            omega: 0.0,
            theta0: 1.0,
        }
    }

    /// Checks `μ > 0`, `λ + μ ≥ 0`, `α > 0`.
    pub fn validate(&self) -> Result<(), ParamError> {
        let fields = [
            ("lambda", self.lambda),
            ("mu", self.mu),
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("gamma", self.gamma),
            ("rho", self.rho),
            ("omega", self.omega),
            ("theta0", self.theta0),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(ParamError::NotFinite(name));
            }
        }
        if !(self.mu > 0.0) {
            return Err(ParamError::Mu(self.mu));
        }
        if !(self.lambda + self.mu >= 0.0) {
            return Err(ParamError::Lambda {
                lambda: self.lambda,
                mu: self.mu,
            });
        }
        if !(self.alpha > 0.0) {
            return Err(ParamError::Alpha(self.alpha));
        }
        Ok(())
    }

    /// `λ + 2μ`.
    pub fn pressure_rate(&self) -> f64 {
        self.lambda + 2.0 * self.mu
    }

    pub fn is_decoupled(&self) -> bool {
        self.beta == 0.0 && self.omega == 0.0
    }

    /// Shear (`μ`, multiplicity `n − 1`), pressure (`λ + 2μ`, 1) and heat
    /// (`α`, 1) channels.
    pub fn channels(&self, n: usize) -> [Channel; 3] {
        [
            Channel {
                rate: self.mu,
                multiplicity: n.saturating_sub(1),
            },
            Channel {
                rate: self.pressure_rate(),
                multiplicity: 1,
            },
            Channel {
                rate: self.alpha,
                multiplicity: 1,
            },
        ]
    }

    /// `(n−1)/μ^{m/2} + 1/(λ+2μ)^{m/2} + 1/α^{m/2}`.
    pub fn channel_sum(&self, n: usize, m: usize) -> f64 {
        let e = m as f64 / 2.0;
        self.channels(n)
            .iter()
            .map(|c| c.multiplicity as f64 / powf(c.rate, e))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hypotheses_are_enforced() {
        assert!(MaterialParams::decoupled(0.0, 1.0, 1.0).validate().is_ok());
        assert!(MaterialParams::decoupled(-1.0, 1.0, 1.0).validate().is_ok());
        let e = MaterialParams::decoupled(0.0, -1.0, 1.0).validate().unwrap_err();
        assert_eq!(e.field(), "mu");
        let e = MaterialParams::decoupled(-2.0, 1.0, 1.0).validate().unwrap_err();
        assert_eq!(e.field(), "lambda");
        let e = MaterialParams::decoupled(0.0, 1.0, 0.0).validate().unwrap_err();
        assert_eq!(e.field(), "alpha");
        let e = MaterialParams::decoupled(f64::NAN, 1.0, 1.0).validate().unwrap_err();
        assert_eq!(e.field(), "lambda");
    }

    #[test]
    fn channel_sums() {
        let p = MaterialParams::decoupled(1.0, 1.0, 1.0);
        assert!((p.channel_sum(2, 2) - (1.0 + 1.0 / 3.0 + 1.0)).abs() < 1e-15);
        assert!((p.channel_sum(1, 0) - 2.0).abs() < 1e-15);
    }
}
