//! Partial-fraction structure of `Tr b₋₂₋ₗ` in `τ`.

use alloc::vec::Vec;

use num_complex::Complex64;

use super::assemble::pole_locations;
use super::parametrix::Parametrix;
use super::SymbolError;
use crate::math::{exp, factorial, powi, PI};

/// Trapezoid nodes on each residue circle.
const CONTOUR_POINTS: usize = 64;
/// Coefficients below this fraction of the largest one are dropped.
const NEGLIGIBLE: f64 = 1e-10;
/// Pole locations closer than this are merged.
const MERGE_TOL: f64 = 1e-12;

/// `r(x, ξ) / ((τ−μ|ξ|²)^j (τ−α|ξ|²)^m (τ−(λ+2μ)|ξ|²)^p)` with `r`
/// homogeneous of degree `k` in `ξ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RationalSymbolTerm {
    order: usize,
    numerator_degree: i64,
    pole_exponents: [u32; 3],
    pub coefficient: Complex64,
}

impl RationalSymbolTerm {
    /// Checks `k − 2j − 2m − 2p = −2 − l`.
    pub fn new(order: usize, numerator_degree: i64, pole_exponents: [u32; 3], coefficient: Complex64) -> Result<Self, SymbolError> {
        let lhs = numerator_degree - 2 * pole_exponents.iter().map(|&e| e as i64).sum::<i64>();
        let expected = -2 - order as i64;
        if lhs != expected {
            return Err(SymbolError::Bookkeeping { lhs, expected });
        }
        Ok(Self {
            order,
            numerator_degree,
            pole_exponents,
            coefficient,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn numerator_degree(&self) -> i64 {
        self.numerator_degree
    }

    /// Exponents `(j, m, p)` at `μ|ξ|²`, `α|ξ|²`, `(λ+2μ)|ξ|²`.
    pub fn pole_exponents(&self) -> [u32; 3] {
        self.pole_exponents
    }
}

/// `Tr b₋₂₋ₗ(x, ξ, ·)` as a sum of principal parts at the (merged) poles.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceDecomposition {
    pub order: usize,
    /// Pole location for each of the three slots; merged slots repeat the
    /// location of the slot they were merged into.
    pub poles: [f64; 3],
    pub terms: Vec<RationalSymbolTerm>,
}

impl TraceDecomposition {
    fn location(&self, term: &RationalSymbolTerm) -> (f64, u32) {
        let slot = term.pole_exponents.iter().position(|&e| e > 0).expect("term has a pole");
        (self.poles[slot], term.pole_exponents[slot])
    }

    /// Evaluates the decomposition at `τ`.
    pub fn eval(&self, tau: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|t| {
                let (p, e) = self.location(t);
                t.coefficient / (tau - p).powu(e)
            })
            .sum()
    }

    /// `(1/2πi) ∮ e^{−tτ} Σ terms dτ`, i.e. `Σ r (−t)^{e−1} e^{−tP} / (e−1)!`.
    pub fn heat_residue(&self, t: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|term| {
                let (p, e) = self.location(term);
                let e = e as i32;
                term.coefficient * (powi(-t, e - 1) * exp(-t * p) / factorial((e - 1) as usize))
            })
            .sum()
    }
}

/// Decomposes `Tr b₋₂₋ₗ(x, ξ, τ)` into partial fractions in `τ` by contour
/// integration of the trace around each pole.
pub fn decompose_trace(parametrix: &Parametrix<'_>, l: usize, x: &[f64], xi: &[f64]) -> Result<TraceDecomposition, SymbolError> {
    let jet = parametrix.chart().jet(x)?;
    let q = jet.norm_sq(xi);
    let mut poles = pole_locations(parametrix.params(), q);
    let mut distinct: Vec<usize> = Vec::new();
    for slot in 0..3 {
        if let Some(&first) = distinct.iter().find(|&&s| (poles[s] - poles[slot]).abs() <= MERGE_TOL * (1.0 + poles[s].abs())) {
            poles[slot] = poles[first];
        } else {
            distinct.push(slot);
        }
    }
    let scale = distinct.iter().fold(0.0f64, |m, &s| m.max(poles[s].abs())).max(1e-300);
    let min_gap = distinct
        .iter()
        .flat_map(|&a| distinct.iter().filter(move |&&b| b > a).map(move |&b| (poles[a] - poles[b]).abs()))
        .fold(f64::INFINITY, f64::min);
    let radius = 0.3 * if min_gap.is_finite() { min_gap } else { scale };
    let max_exponent = 2 * l as u32 + 3;

    let mut raw: Vec<(usize, u32, Complex64)> = Vec::new();
    for &slot in &distinct {
        let centre = poles[slot];
        let samples: Vec<(Complex64, Complex64)> = (0..CONTOUR_POINTS)
            .map(|i| {
                let w = Complex64::from_polar(1.0, 2.0 * PI * i as f64 / CONTOUR_POINTS as f64);
                let tau = centre + w * radius;
                parametrix.term(l, x, xi, tau).map(|b| (w * radius, b.trace()))
            })
            .collect::<Result<_, _>>()?;
        for e in 1..=max_exponent {
            // r_e = (1/2πi) ∮ (τ−P)^{e−1} F dτ = mean over nodes of (τ−P)^e F
            let r: Complex64 = samples.iter().map(|(d, f)| d.powu(e) * f).sum::<Complex64>() / CONTOUR_POINTS as f64;
            raw.push((slot, e, r));
        }
    }
    let largest = raw.iter().fold(0.0f64, |m, (_, _, r)| m.max(r.norm()));
    let mut terms = Vec::new();
    for (slot, e, r) in raw {
        if r.norm() <= NEGLIGIBLE * largest {
            continue;
        }
        let mut exps = [0u32; 3];
        exps[slot] = e;
        terms.push(RationalSymbolTerm::new(l, 2 * e as i64 - 2 - l as i64, exps, r)?);
    }
    Ok(TraceDecomposition { order: l, poles, terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::MetricChart;
    use crate::symbol::{trace_b2, MaterialParams};

    #[test]
    fn bookkeeping_is_enforced() {
        assert!(RationalSymbolTerm::new(0, 0, [1, 0, 0], Complex64::from(1.0)).is_ok());
        assert!(RationalSymbolTerm::new(1, 1, [0, 2, 0], Complex64::from(1.0)).is_ok());
        assert!(matches!(
            RationalSymbolTerm::new(0, 1, [1, 0, 0], Complex64::from(1.0)),
            Err(SymbolError::Bookkeeping { .. })
        ));
    }

    #[test]
    fn leading_decomposition_matches_closed_trace() {
        let chart = MetricChart::euclidean(2);
        let p = MaterialParams::decoupled(1.0, 1.0, 2.0);
        let par = Parametrix::new(&chart, p);
        let d = decompose_trace(&par, 0, &[0.5, 0.5], &[0.6, 0.8]).unwrap();
        assert_eq!(d.terms.len(), 3);
        for t in &d.terms {
            assert_eq!(t.pole_exponents().iter().sum::<u32>(), 1);
        }
        let tau = Complex64::new(-0.4, 1.3);
        let exact = trace_b2(&p, 1.0, tau, 2).unwrap();
        assert!((d.eval(tau) - exact).norm() < 1e-12);
        let heat = d.heat_residue(0.7).re;
        let expected = exp(-0.7) + exp(-1.4) + exp(-2.1);
        assert!((heat - expected).abs() < 1e-12);
    }

    #[test]
    fn coincident_poles_are_merged() {
        let chart = MetricChart::euclidean(2);
        let p = MaterialParams::decoupled(-1.0, 1.0, 1.0);
        let par = Parametrix::new(&chart, p);
        let d = decompose_trace(&par, 0, &[0.5, 0.5], &[1.0, 0.0]).unwrap();
        assert_eq!(d.terms.len(), 1);
        assert!((d.terms[0].coefficient - 3.0).norm() < 1e-12);
    }

    #[test]
    fn first_order_terms_on_a_curved_chart() {
        let chart = MetricChart::polar_disk(3.0);
        let p = MaterialParams::decoupled(0.5, 1.0, 2.0);
        let par = Parametrix::new(&chart, p);
        let (x, xi) = ([1.5, 0.4], [0.9, 0.3]);
        let d = decompose_trace(&par, 1, &x, &xi).unwrap();
        assert!(!d.terms.is_empty());
        for t in &d.terms {
            let [j, m, pp] = t.pole_exponents();
            assert_eq!(t.numerator_degree() - 2 * (j + m + pp) as i64, -3);
        }
        let tau = Complex64::new(-1.0, 2.0);
        let direct = par.term(1, &x, &xi, tau).unwrap().trace();
        assert!((d.eval(tau) - direct).norm() < 1e-8 * (1.0 + direct.norm()));
    }
}
