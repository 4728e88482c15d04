use alloc::vec;
use alloc::vec::Vec;

use super::TraceError;
use crate::math::{exp, factorial, powi};
use crate::symbol::MaterialParams;

/// Largest supported order of a merged pole.
pub const MAX_POLE_ORDER: u32 = 4;
/// Relative distance below which pole locations are merged.
pub const MERGE_TOL: f64 = 1e-12;
/// Pole gaps below this are reported as ill-conditioned.
pub const ILL_CONDITIONED_GAP: f64 = 1e-8;

/// Value of a heat residue and a conditioning flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residue {
    pub value: f64,
    /// Set when two distinct poles are closer than [`ILL_CONDITIONED_GAP`].
    pub ill_conditioned: bool,
}

/// `(1/2πi) ∮ e^{−tτ} Π_q (τ − c_q|ξ|²)^{−order_q} dτ` over a contour enclosing
/// every pole, evaluated by exact partial fractions.
///
/// Coincident locations are merged into a single pole of the summed order.
/// A pole of order `e` at `P` alone contributes `(−t)^{e−1} e^{−tP}/(e−1)!`.
pub fn residue_heat(poles: &[(f64, u32)], xi_norm_sq: f64, t: f64) -> Result<Residue, TraceError> {
    if !(t > 0.0) {
        return Err(TraceError::InvalidArgument("t must be positive"));
    }
    let mut merged: Vec<(f64, u32)> = Vec::new();
    for &(c, order) in poles {
        if order == 0 {
            continue;
        }
        let loc = c * xi_norm_sq;
        match merged
            .iter_mut()
            .find(|(p, _)| (*p - loc).abs() <= MERGE_TOL * (1.0 + p.abs()))
        {
            Some(entry) => entry.1 += order,
            None => merged.push((loc, order)),
        }
    }
    if let Some(&(_, order)) = merged.iter().find(|(_, o)| *o > MAX_POLE_ORDER) {
        return Err(TraceError::UnsupportedPoleOrder {
            order,
            max: MAX_POLE_ORDER,
        });
    }
    let mut ill_conditioned = false;
    for (a, &(pa, _)) in merged.iter().enumerate() {
        for &(pb, _) in &merged[a + 1..] {
            if (pa - pb).abs() < ILL_CONDITIONED_GAP {
                ill_conditioned = true;
            }
        }
    }

    let mut value = 0.0;
    for (a, &(pa, oa)) in merged.iter().enumerate() {
        let len = oa as usize;
        // Taylor coefficients in ε = τ − P_a of e^{−tτ} Π_{q≠a} (τ − P_q)^{−o_q}.
        let mut series: Vec<f64> = (0..len).map(|i| powi(-t, i as i32) / factorial(i)).collect();
        for (q, &(pq, oq)) in merged.iter().enumerate() {
            if q == a {
                continue;
            }
            let d = pa - pq;
            // (d + ε)^{−o} = d^{−o} Σ_i binom(−o, i) (ε/d)^i
            let mut factor = vec![0.0; len];
            let mut binom = 1.0;
            for (i, f) in factor.iter_mut().enumerate() {
                *f = binom * powi(d, -(oq as i32) - i as i32);
                binom *= -(oq as f64 + i as f64) / (i as f64 + 1.0);
            }
            series = truncated_product(&series, &factor);
        }
        value += exp(-t * pa) * series[len - 1];
    }
    Ok(Residue {
        value,
        ill_conditioned,
    })
}

fn truncated_product(a: &[f64], b: &[f64]) -> Vec<f64> {
    let len = a.len();
    (0..len)
        .map(|k| (0..=k).map(|i| a[i] * b[k - i]).sum())
        .collect()
}

/// Heat residue of `Tr b₋₂`: `(n−1)e^{−tμ|ξ|²} + e^{−tα|ξ|²} + e^{−t(λ+2μ)|ξ|²}`.
pub fn channel_residue(params: &MaterialParams, n: usize, xi_norm_sq: f64, t: f64) -> Result<f64, TraceError> {
    let mut total = 0.0;
    for ch in params.channels(n) {
        if ch.multiplicity > 0 {
            total += ch.multiplicity as f64 * residue_heat(&[(ch.rate, 1)], xi_norm_sq, t)?.value;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_pole() {
        let r = residue_heat(&[(1.0, 1)], 1.0, 0.5).unwrap();
        assert!((r.value - 0.6065306597126334).abs() < 1e-15);
        assert!(!r.ill_conditioned);
    }

    #[test]
    fn weighted_three_channel_sum() {
        let p = MaterialParams::decoupled(1.0, 1.0, 2.0);
        let v = channel_residue(&p, 2, 1.0, 1.0).unwrap();
        let expected = (-1.0f64).exp() + (-2.0f64).exp() + (-3.0f64).exp();
        assert!((v - expected).abs() < 1e-15);
        assert!((v - 0.5530017927759).abs() < 1e-12);
    }

    #[test]
    fn double_pole_carries_minus_t() {
        let r = residue_heat(&[(1.0, 2)], 1.0, 1.0).unwrap();
        assert!((r.value + 0.36787944117144233).abs() < 1e-15);
        let merged = residue_heat(&[(1.0, 1), (1.0, 1)], 1.0, 1.0).unwrap();
        assert_eq!(merged.value, r.value);
    }

    #[test]
    fn two_distinct_simple_poles() {
        // 1/((τ−1)(τ−3)) = ½[1/(τ−3) − 1/(τ−1)]
        let t = 0.4;
        let r = residue_heat(&[(1.0, 1), (3.0, 1)], 1.0, t).unwrap();
        let expected = 0.5 * (exp(-3.0 * t) - exp(-t));
        assert!((r.value - expected).abs() < 1e-15);
    }

    #[test]
    fn unsupported_and_ill_conditioned() {
        let err = residue_heat(&[(1.0, 3), (1.0, 2)], 1.0, 1.0).unwrap_err();
        assert_eq!(err, TraceError::UnsupportedPoleOrder { order: 5, max: 4 });
        let r = residue_heat(&[(1.0, 1), (1.0 + 1e-9, 1)], 1.0, 1.0).unwrap();
        assert!(r.ill_conditioned);
    }
}
