use num_complex::Complex64;

use super::params::MaterialParams;
use super::poly::{CMatrix, SymbolPoly};
use super::SymbolError;
use crate::geometry::GeometryJet;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Relative distance to a pole below which `τ` is rejected:
/// `|τ − P| ≤ POLE_EPS · (1 + |τ|)`.
pub const POLE_EPS: f64 = 1e-9;

/// An `(n+1) × (n+1)` complex symbol value at fixed `(x, ξ, τ)`.
///
/// Rows and columns `0..n` are the displacement components, index `n` is the
/// temperature channel.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolMatrix {
    pub entries: CMatrix,
}

impl SymbolMatrix {
    pub fn new(entries: CMatrix) -> Self {
        Self { entries }
    }

    /// Size `n + 1`.
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, z| f64::max(m, z.norm()))
    }

    pub fn max_abs_diff(&self, other: &SymbolMatrix) -> f64 {
        (&self.entries - &other.entries)
            .iter()
            .fold(0.0, |m, z| f64::max(m, z.norm()))
    }

    /// Largest modulus among the displacement/temperature coupling entries.
    pub fn off_block_max_abs(&self) -> f64 {
        let n = self.dim() - 1;
        (0..n).fold(0.0, |m, k| {
            m.max(self.entries[(k, n)].norm()).max(self.entries[(n, k)].norm())
        })
    }
}

/// The graded symbol `τI + C_g = c₂ + c₁ + c₀` at a point, each grade stored
/// as a polynomial in ξ.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedSymbol {
    pub c2: SymbolPoly,
    pub c1: SymbolPoly,
    pub c0: SymbolPoly,
}

impl GradedSymbol {
    pub fn new(params: &MaterialParams, jet: &GeometryJet, tau: Complex64) -> Self {
        Self {
            c2: c2_poly(params, jet, tau),
            c1: c1_poly(params, jet),
            c0: c0_poly(params, jet),
        }
    }

    pub fn grade(&self, k: usize) -> &SymbolPoly {
        match k {
            0 => &self.c0,
            1 => &self.c1,
            2 => &self.c2,
            _ => panic!("symbol grades are 0, 1, 2"),
        }
    }
}

fn c2_poly(p: &MaterialParams, jet: &GeometryJet, tau: Complex64) -> SymbolPoly {
    let n = jet.dim();
    let mut c = SymbolPoly::zeros(n, n + 1);
    for a in 0..=n {
        c.constant[(a, a)] = tau;
    }
    // −|ξ|² diag(μ I_n, α)
    for i in 0..n {
        for j in 0..n {
            let gij = jet.inverse[(i, j)];
            for a in 0..n {
                c.add_quadratic(i, j, a, a, Complex64::from(-p.mu * gij));
            }
            c.add_quadratic(i, j, n, n, Complex64::from(-p.alpha * gij));
        }
    }
    // −(λ+μ) (g^{jm} ξ_k ξ_m) at (j, k)
    let lm = p.lambda + p.mu;
    for row in 0..n {
        for col in 0..n {
            for m in 0..n {
                c.add_quadratic(col, m, row, col, Complex64::from(-lm * jet.inverse[(row, m)]));
            }
        }
    }
    c
}

fn c1_poly(p: &MaterialParams, jet: &GeometryJet) -> SymbolPoly {
    let n = jet.dim();
    let mut c = SymbolPoly::zeros(n, n + 1);
    let lm = p.lambda + p.mu;
    for s in 0..n {
        // −i g^{ml} Γ^s_ml ξ_s diag(μ I_n, α)
        let contracted = jet.contracted_christoffel(s);
        for a in 0..n {
            c.add_linear(s, a, a, -I * (p.mu * contracted));
        }
        c.add_linear(s, n, n, -I * (p.alpha * contracted));
    }
    for row in 0..n {
        for col in 0..n {
            // 2iμ g^{ml} Γ^j_mk ξ_l
            for l in 0..n {
                let v: f64 = (0..n)
                    .map(|m| jet.inverse[(m, l)] * jet.christoffel.get(row, m, col))
                    .sum();
                c.add_linear(l, row, col, I * (2.0 * p.mu * v));
            }
            // i(λ+μ) g^{jm} Γ^l_kl ξ_m
            let trace = jet.christoffel_trace(col);
            for m in 0..n {
                c.add_linear(m, row, col, I * (lm * jet.inverse[(row, m)] * trace));
            }
        }
    }
    // −β [0, i g^{jk} ξ_k ; ωθ₀ ξ_k, 0]
    for k in 0..n {
        for row in 0..n {
            c.add_linear(k, row, n, -I * (p.beta * jet.inverse[(row, k)]));
        }
        c.add_linear(k, n, k, Complex64::from(-p.beta * p.omega * p.theta0));
    }
    c
}

fn c0_poly(p: &MaterialParams, jet: &GeometryJet) -> SymbolPoly {
    let n = jet.dim();
    let mut c = SymbolPoly::zeros(n, n + 1);
    let lm = p.lambda + p.mu;
    for row in 0..n {
        for col in 0..n {
            // (λ+μ) g^{jm} ∂_m Γ^l_kl
            let mut v: f64 = (0..n)
                .map(|m| jet.inverse[(row, m)] * jet.christoffel_trace_deriv(m, col))
                .sum::<f64>()
                * lm;
            // μ g^{ml} ∂_k Γ^j_ml
            for m in 0..n {
                for l in 0..n {
                    v += p.mu * jet.inverse[(m, l)] * jet.christoffel_deriv.get(col, row, m, l);
                }
            }
            c.constant[(row, col)] += Complex64::from(v);
        }
        c.constant[(row, row)] += Complex64::from(p.rho * p.omega * p.omega);
    }
    for k in 0..n {
        c.constant[(n, k)] += I * (p.omega * p.beta * p.theta0 * jet.christoffel_trace(k));
    }
    c.constant[(n, n)] += I * (p.omega * p.gamma);
    c
}

/// Principal symbol `c₂(x, ξ, τ)`.
pub fn assemble_c2(params: &MaterialParams, jet: &GeometryJet, xi: &[f64], tau: Complex64) -> SymbolMatrix {
    SymbolMatrix::new(c2_poly(params, jet, tau).eval(xi))
}

/// First-order part `c₁(x, ξ)`.
pub fn assemble_c1(params: &MaterialParams, jet: &GeometryJet, xi: &[f64]) -> SymbolMatrix {
    SymbolMatrix::new(c1_poly(params, jet).eval(xi))
}

/// Zeroth-order part `c₀(x)`.
pub fn assemble_c0(params: &MaterialParams, jet: &GeometryJet) -> SymbolMatrix {
    let n = jet.dim();
    SymbolMatrix::new(c0_poly(params, jet).eval(&alloc::vec![0.0; n]))
}

/// Pole locations `μ|ξ|²`, `α|ξ|²`, `(λ+2μ)|ξ|²`.
pub fn pole_locations(params: &MaterialParams, xi_norm_sq: f64) -> [f64; 3] {
    [
        params.mu * xi_norm_sq,
        params.alpha * xi_norm_sq,
        params.pressure_rate() * xi_norm_sq,
    ]
}

pub(crate) fn check_poles(params: &MaterialParams, xi_norm_sq: f64, tau: Complex64) -> Result<(), SymbolError> {
    for pole in pole_locations(params, xi_norm_sq) {
        if (tau - pole).norm() <= POLE_EPS * (1.0 + tau.norm()) {
            return Err(SymbolError::Pole { tau, pole });
        }
    }
    Ok(())
}

/// `b₋₂ = c₂⁻¹` in closed form:
/// `diag(1/(τ−μ|ξ|²) I_n, 1/(τ−α|ξ|²)) + (λ+μ)/((τ−μ|ξ|²)(τ−(λ+2μ)|ξ|²)) (g^{jm} ξ_k ξ_m)`.
pub fn invert_c2(
    params: &MaterialParams,
    jet: &GeometryJet,
    xi: &[f64],
    tau: Complex64,
) -> Result<SymbolMatrix, SymbolError> {
    let n = jet.dim();
    let q = jet.norm_sq(xi);
    check_poles(params, q, tau)?;
    let shear = tau - params.mu * q;
    let heat = tau - params.alpha * q;
    let pressure = tau - params.pressure_rate() * q;
    let coupling = (params.lambda + params.mu) / (shear * pressure);

    let mut b = CMatrix::zeros(n + 1, n + 1);
    for row in 0..n {
        let raised: f64 = (0..n).map(|m| jet.inverse[(row, m)] * xi[m]).sum();
        for col in 0..n {
            b[(row, col)] = coupling * (raised * xi[col]);
        }
        b[(row, row)] += shear.inv();
    }
    b[(n, n)] = heat.inv();
    Ok(SymbolMatrix::new(b))
}

/// `Tr b₋₂ = (n−1)/(τ−μ|ξ|²) + 1/(τ−α|ξ|²) + 1/(τ−(λ+2μ)|ξ|²)`.
pub fn trace_b2(params: &MaterialParams, xi_norm_sq: f64, tau: Complex64, n: usize) -> Result<Complex64, SymbolError> {
    check_poles(params, xi_norm_sq, tau)?;
    let [shear, heat, pressure] = pole_locations(params, xi_norm_sq);
    let mut tr = (tau - heat).inv() + (tau - pressure).inv();
    if n > 1 {
        tr += Complex64::from((n - 1) as f64) / (tau - shear);
    }
    Ok(tr)
}
