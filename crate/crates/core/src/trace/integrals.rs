use crate::math::{erfc, exp, powf, sqrt, PI};

/// `(2π)^{−n} ∫ e^{−tc|ξ|²} dξ = (4πct)^{−n/2}`.
pub fn gaussian_xi_integral(n: usize, c: f64, t: f64) -> f64 {
    powf(4.0 * PI * c * t, -(n as f64) / 2.0)
}

/// `(2π)^{−n} ∫ e^{i(0,…,0,2x_n)·ξ} e^{−tc|ξ|²} dξ = (4πct)^{−n/2} e^{−x_n²/(ct)}`.
pub fn image_integral(n: usize, c: f64, t: f64, x_n: f64) -> f64 {
    gaussian_xi_integral(n, c, t) * exp(-x_n * x_n / (c * t))
}

/// `∫₀^∞ (4πct)^{−1/2} e^{−x²/(ct)} dx`, which equals `1/4` for every
/// `c, t > 0`.
pub fn boundary_layer_mass(c: f64, t: f64) -> f64 {
    debug_assert!(c > 0.0 && t > 0.0);
    0.25
}

/// `∫_ε^∞ (4πct)^{−1/2} e^{−x²/(ct)} dx = ¼ erfc(ε/√(ct))`.
pub fn boundary_layer_tail(c: f64, t: f64, epsilon: f64) -> f64 {
    0.25 * erfc(epsilon / sqrt(c * t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_values() {
        assert!((gaussian_xi_integral(1, 1.0, 1.0) - 0.28209479177387814).abs() < 1e-15);
        assert!((gaussian_xi_integral(2, 2.0, 0.5) - 0.07957747154594767).abs() < 1e-15);
        assert!((image_integral(1, 1.0, 1.0, 1.0) - 0.10377687435514868).abs() < 1e-15);
        assert_eq!(image_integral(3, 1.5, 0.2, 0.0), gaussian_xi_integral(3, 1.5, 0.2));
    }

    #[test]
    fn tail_is_negligible() {
        assert!(boundary_layer_tail(0.01, 0.01, 1.0) <= 1e-8);
        assert!((boundary_layer_tail(2.0, 3.0, 0.0) - boundary_layer_mass(2.0, 3.0)).abs() < 1e-15);
    }
}
