//! Shared oracles for integration tests. Everything here is independent of
//! the library's quadrature path: closed-form Gamma-function identities for
//! the classical isotropic fractional Laplacian.

#![allow(dead_code)]

use statrs::function::gamma::{gamma, ln_gamma};

/// Gamma function extended to negative non-integer arguments through the
/// recursion `Γ(z) = Γ(z+1)/z`.
pub fn gamma_any(mut z: f64) -> f64 {
    assert!(z.fract() != 0.0 || z > 0.0, "Γ pole at {z}");
    let mut factor = 1.0;
    while z < 0.5 {
        factor /= z;
        z += 1.0;
    }
    factor * gamma(z)
}

/// Multiplier of the classical fractional Laplacian on power functions:
/// `(-Δ)^s |x|^{-g} = riesz_multiplier(g, s, n) |x|^{-g-2s}`, valid for
/// `0 < g < n`, `0 < s < 1`. Zero exactly at `g = n - 2s`, positive below,
/// negative above.
pub fn riesz_multiplier(g: f64, s: f64, n: usize) -> f64 {
    let n = n as f64;
    4f64.powf(s) * gamma_any((g + 2.0 * s) / 2.0) * gamma_any((n - g) / 2.0)
        / (gamma_any(g / 2.0) * gamma_any((n - g - 2.0 * s) / 2.0))
}

/// Normalization constant `c_{n,s}` of `(-Δ)^s u(x) = c_{n,s} PV ∫ (u(x)-u(y))/|x-y|^{n+2s}`:
/// `c_{n,s} = 4^s Γ(n/2 + s) / (π^{n/2} |Γ(-s)|)`.
pub fn riesz_normalization(s: f64, n: usize) -> f64 {
    let nf = n as f64;
    let ln = s * 4f64.ln() + ln_gamma(nf / 2.0 + s) - nf / 2.0 * std::f64::consts::PI.ln();
    ln.exp() / gamma_any(-s).abs()
}

/// Classical scaling exponent of the fundamental solution: `n - 2s`.
pub fn classical_gamma_star(s: f64, n: usize) -> f64 {
    n as f64 - 2.0 * s
}

#[cfg(test)]
mod sanity {
    use super::*;

    #[test]
    fn multiplier_vanishes_at_fundamental_exponent() {
        // g = n - 2s makes Γ((n-g-2s)/2) = Γ(0) blow up, so the multiplier -> 0.
        let s = 0.9;
        let g = classical_gamma_star(s, 2);
        let lo = riesz_multiplier(g - 1e-6, s, 2);
        let hi = riesz_multiplier(g + 1e-6, s, 2);
        assert!(lo > 0.0 && hi < 0.0);
        assert!(lo.abs() < 1e-4 && hi.abs() < 1e-4);
    }

    #[test]
    fn gamma_any_matches_reflection() {
        // Γ(-0.9) = Γ(1.1) / (-0.9 * 0.1)
        let direct = gamma_any(-0.9);
        let manual = gamma(1.1) / (-0.9 * 0.1);
        assert!((direct - manual).abs() / manual.abs() < 1e-12);
    }
}
