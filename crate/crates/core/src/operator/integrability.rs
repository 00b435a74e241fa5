//! Numerical witnesses of the two kernel integrability statements
//!
//! ```text
//! ∫_{Θ^{mu beta}_r} |y|² ||y||_beta^{-(c+2a)} dy < ∞      (near, Euclidean |y|²)
//! ∫_{R^n \ Θ^{mu beta}_r} ||y||_beta^{-(c+2a)} dy < ∞     (far)
//! ```
//!
//! In anisotropic polar coordinates both radial integrals are exact power
//! integrals, so only the angular factor is quadrature.

use super::kernel::check_alpha;
use crate::error::Result;
use crate::geometry::{build_sphere_grid, quasi_norm, Anisotropy};
use crate::sum::pairwise_sum;

/// Returns `(near, far)` for the ball `Θ^{mu beta}_r = { ||y||_{mu beta} < r }`,
/// i.e. intrinsic radius below `r^{1/mu}`. Requires `0 < alpha < 2/b_max` and
/// `0 < r`.
pub fn kernel_integrability_report(
    a: &Anisotropy,
    alpha: f64,
    r: f64,
    angular_panels: usize,
) -> Result<(f64, f64)> {
    check_alpha(a, alpha)?;
    if !(r > 0.0) {
        return Err(crate::error::Error::param("ball radius r must be positive"));
    }
    let grid = build_sphere_grid(a, angular_panels.max(8))?;
    let rule = grid.polar_rule(angular_panels);
    let kexp = a.c() + 2.0 * alpha;
    let s_max = r.powf(1.0 / a.mu() as f64);

    // near: sum_j p_j ||w_j||^{-(c+2a)} sum_i w_{ji}^2 S^{4/b_i - 2a} / (4/b_i - 2a)
    let mut near_terms = Vec::with_capacity(rule.points.len());
    let mut far_terms = Vec::with_capacity(rule.points.len());
    for (p, w) in rule.points.iter().zip(&rule.weights) {
        let bn = quasi_norm(p, a, 1.0).powf(-kexp);
        let mut radial = 0.0;
        for (wi, bi) in p.iter().zip(a.beta()) {
            let expo = 4.0 / bi - 2.0 * alpha;
            radial += wi * wi * s_max.powf(expo) / expo;
        }
        near_terms.push(w * bn * radial);
        far_terms.push(w * bn);
    }
    let near = pairwise_sum(&near_terms);
    let far = pairwise_sum(&far_terms) * s_max.powf(-2.0 * alpha) / (2.0 * alpha);
    Ok((near, far))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn iso() -> Anisotropy {
        Anisotropy::new(&[2.0, 2.0], None).unwrap()
    }

    /// Independent polar-Simpson oracle over the true domain
    /// `{ |y|^{q1} + |y|^{q2} < r }` (isotropic beta, mu = 2 gives q = 4).
    fn iso_near_oracle(alpha: f64, r: f64) -> f64 {
        // boundary radius R(t) solves rho^4 (cos^4 + sin^4) = r^2.
        let n_seg = 4000;
        let mut acc = 0.0;
        for i in 0..=n_seg {
            let t = std::f64::consts::PI * 2.0 * i as f64 / n_seg as f64;
            let w = if i == 0 || i == n_seg {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            let c4 = t.cos().powi(4) + t.sin().powi(4);
            let rho_max = (r * r / c4).powf(0.25);
            // ∫_0^{R} rho^{2 - (2+2a)} rho drho = R^{2-2a} / (2-2a)
            acc += w * rho_max.powf(2.0 - 2.0 * alpha) / (2.0 - 2.0 * alpha);
        }
        acc * (std::f64::consts::PI * 2.0 / n_seg as f64) / 3.0
    }

    fn iso_far_oracle(alpha: f64, r: f64) -> f64 {
        let n_seg = 4000;
        let mut acc = 0.0;
        for i in 0..=n_seg {
            let t = std::f64::consts::PI * 2.0 * i as f64 / n_seg as f64;
            let w = if i == 0 || i == n_seg {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            let c4 = t.cos().powi(4) + t.sin().powi(4);
            let rho_min = (r * r / c4).powf(0.25);
            acc += w * rho_min.powf(-2.0 * alpha) / (2.0 * alpha);
        }
        acc * (std::f64::consts::PI * 2.0 / n_seg as f64) / 3.0
    }

    #[test]
    fn isotropic_values_match_polar_oracle() {
        let a = iso();
        let (near, far) = kernel_integrability_report(&a, 0.5, 1.0, 128).unwrap();
        assert_relative_eq!(near, iso_near_oracle(0.5, 1.0), max_relative = 1e-2);
        assert_relative_eq!(far, iso_far_oracle(0.5, 1.0), max_relative = 1e-2);
        assert!(near.is_finite() && far.is_finite());
    }

    #[test]
    fn near_monotone_in_r() {
        let a = iso();
        let mut prev = f64::MAX;
        for r in [0.5, 0.25, 0.125] {
            let (near, _) = kernel_integrability_report(&a, 0.5, r, 64).unwrap();
            assert!(near < prev, "near({r}) = {near} not below {prev}");
            prev = near;
        }
    }

    #[test]
    fn far_vanishes_at_infinity() {
        let a = Anisotropy::new(&[4.0 / 3.0, 4.0], None).unwrap();
        let (_, far_1) = kernel_integrability_report(&a, 0.3, 1.0, 64).unwrap();
        let mut prev = f64::MAX;
        for r in [1.0, 64.0, 4096.0] {
            let (_, far) = kernel_integrability_report(&a, 0.3, r, 64).unwrap();
            assert!(far < prev);
            prev = far;
        }
        // far ~ r^{-2 alpha / mu} = r^{-0.2} here: 4096^{0.2} ≈ 5.3.
        assert!(prev < far_1 / 4.0);
    }

    #[test]
    fn rejects_bad_alpha() {
        let a = iso();
        assert!(kernel_integrability_report(&a, 0.0, 1.0, 64).is_err());
        assert!(kernel_integrability_report(&a, 1.0, 1.0, 64).is_err());
    }
}
