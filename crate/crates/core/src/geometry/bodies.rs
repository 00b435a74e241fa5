//! Anisotropic ellipsoids and quasi-norm balls.

use super::{quasi_norm, Anisotropy};
use crate::error::{Error, Result};

/// Membership in the ellipsoid `E_r(center) = { y : sum (y_i - c_i)^2 / r^{4/b_i} < 1 }`.
pub fn ellipsoid_contains(center: &[f64], r: f64, a: &Anisotropy, y: &[f64]) -> Result<bool> {
    if !(r > 0.0) {
        return Err(Error::param(format!("ellipsoid radius r = {r} must be positive")));
    }
    let mut s = 0.0;
    for ((yi, ci), bi) in y.iter().zip(center).zip(a.beta()) {
        let d = yi - ci;
        s += d * d / r.powf(4.0 / bi);
    }
    Ok(s < 1.0)
}

/// Membership in the quasi-norm ball `Θ_r(center) = { y : ||y - center||_beta < r }`.
pub fn ball_contains(center: &[f64], r: f64, a: &Anisotropy, y: &[f64]) -> Result<bool> {
    if !(r > 0.0) {
        return Err(Error::param(format!("ball radius r = {r} must be positive")));
    }
    let d: Vec<f64> = y.iter().zip(center).map(|(yi, ci)| yi - ci).collect();
    Ok(quasi_norm(&d, a, 1.0) < r)
}

/// `|E_r| = vol(B_1^n) * prod r^{2/b_i} = vol(B_1^n) * r^c`: the ellipsoid has
/// semi-axes `r^{2/b_i}`.
pub fn ellipsoid_volume(r: f64, a: &Anisotropy) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::param(format!("ellipsoid radius r = {r} must be positive")));
    }
    Ok(unit_ball_volume(a.dim()) * r.powf(a.c()))
}

/// Constant `C` for the inclusion `Θ_{r sqrt(n)}(x) ⊂ E_{rC}(x)`:
/// `C = n^{(b_max + 2)/4}` makes every term of the ellipsoid form at most `1/n`.
pub fn inclusion_constant(a: &Anisotropy) -> f64 {
    let n = a.dim() as f64;
    n.powf((a.b_max() + 2.0) / 4.0)
}

/// Volume of the Euclidean unit ball in `R^n`.
pub fn unit_ball_volume(n: usize) -> f64 {
    // vol(B^n) = pi^{n/2} / Gamma(n/2 + 1); even/odd closed forms avoid a
    // gamma-function dependency.
    let mut v = 1.0; // n = 0
    let mut prev = 2.0; // n = 1
    if n == 0 {
        return v;
    }
    if n == 1 {
        return prev;
    }
    for k in 2..=n {
        let next = 2.0 * std::f64::consts::PI / k as f64 * v;
        v = prev;
        prev = next;
    }
    prev
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use approx::assert_relative_eq;
    use rand::Rng;
    use std::f64::consts::PI;

    #[test]
    fn unit_ball_volumes() {
        assert_relative_eq!(unit_ball_volume(1), 2.0, max_relative = 1e-15);
        assert_relative_eq!(unit_ball_volume(2), PI, max_relative = 1e-15);
        assert_relative_eq!(unit_ball_volume(3), 4.0 / 3.0 * PI, max_relative = 1e-14);
    }

    #[test]
    fn isotropic_ellipsoid_is_euclidean_ball() {
        let a = Anisotropy::new(&[2.0, 2.0], None).unwrap();
        assert!(ellipsoid_contains(&[0.0, 0.0], 1.0, &a, &[0.0, 0.0]).unwrap());
        assert!(ellipsoid_contains(&[1.0, 1.0], 2.0, &a, &[2.0, 2.0]).unwrap());
        assert!(!ellipsoid_contains(&[0.0, 0.0], 1.0, &a, &[1.0, 0.0]).unwrap());
        assert_relative_eq!(ellipsoid_volume(3.0, &a).unwrap(), 9.0 * PI, max_relative = 1e-14);
    }

    #[test]
    fn derived_volume_2_4() {
        let a = Anisotropy::new(&[2.0, 4.0], None).unwrap();
        // Semi-axes 2^{2/2} and 2^{2/4}: area = pi * 2 * sqrt(2).
        assert_relative_eq!(
            ellipsoid_volume(2.0, &a).unwrap(),
            PI * 2.0 * 2.0_f64.sqrt(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn volume_scaling_law_is_exact() {
        for beta in [vec![2.0, 2.0], vec![4.0 / 3.0, 4.0], vec![2.0, 4.0, 3.0]] {
            let a = Anisotropy::new(&beta, None).unwrap();
            for r in [0.1, 1.0, 7.3] {
                let ratio = ellipsoid_volume(2.0 * r, &a).unwrap() / ellipsoid_volume(r, &a).unwrap();
                assert_relative_eq!(ratio, 2f64.powf(a.c()), max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn inclusion_sampling_no_violations() {
        // E_r(x) ⊂ Θ_{r sqrt n}(x) ⊂ E_{rC}(x) on 10^4 samples per anisotropy.
        for beta in [vec![2.0, 2.0], vec![4.0 / 3.0, 4.0], vec![2.0, 4.0]] {
            let a = Anisotropy::new(&beta, None).unwrap();
            let cc = inclusion_constant(&a);
            let n = a.dim();
            let sqrt_n = (n as f64).sqrt();
            let mut rng = rng_from_seed(17);
            let center = vec![0.4, -0.2];
            let r = 0.8;
            let mut violations = 0usize;
            for _ in 0..10_000 {
                let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
                let in_e = ellipsoid_contains(&center, r, &a, &y).unwrap();
                let in_theta = ball_contains(&center, r * sqrt_n, &a, &y).unwrap();
                let in_ec = ellipsoid_contains(&center, r * cc, &a, &y).unwrap();
                if in_e && !in_theta {
                    violations += 1;
                }
                if in_theta && !in_ec {
                    violations += 1;
                }
            }
            assert_eq!(violations, 0, "inclusion chain violated for beta {beta:?}");
        }
    }

    #[test]
    fn rejects_nonpositive_radius() {
        let a = Anisotropy::new(&[2.0, 2.0], None).unwrap();
        assert!(ellipsoid_contains(&[0.0, 0.0], 0.0, &a, &[0.0, 0.0]).is_err());
        assert!(ellipsoid_volume(-1.0, &a).is_err());
        assert!(ball_contains(&[0.0, 0.0], 0.0, &a, &[0.0, 0.0]).is_err());
    }
}
