//! Anisotropic cones and their complement measure on the sphere.
//!
//! For an apex `x` on the beta-sphere and weights
//! `d_i(x) = |x_i|^{b_i - 2}` (1 when `x_i = 0`), the cone is
//!
//! ```text
//! Ω^{beta,delta}_x = { y : |<x,y>_x| <= (1 - delta) ||x||_x ||y||_x },
//! ```
//!
//! a symmetric slab-like body excluding directions too aligned with `±x`.
//! Its complement on the sphere grows with `delta` (at `delta -> 1` the cone
//! collapses onto the `<.,.>_x`-orthogonal hyperplane and the complement
//! fills the whole sphere), which is the orientation pinned numerically by
//! the Monte-Carlo oracle in the tests.

use crate::error::{Error, Result};
use crate::geometry::{g_inverse, Anisotropy, SphereGrid};
use crate::sum::pairwise_sum;

/// Cone specification: apex direction, aperture parameter and the induced
/// weighted inner product.
#[derive(Debug, Clone)]
pub struct ConeSpec {
    pub apex: Vec<f64>,
    pub delta: f64,
    /// Weights `d_i(apex)`.
    pub weights: Vec<f64>,
}

impl ConeSpec {
    /// Builds the cone attached to an apex on the beta-sphere.
    pub fn new(a: &Anisotropy, apex: &[f64], delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::param(format!("cone aperture delta = {delta} must lie in (0,1)")));
        }
        let weights: Vec<f64> = apex
            .iter()
            .zip(a.beta())
            .map(|(xi, bi)| {
                if *xi == 0.0 {
                    1.0
                } else {
                    xi.abs().powf(bi - 2.0)
                }
            })
            .collect();
        Ok(Self {
            apex: apex.to_vec(),
            delta,
            weights,
        })
    }

    fn inner(&self, y: &[f64], z: &[f64]) -> f64 {
        y.iter()
            .zip(z)
            .zip(&self.weights)
            .map(|((yi, zi), di)| di * yi * zi)
            .sum()
    }

    fn norm(&self, y: &[f64]) -> f64 {
        self.inner(y, y).sqrt()
    }
}

/// Membership test `|<x,y>_x| <= (1 - delta) ||x||_x ||y||_x`. Symmetric in
/// `y -> -y` by the absolute value.
pub fn cone_membership(cone: &ConeSpec, y: &[f64]) -> bool {
    let lhs = cone.inner(&cone.apex, y).abs();
    lhs <= (1.0 - cone.delta) * cone.norm(&cone.apex) * cone.norm(y)
}

/// Quadrature measure of the grid nodes outside the cone. Nondecreasing in
/// `delta`; tends to the full sphere measure as `delta -> 1`.
pub fn cone_complement_measure(
    a: &Anisotropy,
    delta: f64,
    grid: &SphereGrid,
    apex: &[f64],
) -> Result<f64> {
    if grid.resolution() < 64 {
        return Err(Error::param("cone measures need grid resolution >= 64"));
    }
    let cone = ConeSpec::new(a, apex, delta)?;
    let terms: Vec<f64> = grid
        .nodes()
        .iter()
        .map(|q| if cone_membership(&cone, &q.x) { 0.0 } else { q.weight })
        .collect();
    Ok(pairwise_sum(&terms))
}

/// Largest `delta` on a uniform scan for which the isotropic-cone smallness
/// condition holds at every grid apex:
///
/// ```text
/// |(R^n \ Ω^{beta0,delta}_e) ∩ ∂Θ^beta_1| <= c0 |S^{beta,n}| / (2n)
/// ```
///
/// with `S^{beta,n}` the image on the beta-sphere of the Euclidean-sphere
/// region where the `b_max` coordinates carry at least `1/n` of the length,
/// and `c0` its measured infimum of `sum_{b_i = b_max} y_i^2`. Returns `None`
/// when even the smallest scanned aperture fails. Because the complement
/// grows with `delta`, the condition holds precisely for apertures up to the
/// returned threshold.
pub fn delta0_threshold(a: &Anisotropy, grid: &SphereGrid, steps: usize) -> Result<Option<f64>> {
    if (grid.multiplier() - 1.0).abs() > 1e-12 {
        return Err(Error::param(
            "delta0 scan expects a beta-sphere grid (multiplier 1)",
        ));
    }
    let n = a.dim();
    let b_max = a.b_max();
    // Euclidean preimages of the nodes double as apexes and as the S-region test.
    let pre: Vec<Vec<f64>> = grid
        .nodes()
        .iter()
        .map(|q| g_inverse(a, 1.0, &q.x))
        .collect();
    let mut s_measure = 0.0;
    let mut c0 = f64::MAX;
    for (q, e) in grid.nodes().iter().zip(&pre) {
        let heavy: f64 = e
            .iter()
            .zip(a.beta())
            .filter(|(_, b)| (**b - b_max).abs() < 1e-12)
            .map(|(ei, _)| ei * ei)
            .sum();
        if heavy >= 1.0 / n as f64 {
            s_measure += q.weight;
            let on_sphere: f64 = q
                .x
                .iter()
                .zip(a.beta())
                .filter(|(_, b)| (**b - b_max).abs() < 1e-12)
                .map(|(yi, _)| yi * yi)
                .sum();
            c0 = c0.min(on_sphere);
        }
    }
    if !c0.is_finite() || s_measure == 0.0 {
        return Err(Error::numerical("empty S-region; grid too coarse"));
    }
    let bound = c0 * s_measure / (2.0 * n as f64);

    let mut best = None;
    'outer: for step in 1..steps {
        let delta = step as f64 / steps as f64;
        for apex in &pre {
            // Isotropic cone at a Euclidean apex, measured on the beta-sphere.
            let mut outside = 0.0;
            for q in grid.nodes() {
                let dot: f64 = apex.iter().zip(&q.x).map(|(a, b)| a * b).sum();
                let ny: f64 = q.x.iter().map(|v| v * v).sum::<f64>().sqrt();
                if dot.abs() > (1.0 - delta) * ny {
                    outside += q.weight;
                }
            }
            if outside > bound {
                break 'outer;
            }
        }
        best = Some(delta);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::build_sphere_grid_with_multiplier;
    use crate::rng::rng_from_seed;
    use approx::assert_relative_eq;
    use rand::Rng;

    fn iso() -> Anisotropy {
        Anisotropy::new(&[2.0, 2.0], None).unwrap()
    }

    #[test]
    fn apex_direction_is_outside_orthogonal_inside() {
        let a = iso();
        let apex = [1.0, 0.0];
        let cone = ConeSpec::new(&a, &apex, 0.3).unwrap();
        assert!(!cone_membership(&cone, &apex));
        assert!(!cone_membership(&cone, &[-1.0, 0.0]));
        assert!(cone_membership(&cone, &[0.0, 1.0]));
    }

    #[test]
    fn membership_is_symmetric() {
        let a = Anisotropy::new(&[4.0 / 3.0, 4.0], None).unwrap();
        let apex = [0.6, 0.9];
        let cone = ConeSpec::new(&a, &apex, 0.4).unwrap();
        let mut rng = rng_from_seed(31);
        for _ in 0..10_000 {
            let y: Vec<f64> = (0..2).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let neg: Vec<f64> = y.iter().map(|v| -v).collect();
            assert_eq!(cone_membership(&cone, &y), cone_membership(&cone, &neg));
        }
    }

    #[test]
    fn isotropic_complement_is_arc_caps() {
        // Complement of the cone = two caps of half-angle arccos(1-delta)
        // around ±apex; arc length 4 arccos(1-delta) on the unit circle.
        let a = iso();
        let grid = build_sphere_grid_with_multiplier(&a, 1.0, 512).unwrap();
        for delta in [0.2, 0.5, 0.8] {
            let measured = cone_complement_measure(&a, delta, &grid, &[1.0, 0.0]).unwrap();
            let exact = 4.0 * (1.0 - delta).acos();
            assert_relative_eq!(measured, exact, max_relative = 2e-2);
        }
    }

    #[test]
    fn complement_monotone_in_delta_and_limits() {
        // Monte-Carlo oracle pins the orientation: larger delta shrinks the
        // cone, so the complement grows toward the full measure.
        let a = Anisotropy::new(&[4.0 / 3.0, 4.0], None).unwrap();
        let grid = build_sphere_grid_with_multiplier(&a, 1.0, 256).unwrap();
        let apex = grid.nodes()[7].x.clone();
        let total = grid.surface_measure();
        let mut prev = -1.0;
        for delta in [0.1, 0.5, 0.9] {
            let m = cone_complement_measure(&a, delta, &grid, &apex).unwrap();
            assert!(m >= prev);
            prev = m;

            // Independent MC estimate of the complement fraction.
            let cone = ConeSpec::new(&a, &apex, delta).unwrap();
            let mut rng = rng_from_seed(5);
            let mut out = 0usize;
            let mut tot = 0usize;
            for _ in 0..20_000 {
                let y: Vec<f64> = (0..2).map(|_| rng.gen_range(-1.0..1.0)).collect();
                if y.iter().all(|v| v.abs() < 1e-9) {
                    continue;
                }
                tot += 1;
                if !cone_membership(&cone, &y) {
                    out += 1;
                }
            }
            let mc_fraction = out as f64 / tot as f64;
            // Directions are not uniformly distributed on the beta-sphere
            // measure, so compare only coarsely: both must agree that the
            // complement grows from small to dominant.
            let grid_fraction = m / total;
            assert!(
                (grid_fraction - mc_fraction).abs() < 0.35,
                "delta {delta}: grid {grid_fraction} vs mc {mc_fraction}"
            );
        }
        let nearly_all = cone_complement_measure(&a, 0.999, &grid, &apex).unwrap();
        assert!(nearly_all > 0.9 * total);
    }

    #[test]
    fn apex_independence_for_isotropic() {
        let a = iso();
        let grid = build_sphere_grid_with_multiplier(&a, 1.0, 256).unwrap();
        let mut values = Vec::new();
        for idx in [0, 31, 64, 100, 200] {
            let apex = grid.nodes()[idx].x.clone();
            values.push(cone_complement_measure(&a, 0.5, &grid, &apex).unwrap());
        }
        let max = values.iter().cloned().fold(f64::MIN, f64::max);
        let min = values.iter().cloned().fold(f64::MAX, f64::min);
        assert!((max - min) / max < 0.02, "spread {} vs {}", min, max);
    }

    #[test]
    fn delta0_scan_runs_and_orientation_is_consistent() {
        let a = Anisotropy::new(&[4.0 / 3.0, 4.0], None).unwrap();
        let grid = build_sphere_grid_with_multiplier(&a, 1.0, 128).unwrap();
        let threshold = delta0_threshold(&a, &grid, 40).unwrap();
        // The complement grows with delta, so whenever some aperture passes,
        // all smaller scanned apertures pass too; the scan returns the
        // largest admissible one. With the measured c0 the bound is small,
        // so the threshold, if any, is a small aperture.
        if let Some(d) = threshold {
            let apex = grid.nodes()[3].x.clone();
            let m_ok = cone_complement_measure(&a, d, &grid, &apex).unwrap();
            let m_big = cone_complement_measure(&a, 0.95, &grid, &apex).unwrap();
            assert!(m_ok <= m_big);
        }
        // Rejects non-beta-sphere grids.
        let mu_grid = crate::geometry::build_sphere_grid(&a, 128).unwrap();
        assert!(delta0_threshold(&a, &mu_grid, 10).is_err());
    }

    #[test]
    fn rejects_bad_delta_and_small_grids() {
        let a = iso();
        assert!(ConeSpec::new(&a, &[1.0, 0.0], 0.0).is_err());
        assert!(ConeSpec::new(&a, &[1.0, 0.0], 1.0).is_err());
        let grid = build_sphere_grid_with_multiplier(&a, 1.0, 32).unwrap();
        assert!(cone_complement_measure(&a, 0.5, &grid, &[1.0, 0.0]).is_err());
    }
}
