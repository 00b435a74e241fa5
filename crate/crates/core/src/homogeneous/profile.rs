//! Sphere profiles and their induced homogeneous fields.
//!
//! On the circle (n = 2) the profile is represented by an interpolating
//! periodic cubic spline in the chart angle, which is C² — exactly the
//! smoothness the singular integral needs pointwise. The spline interpolates
//! the node values, so the induced field reproduces them exactly.

use crate::error::{Error, Result};
use crate::field::{DecayClass, Field};
use crate::geometry::{g_inverse, SphereGrid};
use std::sync::Arc;

/// Solves the constant cyclic tridiagonal system
/// `(1/6) c_{j-1} + (2/3) c_j + (1/6) c_{j+1} = rhs_j` (periodic), the
/// interpolation condition of the uniform periodic cubic B-spline.
pub(crate) fn spline_coefficients(rhs: &[f64]) -> Vec<f64> {
    let n = rhs.len();
    assert!(n >= 4, "periodic cubic spline needs at least 4 nodes");
    // Sherman–Morrison: A = T + u v^T with T tridiagonal (non-cyclic).
    let (diag, off) = (2.0 / 3.0, 1.0 / 6.0);
    // Corner entries folded into rank-one update with u = gamma e_1 + off e_n,
    // v = e_1 + (off/gamma) e_n; gamma = -diag keeps T well conditioned.
    let gamma = -diag;
    let mut d = vec![diag; n];
    d[0] = diag - gamma;
    d[n - 1] = diag - off * off / gamma;

    let solve_tri = |d: &[f64], b: &[f64]| -> Vec<f64> {
        let n = b.len();
        let mut c_prime = vec![0.0; n];
        let mut x = vec![0.0; n];
        let mut denom = d[0];
        c_prime[0] = off / denom;
        x[0] = b[0] / denom;
        for i in 1..n {
            denom = d[i] - off * c_prime[i - 1];
            c_prime[i] = off / denom;
            x[i] = (b[i] - off * x[i - 1]) / denom;
        }
        for i in (0..n - 1).rev() {
            x[i] -= c_prime[i] * x[i + 1];
        }
        x
    };

    let y = solve_tri(&d, rhs);
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = off;
    let z = solve_tri(&d, &u);
    let vy = y[0] + off / gamma * y[n - 1];
    let vz = z[0] + off / gamma * z[n - 1];
    let factor = vy / (1.0 + vz);
    y.iter().zip(&z).map(|(yi, zi)| yi - factor * zi).collect()
}

/// Basis row of the uniform periodic cubic B-spline at chart angle `theta`,
/// for nodes at `theta_j = 2π (j + 1/2) / n`: returns the four coefficient
/// indices and weights.
pub(crate) fn spline_basis_row(n: usize, theta: f64) -> ([usize; 4], [f64; 4]) {
    let nn = n as f64;
    let t = (theta / (2.0 * std::f64::consts::PI) * nn - 0.5).rem_euclid(nn);
    let j = t.floor() as usize % n;
    let u = t - t.floor();
    let w0 = (1.0 - u).powi(3) / 6.0;
    let w1 = (3.0 * u.powi(3) - 6.0 * u.powi(2) + 4.0) / 6.0;
    let w2 = (-3.0 * u.powi(3) + 3.0 * u.powi(2) + 3.0 * u + 1.0) / 6.0;
    let w3 = u.powi(3) / 6.0;
    let idx = [
        (j + n - 1) % n,
        j,
        (j + 1) % n,
        (j + 2) % n,
    ];
    (idx, [w0, w1, w2, w3])
}

/// Node values of a `-gamma`-homogeneous field on a sphere grid.
#[derive(Debug, Clone)]
pub struct HomogeneousProfile {
    grid: Arc<SphereGrid>,
    values: Vec<f64>,
    gamma: f64,
    /// Spline coefficients of the chart-angle interpolant (n = 2 only).
    coeffs: Option<Vec<f64>>,
}

impl HomogeneousProfile {
    pub fn new(grid: Arc<SphereGrid>, values: Vec<f64>, gamma: f64) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::param(format!(
                "profile has {} values for {} grid nodes",
                values.len(),
                grid.len()
            )));
        }
        let coeffs = if grid.anisotropy().dim() == 2 {
            Some(spline_coefficients(&values))
        } else {
            None
        };
        Ok(Self {
            grid,
            values,
            gamma,
            coeffs,
        })
    }

    pub fn grid(&self) -> &SphereGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn min(&self) -> f64 {
        self.values.iter().cloned().fold(f64::MAX, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().cloned().fold(f64::MIN, f64::max)
    }

    pub fn linf(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Profile value at an arbitrary sphere point (or any nonzero point:
    /// the value of the profile at its projection).
    pub fn value_at(&self, x: &[f64]) -> Result<f64> {
        match &self.coeffs {
            Some(c) => {
                let (_, omega) = self.grid.project(x)?;
                let a = self.grid.anisotropy();
                let e = g_inverse(a, self.grid.multiplier(), &omega);
                let theta = e[1].atan2(e[0]).rem_euclid(2.0 * std::f64::consts::PI);
                let (idx, w) = spline_basis_row(self.values.len(), theta);
                Ok(idx.iter().zip(w).map(|(i, wi)| c[*i] * wi).sum())
            }
            None => {
                let parts = self.grid.interpolate(x)?;
                Ok(parts.iter().map(|(i, w)| self.values[*i] * w).sum())
            }
        }
    }

    /// The induced `-gamma`-homogeneous field.
    pub fn field(self: &Arc<Self>) -> ProfileField {
        ProfileField {
            profile: Arc::clone(self),
        }
    }

    /// Multiplies all values (and coefficients) by a constant.
    pub fn scale(&mut self, factor: f64) {
        for v in &mut self.values {
            *v *= factor;
        }
        if let Some(c) = &mut self.coeffs {
            for v in c {
                *v *= factor;
            }
        }
    }

    /// CSV export `node_index, x_1..x_n, psi_value`.
    pub fn to_csv(&self) -> String {
        let n = self.grid.anisotropy().dim();
        let mut out = String::from("node_index");
        for i in 1..=n {
            out.push_str(&format!(",x_{i}"));
        }
        out.push_str(",psi_value\n");
        for (idx, (q, v)) in self.grid.nodes().iter().zip(&self.values).enumerate() {
            out.push_str(&idx.to_string());
            for c in &q.x {
                out.push_str(&format!(",{c}"));
            }
            out.push_str(&format!(",{v}\n"));
        }
        out
    }
}

/// Field view `u(x) = r(x)^{-gamma} φ(ω(x))` of a profile.
#[derive(Clone)]
pub struct ProfileField {
    profile: Arc<HomogeneousProfile>,
}

impl Field for ProfileField {
    fn eval(&self, x: &[f64]) -> f64 {
        match self.profile.grid.project(x) {
            Ok((radius, omega)) => {
                let phi = self.profile.value_at(&omega).unwrap_or(f64::NAN);
                radius.powf(-self.profile.gamma) * phi
            }
            Err(_) => f64::INFINITY,
        }
    }

    fn homogeneity(&self) -> Option<f64> {
        Some(self.profile.gamma)
    }

    fn smooth_at(&self, x: &[f64]) -> bool {
        x.iter().any(|v| *v != 0.0)
    }

    fn decay(&self) -> DecayClass {
        DecayClass::HomogeneousTail
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_sphere_grid, scale_map, Anisotropy};
    use approx::assert_relative_eq;

    #[test]
    fn spline_interpolates_node_values_exactly() {
        let n = 64;
        let values: Vec<f64> = (0..n)
            .map(|j| (2.0 * std::f64::consts::PI * (j as f64 + 0.5) / n as f64).sin() + 2.0)
            .collect();
        let coeffs = spline_coefficients(&values);
        for j in 0..n {
            let theta = 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / n as f64;
            let (idx, w) = spline_basis_row(n, theta);
            let interp: f64 = idx.iter().zip(w).map(|(i, wi)| coeffs[*i] * wi).sum();
            assert_relative_eq!(interp, values[j], max_relative = 1e-12);
        }
    }

    #[test]
    fn spline_converges_quartically_between_nodes() {
        let f = |t: f64| (t.sin() * 2.0).cos();
        let errs: Vec<f64> = [64usize, 128]
            .iter()
            .map(|&n| {
                let values: Vec<f64> = (0..n)
                    .map(|j| f(2.0 * std::f64::consts::PI * (j as f64 + 0.5) / n as f64))
                    .collect();
                let coeffs = spline_coefficients(&values);
                let mut err = 0.0f64;
                for k in 0..1000 {
                    let theta = 2.0 * std::f64::consts::PI * k as f64 / 1000.0;
                    let (idx, w) = spline_basis_row(n, theta);
                    let interp: f64 = idx.iter().zip(w).map(|(i, wi)| coeffs[*i] * wi).sum();
                    err = err.max((interp - f(theta)).abs());
                }
                err
            })
            .collect();
        assert!(errs[1] < errs[0] / 10.0, "errors {:?}", errs);
    }

    #[test]
    fn induced_field_homogeneity_and_node_exactness() {
        let a = Anisotropy::new(&[4.0 / 3.0, 4.0], None).unwrap();
        let grid = Arc::new(build_sphere_grid(&a, 64).unwrap());
        let values: Vec<f64> = grid
            .thetas()
            .unwrap()
            .iter()
            .map(|t| 2.0 + 0.5 * (2.0 * t).cos())
            .collect();
        let gamma = 0.7;
        let profile = Arc::new(HomogeneousProfile::new(grid.clone(), values.clone(), gamma).unwrap());
        let field = profile.field();
        for (q, v) in grid.nodes().iter().zip(&values) {
            assert_relative_eq!(field.eval(&q.x), *v, max_relative = 1e-12);
        }
        let x = [0.8, -0.4];
        for r in [0.5, 2.0, 7.3] {
            let lhs = field.eval(&scale_map(&x, &a, r).unwrap());
            let rhs = r.powf(-gamma) * field.eval(&x);
            assert_relative_eq!(lhs, rhs, max_relative = 1e-10);
        }
    }

    #[test]
    fn rejects_size_mismatch() {
        let a = Anisotropy::new(&[2.0, 2.0], None).unwrap();
        let grid = Arc::new(build_sphere_grid(&a, 16).unwrap());
        assert!(HomogeneousProfile::new(grid, vec![1.0; 5], 0.3).is_err());
    }
}
