//! The closed-form barrier field and its derivatives.
//!
//! With `q_i = mu b_i` (all `>= 4`), `g~ = gamma/mu` and
//! `S(x) = ||x||²_{mu beta} = sum |x_i|^{q_i}`, the barrier is
//! `u(x) = S^{-g~/2}`. Writing `s_i = q_i |x_i|^{q_i - 2} x_i` for the
//! gradient of `S`, the exact derivatives are
//!
//! ```text
//! ∂_i u   = -(g~/2) S^{-g~/2 - 1} s_i
//! ∂²_ij u = (g~(g~+2)/4) S^{-(g~+4)/2} s_i s_j                      (i != j)
//! ∂²_ii u = (g~/4) S^{-(g~+4)/2} [ (g~+2) q_i² |x_i|^{2(q_i-1)}
//!                                  - 2 S q_i (q_i - 1) |x_i|^{q_i-2} ]
//! ```
//!
//! The exponents `q_i >= 4` make `u` a C² function away from the origin,
//! which is what the smoothing multiplier `mu` buys.

use crate::error::{Error, Result};
use crate::field::{DecayClass, Field};
use crate::geometry::Anisotropy;

/// `-gamma`-homogeneous barrier `u(x) = ||x||_{mu beta}^{-gamma/mu}` with
/// analytic gradient and Hessian callbacks.
#[derive(Debug, Clone)]
pub struct BarrierField {
    aniso: Anisotropy,
    gamma: f64,
}

/// Builds the barrier; `gamma` must be positive.
pub fn barrier(a: &Anisotropy, gamma: f64) -> Result<BarrierField> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::param(format!("barrier exponent gamma = {gamma} must be positive")));
    }
    Ok(BarrierField {
        aniso: a.clone(),
        gamma,
    })
}

impl BarrierField {
    pub fn anisotropy(&self) -> &Anisotropy {
        &self.aniso
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    fn exponents(&self) -> (f64, Vec<f64>) {
        let mu = self.aniso.mu() as f64;
        let q: Vec<f64> = self.aniso.beta().iter().map(|b| mu * b).collect();
        (self.gamma / mu, q)
    }

    /// `S(x) = sum |x_i|^{q_i}` and its gradient entries `s_i`.
    fn s_and_grad(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let (_, q) = self.exponents();
        let mut s = 0.0;
        let mut ds = vec![0.0; x.len()];
        for (i, (xi, qi)) in x.iter().zip(&q).enumerate() {
            s += xi.abs().powf(*qi);
            ds[i] = qi * xi.abs().powf(qi - 2.0) * xi;
        }
        (s, ds)
    }

    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.iter().all(|v| *v == 0.0) {
            return Err(Error::domain("barrier gradient undefined at the origin"));
        }
        let (gt, _) = self.exponents();
        let (s, ds) = self.s_and_grad(x);
        let factor = -0.5 * gt * s.powf(-0.5 * gt - 1.0);
        Ok(ds.into_iter().map(|d| factor * d).collect())
    }

    /// Exact Hessian (row-major `n x n`); symmetric by construction.
    pub fn hessian(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.iter().all(|v| *v == 0.0) {
            return Err(Error::domain("barrier Hessian undefined at the origin"));
        }
        let n = x.len();
        let (gt, q) = self.exponents();
        let (s, ds) = self.s_and_grad(x);
        let s_pow = s.powf(-(gt + 4.0) / 2.0);
        let mut h = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = gt * (gt + 2.0) / 4.0 * s_pow * ds[i] * ds[j];
                h[i * n + j] = v;
                h[j * n + i] = v;
            }
            let qi = q[i];
            let xi = x[i].abs();
            let diag = gt / 4.0
                * s_pow
                * ((gt + 2.0) * qi * qi * xi.powf(2.0 * (qi - 1.0))
                    - 2.0 * s * qi * (qi - 1.0) * xi.powf(qi - 2.0));
            h[i * n + i] = diag;
        }
        Ok(h)
    }
}

impl Field for BarrierField {
    fn eval(&self, x: &[f64]) -> f64 {
        let (gt, _) = self.exponents();
        let (s, _) = self.s_and_grad(x);
        if s == 0.0 {
            f64::INFINITY
        } else {
            s.powf(-0.5 * gt)
        }
    }

    fn homogeneity(&self) -> Option<f64> {
        Some(self.gamma)
    }

    fn smooth_at(&self, x: &[f64]) -> bool {
        x.iter().any(|v| *v != 0.0)
    }

    fn decay(&self) -> DecayClass {
        DecayClass::HomogeneousTail
    }
}

/// Free-function views matching the operation-style API.
pub fn barrier_hessian(b: &BarrierField, x: &[f64]) -> Result<Vec<f64>> {
    b.hessian(x)
}

pub fn barrier_gradient(b: &BarrierField, x: &[f64]) -> Result<Vec<f64>> {
    b.gradient(x)
}
