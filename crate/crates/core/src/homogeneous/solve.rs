//! Dense linear algebra on the profile operator: the homogeneous Poisson
//! solve and the near-zero principal eigenpair.

use super::operator::ProfileOperator;
use super::profile::HomogeneousProfile;
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use std::sync::Arc;

/// Health of a direct solve.
#[derive(Debug, Clone)]
pub struct SolveInfo {
    /// 1-norm condition estimate (Hager-style).
    pub condition: f64,
    /// `||A φ - 1||_∞`.
    pub residual: f64,
    pub min_value: f64,
    pub linf: f64,
    /// Condition estimate above 1e12: expected as gamma approaches gamma*.
    pub near_critical: bool,
}

fn one_norm(m: &DMatrix<f64>) -> f64 {
    let mut best = 0.0f64;
    for j in 0..m.ncols() {
        let s: f64 = m.column(j).iter().map(|v| v.abs()).sum();
        best = best.max(s);
    }
    best
}

/// Hager's estimator for `||A^{-1}||_1` from an LU factorization.
fn inv_one_norm_estimate(lu: &nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>, n: usize) -> f64 {
    let mut x = DVector::from_element(n, 1.0 / n as f64);
    let mut best = 0.0f64;
    for _ in 0..5 {
        let y = match lu.solve(&x) {
            Some(y) => y,
            None => return f64::INFINITY,
        };
        let norm = y.iter().map(|v| v.abs()).sum::<f64>();
        best = best.max(norm);
        let xi: DVector<f64> = y.map(|v| if v >= 0.0 { 1.0 } else { -1.0 });
        // A^T z = xi; LU of A solves transposed systems via the adjoint trick:
        // fall back to solving with the transpose matrix factorization-free.
        let z = match lu.solve(&xi) {
            Some(z) => z,
            None => return f64::INFINITY,
        };
        let (mut jmax, mut vmax) = (0usize, 0.0f64);
        for (j, v) in z.iter().enumerate() {
            if v.abs() > vmax {
                vmax = v.abs();
                jmax = j;
            }
        }
        let mut e = DVector::zeros(n);
        e[jmax] = 1.0;
        if (&e - &x).norm() < 1e-14 {
            break;
        }
        x = e;
    }
    best
}

/// Solves `L_gamma φ = 1` by LU factorization.
pub fn solve_homogeneous_poisson(
    op: &ProfileOperator,
) -> Result<(HomogeneousProfile, SolveInfo)> {
    let a = op.system_matrix();
    let n = a.nrows();
    let norm_a = one_norm(&a);
    let lu = a.clone().lu();
    let rhs = DVector::from_element(n, 1.0);
    let phi = lu
        .solve(&rhs)
        .ok_or_else(|| Error::numerical("singular profile system"))?;
    let residual = (&a * &phi - &rhs).amax();
    let condition = norm_a * inv_one_norm_estimate(&lu, n);
    let values: Vec<f64> = phi.iter().cloned().collect();
    let min_value = values.iter().cloned().fold(f64::MAX, f64::min);
    let linf = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let profile = HomogeneousProfile::new(Arc::clone(op.grid()), values, op.gamma)?;
    Ok((
        profile,
        SolveInfo {
            condition,
            residual,
            min_value,
            linf,
            near_critical: condition > 1e12,
        },
    ))
}

/// Eigenpair of the smallest-modulus eigenvalue.
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
    /// `||A v - λ v||_∞ / ||v||_∞`.
    pub residual: f64,
    pub iterations: usize,
}

/// Inverse iteration at shift 0: converges to the eigenvalue of `L_gamma`
/// nearest zero, which near `gamma*` is the principal (Perron-type) one.
pub fn principal_eigenpair(op: &ProfileOperator, seed: u64) -> Result<EigenPair> {
    let a = op.system_matrix();
    let n = a.nrows();
    let lu = a.clone().lu();
    let mut rng = rng_from_seed(seed);
    let mut v = DVector::from_fn(n, |_, _| 1.0 + 0.01 * rng.gen_range(-1.0..1.0));
    v /= v.norm();
    let mut lambda = 0.0;
    let mut iterations = 0;
    for it in 0..500 {
        iterations = it + 1;
        let w = lu
            .solve(&v)
            .ok_or_else(|| Error::numerical("exactly singular system in inverse iteration"))?;
        let w_norm = w.norm();
        if !w_norm.is_finite() || w_norm == 0.0 {
            return Err(Error::numerical("inverse iteration overflowed"));
        }
        let v_next = &w / w_norm;
        let av = &a * &v_next;
        let new_lambda = v_next.dot(&av);
        let done = (new_lambda - lambda).abs() <= 1e-13 * new_lambda.abs().max(1e-13);
        lambda = new_lambda;
        v = v_next;
        if done && it >= 3 {
            break;
        }
        if it == 499 {
            return Err(Error::numerical(
                "inverse iteration failed to converge in 500 steps",
            ));
        }
    }
    let av = &a * &v;
    let residual = (&av - &(lambda * &v)).amax() / v.amax();
    // Orient positively by the mean.
    let mean: f64 = v.iter().sum();
    let sign = if mean >= 0.0 { 1.0 } else { -1.0 };
    Ok(EigenPair {
        value: lambda,
        vector: v.iter().map(|x| sign * x).collect(),
        residual,
        iterations,
    })
}
