//! The dyadic truncation `g_k` of the homogeneous right-hand side
//! `g(t) = t^{-(g~ + 2a~)}`, `g~ = gamma/mu`, `a~ = alpha/mu`.

use crate::error::{Error, Result};
use crate::geometry::Anisotropy;

/// Piecewise truncation:
///
/// ```text
/// g_k(t) = 2^{(g~+2a~)k}        for t <  2^{-k}
///        = t^{-(g~+2a~)}        for 2^{-k} <= t < 2^{k}
///        = 0                    for t >= 2^{k}
/// ```
///
/// Nonincreasing in `t`, bounded by `min(2^{(g~+2a~)k}, t^{-(g~+2a~)})`, and
/// converging pointwise to `g` as `k -> ∞`.
pub fn gk_truncation(t: f64, k: u32, gamma: f64, alpha: f64, a: &Anisotropy) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::param(format!("g_k argument t = {t} must be positive")));
    }
    let mu = a.mu() as f64;
    let p = (gamma + 2.0 * alpha) / mu;
    let lo = 2f64.powi(-(k as i32));
    let hi = 2f64.powi(k as i32);
    Ok(if t < lo {
        2f64.powf(p * k as f64)
    } else if t < hi {
        t.powf(-p)
    } else {
        0.0
    })
}
