//! The anisotropy parameter object.

use crate::error::{Error, Result};

/// Exponent vector `beta` with its derived quantities. This is the parameter
/// object threaded through every module.
#[derive(Debug, Clone, PartialEq)]
pub struct Anisotropy {
    /// The exponents `b_1, .., b_n`, all positive.
    beta: Vec<f64>,
    /// Anisotropic dimension `c = sum 2/b_i`.
    c: f64,
    b_max: f64,
    b_min: f64,
    /// Smoothing multiplier: `||.||_{mu beta}` is C^2 away from the origin
    /// because every exponent `mu b_i >= 4`.
    mu: u32,
    /// Normalized exponents `beta* = (c/n) beta`, which satisfy `c_{beta*} = n`.
    beta_star: Vec<f64>,
}

impl Anisotropy {
    /// Builds the parameter object from the raw exponents.
    ///
    /// `mu` defaults to the smallest natural number with `mu * b_min >= 4`;
    /// an override must still satisfy that bound, otherwise `||.||_{mu beta}`
    /// would lose the C^2 regularity the barrier machinery relies on.
    pub fn new(beta: &[f64], mu_override: Option<u32>) -> Result<Self> {
        if beta.is_empty() {
            return Err(Error::param("beta must have at least one entry"));
        }
        for (i, &b) in beta.iter().enumerate() {
            if !(b > 0.0) || !b.is_finite() {
                return Err(Error::param(format!(
                    "beta[{i}] = {b} must be a positive finite real"
                )));
            }
        }
        let n = beta.len() as f64;
        let c: f64 = beta.iter().map(|b| 2.0 / b).sum();
        let b_max = beta.iter().cloned().fold(f64::MIN, f64::max);
        let b_min = beta.iter().cloned().fold(f64::MAX, f64::min);
        let mu_default = (4.0 / b_min).ceil().max(1.0) as u32;
        let mu = match mu_override {
            Some(m) => {
                if m == 0 || (m as f64) * b_min < 4.0 {
                    return Err(Error::param(format!(
                        "mu = {m} violates mu * b_min >= 4 (b_min = {b_min}); \
                         smallest admissible mu is {mu_default}"
                    )));
                }
                m
            }
            None => mu_default,
        };
        let beta_star = beta.iter().map(|b| c / n * b).collect();
        Ok(Self {
            beta: beta.to_vec(),
            c,
            b_max,
            b_min,
            mu,
            beta_star,
        })
    }

    pub fn dim(&self) -> usize {
        self.beta.len()
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    /// Anisotropic dimension `c = sum 2/b_i`.
    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn b_max(&self) -> f64 {
        self.b_max
    }

    pub fn b_min(&self) -> f64 {
        self.b_min
    }

    pub fn mu(&self) -> u32 {
        self.mu
    }

    /// `beta* = (c/n) beta`; satisfies `sum 2/b*_i = n` exactly.
    pub fn beta_star(&self) -> &[f64] {
        &self.beta_star
    }

    /// Upper bound of the admissible fractional orders: `alpha < 2/b_max`.
    pub fn alpha_sup(&self) -> f64 {
        2.0 / self.b_max
    }

    /// True when `|c - n|` is below `tol`, the regime in which the CBL
    /// distance scales exactly linearly under `T_{beta,r}` and the Bessel
    /// embedding applies.
    pub fn is_critical(&self, tol: f64) -> bool {
        (self.c - self.beta.len() as f64).abs() < tol
    }
}

/// Free-function counterpart of [`Anisotropy::new`].
pub fn make_anisotropy(beta: &[f64], mu_override: Option<u32>) -> Result<Anisotropy> {
    Anisotropy::new(beta, mu_override)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn isotropic_arithmetic() {
        let a = Anisotropy::new(&[2.0, 2.0], None).unwrap();
        assert_eq!(a.c(), 2.0);
        assert_eq!(a.b_max(), 2.0);
        assert_eq!(a.mu(), 2);
    }

    #[test]
    fn four_thirds_four_is_critical() {
        let a = Anisotropy::new(&[4.0 / 3.0, 4.0], None).unwrap();
        assert_relative_eq!(a.c(), 2.0, max_relative = 1e-15);
        assert!(a.is_critical(1e-12));
        assert_eq!(a.mu(), 3); // smallest mu with mu * 4/3 >= 4
    }

    #[test]
    fn beta_star_normalization() {
        let a = Anisotropy::new(&[2.0, 4.0], None).unwrap();
        assert_relative_eq!(a.c(), 1.5, max_relative = 1e-15);
        assert_relative_eq!(a.beta_star()[0], 1.5, max_relative = 1e-15);
        assert_relative_eq!(a.beta_star()[1], 3.0, max_relative = 1e-15);
        let c_star: f64 = a.beta_star().iter().map(|b| 2.0 / b).sum();
        assert_relative_eq!(c_star, 2.0, max_relative = 1e-14);
    }

    #[test]
    fn rejects_nonpositive_entries() {
        assert!(Anisotropy::new(&[2.0, 0.0], None).is_err());
        assert!(Anisotropy::new(&[2.0, -1.0], None).is_err());
        assert!(Anisotropy::new(&[], None).is_err());
    }

    #[test]
    fn rejects_undersized_mu_override() {
        assert!(Anisotropy::new(&[2.0, 2.0], Some(1)).is_err());
        assert!(Anisotropy::new(&[2.0, 2.0], Some(2)).is_ok());
        assert!(Anisotropy::new(&[2.0, 2.0], Some(5)).is_ok());
    }
}
