//! Real-valued fields on `R^n` exposed through an evaluation interface plus
//! the metadata the quadrature needs: homogeneity degree, smoothness
//! predicate, and decay class.

use crate::geometry::{quasi_norm, Anisotropy};

/// How a field behaves at infinity; drives the far-field tail handling of the
/// operator quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecayClass {
    /// Identically zero outside the Euclidean ball of this radius.
    CompactSupport { radius: f64 },
    /// Bounded with no decay guarantee.
    Bounded,
    /// `u(x) ~ r(x)^{-gamma}` at infinity (any homogeneous field).
    HomogeneousTail,
}

/// A real-valued function on `R^n`.
///
/// `homogeneity() == Some(gamma)` declares `u(T_{beta,r} x) = r^{-gamma} u(x)`;
/// declared degrees are spot-checked by the test suite, not enforced here.
pub trait Field: Sync {
    fn eval(&self, x: &[f64]) -> f64;

    /// Declared homogeneity degree `-gamma`, if any.
    fn homogeneity(&self) -> Option<f64> {
        None
    }

    /// Whether the field is `C^{1,1}` at `x` (caller-asserted; the operator
    /// requires this at evaluation points).
    fn smooth_at(&self, _x: &[f64]) -> bool {
        true
    }

    fn decay(&self) -> DecayClass {
        DecayClass::Bounded
    }
}

impl<F: Fn(&[f64]) -> f64 + Sync> Field for F {
    fn eval(&self, x: &[f64]) -> f64 {
        self(x)
    }
}

/// The constant field.
#[derive(Debug, Clone)]
pub struct Constant(pub f64);

impl Field for Constant {
    fn eval(&self, _x: &[f64]) -> f64 {
        self.0
    }

    fn decay(&self) -> DecayClass {
        DecayClass::Bounded
    }
}

/// Gaussian bump `A exp(-|x - center|^2 / (2 sigma^2))` (Euclidean distance).
#[derive(Debug, Clone)]
pub struct GaussianBump {
    pub center: Vec<f64>,
    pub sigma: f64,
    pub amplitude: f64,
}

impl GaussianBump {
    pub fn new(center: Vec<f64>, sigma: f64) -> Self {
        Self {
            center,
            sigma,
            amplitude: 1.0,
        }
    }
}

impl Field for GaussianBump {
    fn eval(&self, x: &[f64]) -> f64 {
        let d2: f64 = x
            .iter()
            .zip(&self.center)
            .map(|(xi, ci)| (xi - ci) * (xi - ci))
            .sum();
        self.amplitude * (-d2 / (2.0 * self.sigma * self.sigma)).exp()
    }

    fn decay(&self) -> DecayClass {
        DecayClass::Bounded
    }
}

/// `(1 - |x - center|^2 / R^2)^3` inside the Euclidean ball of radius `R`,
/// zero outside: compactly supported and `C^2` across the boundary.
#[derive(Debug, Clone)]
pub struct SmoothCompactBump {
    pub center: Vec<f64>,
    pub radius: f64,
    pub amplitude: f64,
}

impl SmoothCompactBump {
    pub fn new(center: Vec<f64>, radius: f64) -> Self {
        Self {
            center,
            radius,
            amplitude: 1.0,
        }
    }
}

impl Field for SmoothCompactBump {
    fn eval(&self, x: &[f64]) -> f64 {
        let d2: f64 = x
            .iter()
            .zip(&self.center)
            .map(|(xi, ci)| (xi - ci) * (xi - ci))
            .sum();
        let t = 1.0 - d2 / (self.radius * self.radius);
        if t <= 0.0 {
            0.0
        } else {
            self.amplitude * t * t * t
        }
    }

    fn decay(&self) -> DecayClass {
        DecayClass::CompactSupport {
            radius: self.radius + self.center.iter().map(|c| c.abs()).fold(0.0, f64::max),
        }
    }
}

/// Euclidean power field `|x|^{-gamma}`. For isotropic anisotropies this is
/// `-gamma`-homogeneous under `T_{beta,r} = r Id`, which makes it the bridge
/// to the classical Riesz-potential identities.
#[derive(Debug, Clone)]
pub struct EuclideanPower {
    pub gamma: f64,
}

impl Field for EuclideanPower {
    fn eval(&self, x: &[f64]) -> f64 {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        if r2 == 0.0 {
            f64::INFINITY
        } else {
            r2.powf(-self.gamma / 2.0)
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

/// `||x||_beta^theta` smoothly truncated at an outer radius: the designed
/// test field for Hölder/Campanato exponent checks. The truncation keeps the
/// field bounded (hence integrable against the kernel tail) while preserving
/// the `theta`-Hölder behavior near the origin.
#[derive(Debug, Clone)]
pub struct TruncatedPowerField {
    pub aniso: Anisotropy,
    pub theta: f64,
    /// Quasi-norm radius beyond which the field is frozen at its cap value.
    pub cap_radius: f64,
}

impl Field for TruncatedPowerField {
    fn eval(&self, x: &[f64]) -> f64 {
        let r = quasi_norm(x, &self.aniso, 1.0);
        let cap = self.cap_radius;
        if r >= cap {
            cap.powf(self.theta)
        } else {
            r.powf(self.theta)
        }
    }

    fn smooth_at(&self, x: &[f64]) -> bool {
        let r = quasi_norm(x, &self.aniso, 1.0);
        r > 0.0 && (r - self.cap_radius).abs() > 1e-9
    }

    fn decay(&self) -> DecayClass {
        DecayClass::Bounded
    }
}

/// Translation combinator `x -> u(x - shift)`.
pub struct Shifted<'a, F: Field + ?Sized> {
    pub inner: &'a F,
    pub shift: Vec<f64>,
}

impl<'a, F: Field + ?Sized> Field for Shifted<'a, F> {
    fn eval(&self, x: &[f64]) -> f64 {
        let y: Vec<f64> = x.iter().zip(&self.shift).map(|(xi, si)| xi - si).collect();
        self.inner.eval(&y)
    }

    fn homogeneity(&self) -> Option<f64> {
        None // translation destroys homogeneity
    }

    fn smooth_at(&self, x: &[f64]) -> bool {
        let y: Vec<f64> = x.iter().zip(&self.shift).map(|(xi, si)| xi - si).collect();
        self.inner.smooth_at(&y)
    }

    fn decay(&self) -> DecayClass {
        match self.inner.decay() {
            DecayClass::CompactSupport { radius } => DecayClass::CompactSupport {
                radius: radius + self.shift.iter().map(|s| s.abs()).fold(0.0, f64::max),
            },
            other => other,
        }
    }
}

/// Linear combination `a u + b v`, used by the linearity checks.
pub struct LinearCombination<'a> {
    pub a: f64,
    pub u: &'a dyn Field,
    pub b: f64,
    pub v: &'a dyn Field,
}

impl<'a> Field for LinearCombination<'a> {
    fn eval(&self, x: &[f64]) -> f64 {
        self.a * self.u.eval(x) + self.b * self.v.eval(x)
    }

    fn smooth_at(&self, x: &[f64]) -> bool {
        self.u.smooth_at(x) && self.v.smooth_at(x)
    }

    fn decay(&self) -> DecayClass {
        match (self.u.decay(), self.v.decay()) {
            (
                DecayClass::CompactSupport { radius: r1 },
                DecayClass::CompactSupport { radius: r2 },
            ) => DecayClass::CompactSupport { radius: r1.max(r2) },
            _ => DecayClass::Bounded,
        }
    }
}
