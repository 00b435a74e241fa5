//! Quadrature configuration and the diagnostic result decomposition.

use crate::error::{Error, Result};

/// Error estimate reported when the near-field recursion hits its
/// subdivision limit; paired with [`OperatorFlags::subdivision_limit`].
pub const UNRELIABLE_ERROR: f64 = 1e30;

/// How the integral over `||y|| > far_cutoff` is handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailMode {
    /// Radial substitution `w = r^{-2a}` turns the tail into a bounded
    /// integral evaluated by Gauss quadrature; exact spirit for homogeneous
    /// or decaying fields and convergent for any bounded field.
    AnalyticHomogeneous,
    /// Drop the tail and inflate the error estimate by the analytic bound.
    Truncate,
}

/// Parameters of the singular-integral quadrature.
///
/// Radii are measured in the intrinsic scale `r(y) = ||y||_{mu beta}^{1/mu}`
/// (1-homogeneous under `T_{beta,r}`). For fields declaring a homogeneity
/// degree the three radii are additionally scaled by the intrinsic radiusial
/// of the evaluation point, which keeps the quadrature covariant under the
/// operator's scaling group.
#[derive(Debug, Clone)]
pub struct QuadratureConfig {
    /// Radius of the symmetrized near-field ball around `y = 0`.
    pub near_radius: f64,
    /// Outer cutoff `R_inf` beyond which the tail handling takes over.
    pub far_cutoff: f64,
    /// Target relative tolerance of the near-field shell recursion.
    pub rel_tol: f64,
    /// Maximum number of dyadic near-field shells. Slowly converging
    /// configurations (small `4/b_max - 2a` gap) need several hundred shells
    /// because per-shell contributions decay like `2^{-k(4/b_max - 2a)}`.
    pub max_subdivisions: usize,
    pub tail_mode: TailMode,
    /// Angular panels of the polar quadrature rule.
    pub angular_panels: usize,
    /// Radius of the analytically integrated ball around the field's origin
    /// singularity (used only for homogeneous fields).
    pub image_radius: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            near_radius: 0.5,
            far_cutoff: (2.0f64).powi(20),
            rel_tol: 1e-8,
            max_subdivisions: 400,
            tail_mode: TailMode::AnalyticHomogeneous,
            angular_panels: 128,
            image_radius: 0.45,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.near_radius > 0.0 && self.near_radius < self.far_cutoff) {
            return Err(Error::param(format!(
                "near_radius {} must be positive and below far_cutoff {}",
                self.near_radius, self.far_cutoff
            )));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-2) {
            return Err(Error::param(format!(
                "rel_tol {} must lie in (0, 1e-2]",
                self.rel_tol
            )));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::param("max_subdivisions must be positive"));
        }
        if self.angular_panels < 8 {
            return Err(Error::param("angular_panels must be at least 8"));
        }
        if !(self.image_radius > 0.0 && self.image_radius < 1.0) {
            return Err(Error::param("image_radius must lie in (0, 1)"));
        }
        Ok(())
    }
}

/// Quadrature health flags attached to an [`OperatorResult`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OperatorFlags {
    /// Near-field recursion stopped by `max_subdivisions` instead of the
    /// tolerance; `error_estimate` is set to [`UNRELIABLE_ERROR`].
    pub subdivision_limit: bool,
    /// Tail was truncated; its analytic bound is folded into the estimate.
    pub tail_truncated: bool,
}

impl OperatorFlags {
    pub fn reliable(&self) -> bool {
        !self.subdivision_limit
    }
}

/// Value of the operator with its diagnostic decomposition;
/// `value = near_part + far_part + tail_part` holds exactly.
#[derive(Debug, Clone)]
pub struct OperatorResult {
    pub value: f64,
    pub error_estimate: f64,
    pub near_part: f64,
    pub far_part: f64,
    pub tail_part: f64,
    pub flags: OperatorFlags,
}

impl OperatorResult {
    /// CSV row `x_1..x_n, value, error_estimate, near, far, tail`.
    pub fn csv_row(&self, x: &[f64]) -> String {
        let mut row = String::new();
        for v in x {
            row.push_str(&format!("{v},"));
        }
        row.push_str(&format!(
            "{},{},{},{},{}",
            self.value, self.error_estimate, self.near_part, self.far_part, self.tail_part
        ));
        row
    }
}
