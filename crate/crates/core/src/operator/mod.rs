//! Pointwise evaluation of the anisotropic fractional Laplacian
//!
//! ```text
//! L u(x) = C ∫ (u(x) - u(y)) ||x - y||_beta^{-(c + 2a)} dy,   C = 2/b_max - a,
//! ```
//!
//! as a singular integral in the difference variable `y`, split into a
//! symmetrized near field, dyadic far-field shells, and an analytic tail.

mod config;
mod integrability;
mod kernel;

pub use config::{OperatorFlags, OperatorResult, QuadratureConfig, TailMode, UNRELIABLE_ERROR};
pub use integrability::kernel_integrability_report;
pub use kernel::{eval_operator, homogeneity_identity_check, normalization_constant, FracLaplacian};
