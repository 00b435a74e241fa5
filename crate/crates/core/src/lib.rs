//! Numerical machinery for anisotropic fractional Laplacians.
//!
//! The operator family treated here is
//!
//! ```text
//! L u(x) = C ∫ (u(x) - u(y)) / ||x - y||^(c + 2a) dy,     C = 2/b_max - a,
//! ```
//!
//! where `||.||` is the anisotropic quasi-norm attached to an exponent vector
//! `beta = (b_1, .., b_n)` and `c = sum 2/b_i` plays the role of the dimension.
//! The crate provides:
//!
//! * [`geometry`] — quasi-norms, the implicit CBL distance, scaling maps,
//!   anisotropic balls/ellipsoids and quadrature grids on anisotropic spheres;
//! * [`operator`] — pointwise evaluation of the operator as a singular
//!   integral with near-field symmetrization and far-field tails;
//! * [`barrier`] — closed-form power barriers, their exact Hessians,
//!   anisotropic cones and the (alpha, gamma) positivity sweep;
//! * [`homogeneous`] — reduction of (-gamma)-homogeneous fields to sphere
//!   profiles, the induced dense operator, the scaling exponent `gamma*` and
//!   the normalized fundamental-solution profile;
//! * [`norms`] — ellipsoid averages, Campanato/Hölder/Gagliardo seminorms and
//!   FFT-based Bessel norms with the `(1 + r^2)^(a/2)` multiplier.
//!
//! All sampling routines are seeded and deterministic; parallel sections use
//! order-independent reductions so results are identical across thread counts.

pub mod barrier;
pub mod error;
pub mod field;
pub mod geometry;
pub mod homogeneous;
pub mod norms;
pub mod operator;
pub(crate) mod rng;
pub(crate) mod sum;

pub use error::{Error, Result};
pub use field::{DecayClass, Field};
pub use geometry::{Anisotropy, QuadPoint, SphereGrid};
pub use operator::{FracLaplacian, OperatorResult, QuadratureConfig, TailMode};
