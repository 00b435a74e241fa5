//! Power barriers `u_g(x) = ||x||_{mu beta}^{-g/mu}`, their exact Hessians,
//! anisotropic cone geometry, and the (alpha, gamma) sweep that exhibits the
//! positivity of the operator on barriers near the top of the admissible
//! alpha range.

mod cone;
mod field;
mod gk;
mod sweep;

pub use cone::{cone_complement_measure, cone_membership, delta0_threshold, ConeSpec};
pub use field::{barrier, barrier_gradient, barrier_hessian, BarrierField};
pub use gk::gk_truncation;
pub use sweep::{barrier_sweep, SweepCell, SweepTable};
