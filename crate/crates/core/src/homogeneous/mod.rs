//! Reduction of `-gamma`-homogeneous fields to profiles on the anisotropic
//! sphere, the induced dense operator, the scaling exponent `gamma*`, and the
//! normalized fundamental-solution profile.
//!
//! A `-gamma`-homogeneous field is determined by its profile on the
//! mu-beta-sphere: `u(x) = r(x)^{-gamma} φ(ω(x))`. Restricting the singular
//! integral to such fields yields a dense linear operator `L_gamma` on node
//! values; `L_gamma φ = 1` is the homogeneous Poisson problem, the positivity
//! of its solution degenerates exactly at the scaling exponent `gamma*`, and
//! the principal eigenfunction of `L_{gamma*}` is the fundamental-solution
//! profile.
//!
//! The profile solver is implemented for n = 2, where the profile admits a C²
//! periodic-spline representation; a C⁰ (piecewise-linear) profile would make
//! the collocation diverge for `2 alpha > 1` because point values of the
//! operator need `C^{2 alpha + eps}` smoothness.

mod fundsol;
mod gamma_star;
mod operator;
mod profile;
mod solve;

pub use fundsol::{
    fundamental_solution, harnack_ratio, holder_seminorm_of_psi, FundamentalSolution,
    PsiHolderReport,
};
pub use gamma_star::{gamma_star, GammaStarDiagnostics};
pub use operator::{assemble_profile_operator, AssemblyDiagnostics, ProfileOperator};
pub use profile::{HomogeneousProfile, ProfileField};
pub use solve::{principal_eigenpair, solve_homogeneous_poisson, EigenPair, SolveInfo};
