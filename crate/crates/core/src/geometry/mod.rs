//! Anisotropic metric geometry.
//!
//! The anisotropy vector `beta = (b_1, .., b_n)` induces
//!
//! * the quasi-norm `||x||_{m beta} = (sum |x_i|^{m b_i})^{1/2}` for a
//!   positive multiplier `m`,
//! * the scaling group `T_{beta,r} x = (r^{2/b_1} x_1, .., r^{2/b_n} x_n)`,
//!   under which `||T_{beta,r} x||_{m beta} = r^m ||x||_{m beta}`,
//! * the implicit CBL distance `r_beta(x)` solving
//!   `sum x_i^2 / r^{4/b*_i} = 1` with `beta* = (c/n) beta`,
//! * anisotropic balls, ellipsoids and quadrature grids on the unit sphere of
//!   `||.||_{mu beta}`.

mod anisotropy;
mod bodies;
mod quasi;
mod sphere;

pub use anisotropy::{make_anisotropy, Anisotropy};
pub use bodies::{
    ball_contains, ellipsoid_contains, ellipsoid_volume, inclusion_constant,
};
pub use quasi::{
    cbl_distance, intrinsic_radius, project_to_sphere, quasi_norm, quasi_triangle_constant,
    scale_map, TriangleConstantReport,
};
pub use sphere::{
    build_sphere_grid, build_sphere_grid_with_multiplier, PolarRule, QuadPoint, SphereGrid,
};

pub(crate) use sphere::{g_inverse, sgnpow};
