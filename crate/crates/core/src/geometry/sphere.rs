//! Quadrature grids on the anisotropic unit sphere.
//!
//! Nodes are images of a quasi-uniform grid on the Euclidean unit sphere
//! under the sign-preserving power map
//!
//! ```text
//! G(e)_i = sign(e_i) |e_i|^{2/(m b_i)},
//! ```
//!
//! which maps `S^{n-1}` bijectively onto the unit sphere of `||.||_{m beta}`
//! (coordinate-wise, `|G(e)_i|^{m b_i} = e_i^2`). Two measures live on the
//! grid:
//!
//! * the **surface measure** (node `weight`), the Hausdorff measure of the
//!   sphere, obtained by integrating the chart Jacobian of `G` over each
//!   node's patch;
//! * the **polar measure** (`polar_weight`), the angular factor of the
//!   anisotropic polar decomposition
//!   `∫ f dy = ∫_0^∞ r^{c-1} ∫_sphere f(T_{beta,r} ω) dμ(ω) dr`.
//!
//! The two are related pointwise by `dμ = (2m / |∇F|) dσ` with
//! `F(y) = ||y||²_{m beta}`: the Euler field `V(y) = (2/b_i y_i)` generating
//! `T_{beta,r}` satisfies `V·∇F = 2m` exactly on the sphere, so the flux of
//! `V` through a surface patch is `2m/|∇F|` per unit surface measure.
//!
//! The chart Jacobian has integrable `|t|^{2/(m b_i) - 1}` singularities where
//! a coordinate vanishes; panels touching those axes are integrated under the
//! regularizing substitution `t = h u^{m b_i / 2}`.

use super::{quasi_norm, Anisotropy};
use crate::error::{Error, Result};

/// A quadrature node on the anisotropic sphere.
#[derive(Debug, Clone)]
pub struct QuadPoint {
    pub x: Vec<f64>,
    /// Surface-measure weight; strictly positive.
    pub weight: f64,
}

/// Quadrature nodes, weights and an interpolation structure on the unit
/// sphere of `||.||_{m beta}`.
#[derive(Debug, Clone)]
pub struct SphereGrid {
    aniso: Anisotropy,
    multiplier: f64,
    resolution: usize,
    nodes: Vec<QuadPoint>,
    polar_weights: Vec<f64>,
    kind: GridKind,
}

#[derive(Debug, Clone)]
enum GridKind {
    /// n = 2: equal-angle midpoint nodes on the preimage circle.
    Circle { thetas: Vec<f64> },
    /// n = 3: recursively triangulated octahedron, projected to the sphere.
    Octa {
        k: usize,
        /// `face_nodes[f][i * (k+1) + j]` = global node index of lattice
        /// point (i, j) on face f (i + j <= k).
        face_nodes: Vec<Vec<usize>>,
        /// Octant sign patterns, indexed like `face_nodes`.
        signs: Vec<[f64; 3]>,
    },
}

/// Composite angular quadrature of the polar measure, used by the operator
/// quadrature. Points lie on the sphere; weights approximate `dμ`.
#[derive(Debug, Clone)]
pub struct PolarRule {
    pub points: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

pub(crate) fn sgnpow(t: f64, p: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        t.signum() * t.abs().powf(p)
    }
}

/// `G(e)` for the given multiplier.
fn g_map(a: &Anisotropy, m: f64, e: &[f64]) -> Vec<f64> {
    e.iter()
        .zip(a.beta())
        .map(|(ei, bi)| sgnpow(*ei, 2.0 / (m * bi)))
        .collect()
}

/// Inverse of `G`: `e_i = sign(x_i) |x_i|^{m b_i / 2}`, mapping the
/// anisotropic sphere back to the Euclidean sphere.
pub(crate) fn g_inverse(a: &Anisotropy, m: f64, x: &[f64]) -> Vec<f64> {
    x.iter()
        .zip(a.beta())
        .map(|(xi, bi)| sgnpow(*xi, m * bi / 2.0))
        .collect()
}

/// `|∇F|` at a sphere point, `F(y) = sum |y_i|^{m b_i}`.
fn grad_f_norm(a: &Anisotropy, m: f64, x: &[f64]) -> f64 {
    let mut s = 0.0;
    for (xi, bi) in x.iter().zip(a.beta()) {
        let q = m * bi;
        let d = q * xi.abs().powf(q - 1.0);
        s += d * d;
    }
    s.sqrt()
}

// ---------------------------------------------------------------------------
// n = 2 chart machinery
// ---------------------------------------------------------------------------

/// Surface density `|dω/dθ|` of the chart `θ -> G(cos θ, sin θ)`.
fn circle_surface_density(a: &Anisotropy, m: f64, theta: f64) -> f64 {
    let e = [theta.cos(), theta.sin()];
    let de = [-theta.sin(), theta.cos()];
    let mut s = 0.0;
    for i in 0..2 {
        let p = 2.0 / (m * a.beta()[i]);
        // d/dθ sign(e)|e|^p = p |e|^{p-1} e'
        let d = p * e[i].abs().powf(p - 1.0) * de[i];
        if d.is_finite() {
            s += d * d;
        }
    }
    s.sqrt()
}

fn circle_polar_density(a: &Anisotropy, m: f64, theta: f64) -> f64 {
    let e = [theta.cos(), theta.sin()];
    let omega = g_map(a, m, &e);
    2.0 * m * circle_surface_density(a, m, theta) / grad_f_norm(a, m, &omega)
}

const GAUSS8_X: [f64; 8] = [
    -0.9602898564975362,
    -0.7966664774136267,
    -0.5255324099163290,
    -0.1834346424956498,
    0.1834346424956498,
    0.5255324099163290,
    0.7966664774136267,
    0.9602898564975362,
];
const GAUSS8_W: [f64; 8] = [
    0.1012285362903763,
    0.2223810344533745,
    0.3137066458778873,
    0.3626837833783620,
    0.3626837833783620,
    0.3137066458778873,
    0.2223810344533745,
    0.1012285362903763,
];

/// Integrates `f` over `[t0, t1]`. `sing_lo`/`sing_hi` carry the substitution
/// exponent `kappa >= 1` when the corresponding endpoint is an integrable
/// algebraic singularity of `f` (density `~ dist^{1/kappa - 1}`).
fn integrate_panel(
    t0: f64,
    t1: f64,
    sing_lo: Option<f64>,
    sing_hi: Option<f64>,
    f: &dyn Fn(f64) -> f64,
) -> f64 {
    let len = t1 - t0;
    debug_assert!(len > 0.0);
    match (sing_lo, sing_hi) {
        (None, None) => {
            let mut acc = 0.0;
            for (x, w) in GAUSS8_X.iter().zip(GAUSS8_W) {
                let t = t0 + 0.5 * len * (x + 1.0);
                acc += w * f(t);
            }
            acc * 0.5 * len
        }
        (Some(kappa), None) => {
            // θ = t0 + len * u^kappa, dθ = len * kappa * u^{kappa-1} du.
            let mut acc = 0.0;
            for (x, w) in GAUSS8_X.iter().zip(GAUSS8_W) {
                let u = 0.5 * (x + 1.0);
                let t = t0 + len * u.powf(kappa);
                acc += w * f(t) * kappa * u.powf(kappa - 1.0);
            }
            acc * 0.5 * len
        }
        (None, Some(kappa)) => {
            let mut acc = 0.0;
            for (x, w) in GAUSS8_X.iter().zip(GAUSS8_W) {
                let u = 0.5 * (x + 1.0);
                let t = t1 - len * u.powf(kappa);
                acc += w * f(t) * kappa * u.powf(kappa - 1.0);
            }
            acc * 0.5 * len
        }
        (Some(_), Some(_)) => {
            // Panels are always shorter than a quarter turn, so both endpoints
            // singular cannot happen; split defensively.
            let mid = 0.5 * (t0 + t1);
            integrate_panel(t0, mid, sing_lo, None, f) + integrate_panel(mid, t1, None, sing_hi, f)
        }
    }
}

/// Axis crossings of the circle chart in `[0, 2π)` together with the index of
/// the vanishing coordinate.
fn circle_axes() -> [(f64, usize); 4] {
    use std::f64::consts::FRAC_PI_2;
    [
        (0.0, 1),               // sin = 0
        (FRAC_PI_2, 0),         // cos = 0
        (2.0 * FRAC_PI_2, 1),   // sin = 0
        (3.0 * FRAC_PI_2, 0),   // cos = 0
    ]
}

/// Substitution exponent for an axis where coordinate `i` vanishes, or `None`
/// when the density is regular there (`2/(m b_i) >= 1`).
fn axis_kappa(a: &Anisotropy, m: f64, coord: usize) -> Option<f64> {
    let p = 2.0 / (m * a.beta()[coord]);
    if p < 1.0 {
        Some(1.0 / p)
    } else {
        None
    }
}

/// Splits `[t0, t1]` (a sub-quarter arc) at nothing — panels are built so that
/// axis points only occur at panel ends; this resolves which substitution to
/// apply at each end.
fn panel_singularities(a: &Anisotropy, m: f64, t0: f64, t1: f64) -> (Option<f64>, Option<f64>) {
    let tol = 1e-12;
    let mut lo = None;
    let mut hi = None;
    for (axis, coord) in circle_axes() {
        for shift in [-2.0 * std::f64::consts::PI, 0.0, 2.0 * std::f64::consts::PI] {
            let ax = axis + shift;
            if (ax - t0).abs() < tol {
                lo = axis_kappa(a, m, coord);
            }
            if (ax - t1).abs() < tol {
                hi = axis_kappa(a, m, coord);
            }
        }
    }
    (lo, hi)
}

/// Panel boundaries: the `resolution` equal patches, additionally split at
/// the four axis crossings (no-ops when `resolution` is divisible by 4).
fn circle_panel_boundaries(resolution: usize) -> Vec<f64> {
    use std::f64::consts::PI;
    let mut bounds: Vec<f64> = (0..=resolution)
        .map(|j| 2.0 * PI * j as f64 / resolution as f64)
        .collect();
    for k in 1..4 {
        let ax = k as f64 * PI / 2.0;
        if bounds.iter().all(|b| (b - ax).abs() > 1e-12) {
            bounds.push(ax);
        }
    }
    bounds.sort_by(|a, b| a.partial_cmp(b).unwrap());
    bounds
}

// ---------------------------------------------------------------------------
// Grid construction
// ---------------------------------------------------------------------------

/// Builds the quadrature grid on the unit sphere of `||.||_{mu beta}` — the
/// sphere used by the operator, barrier and profile machinery.
pub fn build_sphere_grid(a: &Anisotropy, resolution: usize) -> Result<SphereGrid> {
    build_sphere_grid_with_multiplier(a, a.mu() as f64, resolution)
}

/// Same construction on the unit sphere of `||.||_{m beta}` for an arbitrary
/// positive multiplier; `m = 1` gives the plain beta-sphere used by the cone
/// measures.
pub fn build_sphere_grid_with_multiplier(
    a: &Anisotropy,
    multiplier: f64,
    resolution: usize,
) -> Result<SphereGrid> {
    if resolution < 8 {
        return Err(Error::param(format!(
            "sphere grid resolution {resolution} below the minimum of 8"
        )));
    }
    if !(multiplier > 0.0) {
        return Err(Error::param("sphere multiplier must be positive"));
    }
    match a.dim() {
        2 => build_circle_grid(a, multiplier, resolution),
        3 => build_octa_grid(a, multiplier, resolution),
        n => Err(Error::param(format!(
            "sphere grids are implemented for n = 2 (equal-angle) and n = 3 \
             (recursive triangulation); got n = {n}"
        ))),
    }
}

fn build_circle_grid(a: &Anisotropy, m: f64, resolution: usize) -> Result<SphereGrid> {
    use std::f64::consts::PI;
    let r = resolution;
    let mut nodes = Vec::with_capacity(r);
    let mut polar = Vec::with_capacity(r);
    let mut thetas = Vec::with_capacity(r);
    for j in 0..r {
        let theta = 2.0 * PI * (j as f64 + 0.5) / r as f64;
        let lo = 2.0 * PI * j as f64 / r as f64;
        let hi = 2.0 * PI * (j + 1) as f64 / r as f64;
        // A patch may straddle an axis when resolution % 4 != 0.
        let mut cuts = vec![lo];
        for (axis, _) in circle_axes() {
            if axis > lo + 1e-12 && axis < hi - 1e-12 {
                cuts.push(axis);
            }
        }
        cuts.push(hi);
        let mut w = 0.0;
        for pair in cuts.windows(2) {
            let (slo, shi) = panel_singularities(a, m, pair[0], pair[1]);
            w += integrate_panel(pair[0], pair[1], slo, shi, &|t| {
                circle_surface_density(a, m, t)
            });
        }
        let e = [theta.cos(), theta.sin()];
        let x = g_map(a, m, &e);
        let p = 2.0 * m * w / grad_f_norm(a, m, &x);
        nodes.push(QuadPoint { x, weight: w });
        polar.push(p);
        thetas.push(theta);
    }
    Ok(SphereGrid {
        aniso: a.clone(),
        multiplier: m,
        resolution,
        nodes,
        polar_weights: polar,
        kind: GridKind::Circle { thetas },
    })
}

fn octa_faces() -> Vec<[f64; 3]> {
    let mut faces = Vec::with_capacity(8);
    for sx in [1.0, -1.0] {
        for sy in [1.0, -1.0] {
            for sz in [1.0, -1.0] {
                faces.push([sx, sy, sz]);
            }
        }
    }
    faces
}

fn build_octa_grid(a: &Anisotropy, m: f64, resolution: usize) -> Result<SphereGrid> {
    let k = (resolution / 4).max(2);
    let faces = octa_faces();
    let mut coords: Vec<[f64; 3]> = Vec::new();
    let mut index: std::collections::HashMap<[i64; 3], usize> = std::collections::HashMap::new();
    let mut face_nodes: Vec<Vec<usize>> = Vec::with_capacity(8);

    let quant = |v: f64| (v * 1e12).round() as i64;
    for s in &faces {
        let mut ids = vec![usize::MAX; (k + 1) * (k + 1)];
        for i in 0..=k {
            for j in 0..=(k - i) {
                let l = k - i - j;
                let p = [
                    s[0] * i as f64 / k as f64,
                    s[1] * j as f64 / k as f64,
                    s[2] * l as f64 / k as f64,
                ];
                let norm = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
                let e = [p[0] / norm, p[1] / norm, p[2] / norm];
                let key = [quant(e[0]), quant(e[1]), quant(e[2])];
                let id = *index.entry(key).or_insert_with(|| {
                    coords.push(e);
                    coords.len() - 1
                });
                ids[i * (k + 1) + j] = id;
            }
        }
        face_nodes.push(ids);
    }

    // Surface weights: lump one third of each (sub-divided) triangle's
    // anisotropic area onto its corners.
    let mut weights = vec![0.0; coords.len()];
    let map3 = |e: &[f64; 3]| -> [f64; 3] {
        let v = g_map(a, m, e);
        [v[0], v[1], v[2]]
    };
    let tri_area = |p: &[f64; 3], q: &[f64; 3], r: &[f64; 3]| -> f64 {
        let u = [q[0] - p[0], q[1] - p[1], q[2] - p[2]];
        let v = [r[0] - p[0], r[1] - p[1], r[2] - p[2]];
        let cx = u[1] * v[2] - u[2] * v[1];
        let cy = u[2] * v[0] - u[0] * v[2];
        let cz = u[0] * v[1] - u[1] * v[0];
        0.5 * (cx * cx + cy * cy + cz * cz).sqrt()
    };
    let normalize = |p: [f64; 3]| -> [f64; 3] {
        let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        [p[0] / n, p[1] / n, p[2] / n]
    };
    // One extra midpoint subdivision per mesh triangle sharpens the
    // polyhedral area estimate near the singular coordinate circles.
    let curved_area = |ea: &[f64; 3], eb: &[f64; 3], ec: &[f64; 3]| -> f64 {
        let mab = normalize([
            0.5 * (ea[0] + eb[0]),
            0.5 * (ea[1] + eb[1]),
            0.5 * (ea[2] + eb[2]),
        ]);
        let mbc = normalize([
            0.5 * (eb[0] + ec[0]),
            0.5 * (eb[1] + ec[1]),
            0.5 * (eb[2] + ec[2]),
        ]);
        let mca = normalize([
            0.5 * (ec[0] + ea[0]),
            0.5 * (ec[1] + ea[1]),
            0.5 * (ec[2] + ea[2]),
        ]);
        let (pa, pb, pc) = (map3(ea), map3(eb), map3(ec));
        let (pab, pbc, pca) = (map3(&mab), map3(&mbc), map3(&mca));
        tri_area(&pa, &pab, &pca)
            + tri_area(&pb, &pbc, &pab)
            + tri_area(&pc, &pca, &pbc)
            + tri_area(&pab, &pbc, &pca)
    };
    for ids in &face_nodes {
        let at = |i: usize, j: usize| ids[i * (k + 1) + j];
        for i in 0..k {
            for j in 0..(k - i) {
                let (na, nb, nc) = (at(i, j), at(i + 1, j), at(i, j + 1));
                let area = curved_area(&coords[na], &coords[nb], &coords[nc]);
                weights[na] += area / 3.0;
                weights[nb] += area / 3.0;
                weights[nc] += area / 3.0;
                if i + j < k - 1 {
                    let (nd, ne, nf) = (at(i + 1, j), at(i + 1, j + 1), at(i, j + 1));
                    let area = curved_area(&coords[nd], &coords[ne], &coords[nf]);
                    weights[nd] += area / 3.0;
                    weights[ne] += area / 3.0;
                    weights[nf] += area / 3.0;
                }
            }
        }
    }

    let mut nodes = Vec::with_capacity(coords.len());
    let mut polar = Vec::with_capacity(coords.len());
    for (e, w) in coords.iter().zip(&weights) {
        let x = g_map(a, m, e);
        let p = 2.0 * m * w / grad_f_norm(a, m, &x);
        nodes.push(QuadPoint { x, weight: *w });
        polar.push(p);
    }
    Ok(SphereGrid {
        aniso: a.clone(),
        multiplier: m,
        resolution,
        nodes,
        polar_weights: polar,
        kind: GridKind::Octa {
            k,
            face_nodes,
            signs: faces,
        },
    })
}

impl SphereGrid {
    pub fn anisotropy(&self) -> &Anisotropy {
        &self.aniso
    }

    /// Multiplier `m` of the sphere `||.||_{m beta} = 1` the nodes lie on.
    pub fn multiplier(&self) -> f64 {
        self.multiplier
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn nodes(&self) -> &[QuadPoint] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Polar-measure weight of each node (see module docs).
    pub fn polar_weights(&self) -> &[f64] {
        &self.polar_weights
    }

    /// Total surface measure represented by the grid.
    pub fn surface_measure(&self) -> f64 {
        self.nodes.iter().map(|q| q.weight).sum()
    }

    /// Chart parameters of the nodes (n = 2 only).
    pub fn thetas(&self) -> Option<&[f64]> {
        match &self.kind {
            GridKind::Circle { thetas } => Some(thetas),
            _ => None,
        }
    }

    /// Maps any nonzero point to convex interpolation weights over nearby
    /// nodes: weights are nonnegative, sum to 1, and node points reproduce
    /// themselves exactly.
    pub fn interpolate(&self, x: &[f64]) -> Result<Vec<(usize, f64)>> {
        let (_, omega) = self.project(x)?;
        match &self.kind {
            GridKind::Circle { .. } => {
                let e = g_inverse(&self.aniso, self.multiplier, &omega);
                let theta = e[1].atan2(e[0]).rem_euclid(2.0 * std::f64::consts::PI);
                let (j0, j1, t) = self.circle_bracket(theta);
                Ok(vec![(j0, 1.0 - t), (j1, t)])
            }
            GridKind::Octa { k, face_nodes, signs } => {
                let e = g_inverse(&self.aniso, self.multiplier, &omega);
                let (face, bary) = locate_octant(signs, &e);
                let ids = &face_nodes[face];
                let k = *k;
                let u = (bary[0] * k as f64).clamp(0.0, k as f64 - 1e-12);
                let v = (bary[1] * k as f64).clamp(0.0, k as f64 - 1e-12);
                let (mut i, j) = (u.floor() as usize, v.floor() as usize);
                if i + j >= k {
                    // Clamp onto the lattice triangle.
                    let over = i + j - (k - 1);
                    i = i.saturating_sub(over);
                }
                let (fu, fv) = (u - i as f64, v - j as f64);
                let at = |i: usize, j: usize| ids[i * (k + 1) + j];
                if fu + fv <= 1.0 {
                    Ok(vec![
                        (at(i, j), 1.0 - fu - fv),
                        (at(i + 1, j), fu),
                        (at(i, j + 1), fv),
                    ])
                } else {
                    Ok(vec![
                        (at(i + 1, j), 1.0 - fv),
                        (at(i, j + 1), 1.0 - fu),
                        (at(i + 1, j + 1), fu + fv - 1.0),
                    ])
                }
            }
        }
    }

    /// Angle bracket on the circle chart: node indices `(j, j+1)` around
    /// `theta` and the convex parameter between them.
    pub(crate) fn circle_bracket(&self, theta: f64) -> (usize, usize, f64) {
        let r = self.resolution as f64;
        let pos = theta / (2.0 * std::f64::consts::PI) * r - 0.5;
        let j = pos.floor();
        let t = pos - j;
        let j0 = (j.rem_euclid(r)) as usize % self.resolution;
        let j1 = (j0 + 1) % self.resolution;
        (j0, j1, t)
    }

    /// Projects `x` onto this grid's sphere: returns the radius `r` with
    /// `x = T_{beta,r} ω`, `||ω||_{m beta} = 1`.
    pub fn project(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        let m = self.multiplier;
        let norm = quasi_norm(x, &self.aniso, m);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::domain("cannot project the origin to the sphere"));
        }
        let radius = norm.powf(1.0 / m);
        let omega = super::scale_map(x, &self.aniso, 1.0 / radius)?;
        Ok((radius, omega))
    }

    /// Composite high-order quadrature of the polar measure (n = 2), or the
    /// node rule itself (n = 3).
    pub fn polar_rule(&self, panels: usize) -> PolarRule {
        match &self.kind {
            GridKind::Circle { .. } => {
                let a = &self.aniso;
                let m = self.multiplier;
                let bounds = circle_panel_boundaries(panels.max(8));
                let mut points = Vec::new();
                let mut weights = Vec::new();
                for pair in bounds.windows(2) {
                    let (t0, t1) = (pair[0], pair[1]);
                    let len = t1 - t0;
                    let (slo, shi) = panel_singularities(a, m, t0, t1);
                    let mut emit = |t: f64, w: f64| {
                        let e = [t.cos(), t.sin()];
                        points.push(g_map(a, m, &e));
                        weights.push(w * circle_polar_density(a, m, t));
                    };
                    match (slo, shi) {
                        (None, None) => {
                            for (x, w) in GAUSS8_X.iter().zip(GAUSS8_W) {
                                emit(t0 + 0.5 * len * (x + 1.0), 0.5 * len * w);
                            }
                        }
                        (Some(kappa), None) => {
                            for (x, w) in GAUSS8_X.iter().zip(GAUSS8_W) {
                                let u = 0.5 * (x + 1.0);
                                emit(
                                    t0 + len * u.powf(kappa),
                                    0.5 * len * w * kappa * u.powf(kappa - 1.0),
                                );
                            }
                        }
                        (None, Some(kappa)) => {
                            for (x, w) in GAUSS8_X.iter().zip(GAUSS8_W) {
                                let u = 0.5 * (x + 1.0);
                                emit(
                                    t1 - len * u.powf(kappa),
                                    0.5 * len * w * kappa * u.powf(kappa - 1.0),
                                );
                            }
                        }
                        (Some(_), Some(_)) => unreachable!("sub-quarter panels"),
                    }
                }
                PolarRule { points, weights }
            }
            GridKind::Octa { .. } => PolarRule {
                points: self.nodes.iter().map(|q| q.x.clone()).collect(),
                weights: self.polar_weights.clone(),
            },
        }
    }

    /// CSV export: `node_index, x_1..x_n, weight`.
    pub fn to_csv(&self) -> String {
        let n = self.aniso.dim();
        let mut out = String::from("node_index");
        for i in 1..=n {
            out.push_str(&format!(",x_{i}"));
        }
        out.push_str(",weight\n");
        for (idx, q) in self.nodes.iter().enumerate() {
            out.push_str(&idx.to_string());
            for v in &q.x {
                out.push_str(&format!(",{v}"));
            }
            out.push_str(&format!(",{}\n", q.weight));
        }
        out
    }
}

/// Octant + face barycentric coordinates of a Euclidean-sphere point.
fn locate_octant(signs: &[[f64; 3]], e: &[f64]) -> (usize, [f64; 3]) {
    let sx = if e[0] >= 0.0 { 1.0 } else { -1.0 };
    let sy = if e[1] >= 0.0 { 1.0 } else { -1.0 };
    let sz = if e[2] >= 0.0 { 1.0 } else { -1.0 };
    let face = signs
        .iter()
        .position(|s| s[0] == sx && s[1] == sy && s[2] == sz)
        .expect("octant table covers all sign patterns");
    let l1 = e[0].abs() + e[1].abs() + e[2].abs();
    (face, [e[0].abs() / l1, e[1].abs() / l1, e[2].abs() / l1])
}
