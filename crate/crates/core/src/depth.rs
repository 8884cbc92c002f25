//! Half-space depth for skew-t and generalized hyperbolic laws.
//!
//! Evaluation happens in the canonical frame: transform the point, then
//! minimize min{F_u(uᵀx*), 1 − F_u(uᵀx*)} over unit directions, where F_u is
//! the exact one-dimensional projection law. Directions live on half the
//! sphere (the min with the complement covers the antipodes); the search is
//! a coarse angular grid followed by derivative-free refinement with
//! restart phases.

use nalgebra::{DMatrix, DVector};
use std::cell::Cell;

use crate::error::{Error, Result};
use crate::multivariate::{canonical_st_projected_skew, CanonicalReduction, MultivariateLaw, StParams};
use crate::quad;
use crate::specfun::student_t_cdf;
use crate::univariate::{ghmix::MixingTable, UnivariateLaw};

/// Tuning for the direction search and contour tracing.
#[derive(Debug, Clone)]
pub struct DepthOptions {
    /// Grid points per angle coordinate in the seeding phase.
    pub direction_grid: usize,
    /// Number of distinct grid minima refined locally.
    pub refine_seeds: usize,
    /// Stop restart phases once the objective improves by less than this.
    pub objective_tol: f64,
    /// Angular resolution of the local refinement.
    pub angle_tol: f64,
    /// Budget of objective evaluations per depth query.
    pub max_evals: usize,
    /// Accept a contour vertex when |depth − α| falls below this.
    pub contour_tol: f64,
    /// Per-coordinate tail mass outside the canonical bounding box: points
    /// beyond it get depth zero without optimization.
    pub tail_eps: f64,
    /// Width (relative to the interquartile range) beyond which a flat
    /// depth maximum is reported as non-unique.
    pub flat_width: f64,
}

impl Default for DepthOptions {
    fn default() -> Self {
        DepthOptions {
            direction_grid: 64,
            refine_seeds: 3,
            objective_tol: 1e-7,
            angle_tol: 1e-9,
            max_evals: 40_000,
            contour_tol: 1e-4,
            tail_eps: 1e-12,
            flat_width: 1e-3,
        }
    }
}

/// Depth value with the minimizing direction (original coordinates) and a
/// convergence flag; a false flag means the optimizer exhausted its budget
/// while still improving.
#[derive(Debug, Clone)]
pub struct DepthResult {
    pub depth: f64,
    pub direction: DVector<f64>,
    pub converged: bool,
}

/// Maximal-depth point along with a multiplicity flag (set when the depth
/// surface is flat around the maximizer wider than the configured width).
#[derive(Debug, Clone)]
pub struct MedianResult {
    pub point: DVector<f64>,
    pub depth: f64,
    pub multiple: bool,
    pub converged: bool,
}

/// Most plausible ruin scenario and its depth.
#[derive(Debug, Clone)]
pub struct StressResult {
    pub scenario: DVector<f64>,
    pub depth: f64,
    pub converged: bool,
}

/// Closed convex contour traced at a fixed depth level. Vertices are in the
/// original coordinates, counter-clockwise; `frame` is the canonical
/// reduction used during tracing.
#[derive(Debug, Clone)]
pub struct ContourPolyline {
    pub alpha: f64,
    pub vertices: Vec<[f64; 2]>,
    pub frame: CanonicalReduction,
    pub converged: bool,
}

impl ContourPolyline {
    pub fn signed_area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    /// Convexity defect relative to the polygon scale: zero for a perfectly
    /// convex vertex ordering.
    pub fn convexity_defect(&self) -> f64 {
        convexity_defect(&self.vertices)
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        polygon_contains(&self.vertices, p)
    }
}

/// Ellipsoid {x : (x − c)ᵀ M (x − c) ≤ 1} with M symmetric positive-definite.
#[derive(Debug, Clone)]
pub struct Ellipsoid {
    pub center: DVector<f64>,
    pub shape: DMatrix<f64>,
}

impl Ellipsoid {
    pub fn contains(&self, x: &DVector<f64>) -> bool {
        let d = x - &self.center;
        (d.transpose() * &self.shape * &d)[(0, 0)] <= 1.0 + 1e-12
    }
}

pub(crate) fn signed_area(verts: &[[f64; 2]]) -> f64 {
    let n = verts.len();
    let mut acc = 0.0;
    for i in 0..n {
        let a = verts[i];
        let b = verts[(i + 1) % n];
        acc += a[0] * b[1] - b[0] * a[1];
    }
    0.5 * acc
}

pub(crate) fn convexity_defect(verts: &[[f64; 2]]) -> f64 {
    let n = verts.len();
    if n < 4 {
        return 0.0;
    }
    let mut scale = 0.0f64;
    let mut worst = 0.0f64;
    for i in 0..n {
        let o = verts[i];
        let a = verts[(i + 1) % n];
        let b = verts[(i + 2) % n];
        let cross = (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
        let len1 = ((a[0] - o[0]).powi(2) + (a[1] - o[1]).powi(2)).sqrt();
        let len2 = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
        scale = scale.max(len1 * len2);
        if cross < 0.0 {
            worst = worst.max(-cross);
        }
    }
    if scale > 0.0 {
        worst / scale
    } else {
        0.0
    }
}

/// Point-in-convex-polygon test for counter-clockwise vertices, O(log n).
pub(crate) fn polygon_contains(verts: &[[f64; 2]], p: [f64; 2]) -> bool {
    let n = verts.len();
    if n < 3 {
        return false;
    }
    let cross = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let v0 = verts[0];
    if cross(v0, verts[1], p) < 0.0 || cross(v0, verts[n - 1], p) > 0.0 {
        return false;
    }
    let (mut lo, mut hi) = (1usize, n - 1);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if cross(v0, verts[mid], p) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    cross(verts[lo], verts[hi], p) >= 0.0
}

/// Canonical-frame evaluation engine shared by the half-space and expectile
/// depth operations.
pub(crate) struct Engine {
    pub(crate) dim: usize,
    pub(crate) red: CanonicalReduction,
    pub(crate) kind: Kind,
    pub(crate) opts: DepthOptions,
    /// Canonical per-coordinate quantile box at tail_eps.
    box_lo: Vec<f64>,
    box_hi: Vec<f64>,
    evals: Cell<usize>,
}

pub(crate) enum Kind {
    St { gamma: f64, dof: f64 },
    Gh { kappa: f64, lambda: f64, chi: f64, psi: f64, table: MixingTable },
}

impl Engine {
    pub(crate) fn new(law: &MultivariateLaw, need_tilde: bool, opts: &DepthOptions) -> Result<Engine> {
        let red = law.canonicalize()?;
        let kind = match law {
            MultivariateLaw::St(p) => {
                if need_tilde && p.dof <= 1.0 {
                    return Err(Error::infinite_mean(format!("ST with dof = {}", p.dof)));
                }
                Kind::St { gamma: red.canonical_skew, dof: p.dof }
            }
            MultivariateLaw::Gh(p) => {
                let kappa = red.canonical_skew;
                let needed = if kappa == 0.0 { 0.5 } else { 1.0 };
                if need_tilde && !crate::univariate::ghmix::gig_moment_finite(p.lambda, p.psi, needed) {
                    return Err(Error::infinite_mean(format!(
                        "GH with lambda = {}, psi = {}",
                        p.lambda, p.psi
                    )));
                }
                let poly = if need_tilde { kappa.abs() + 1.0 } else { 0.0 };
                let table = MixingTable::build(p.lambda, p.chi, p.psi, poly)?;
                Kind::Gh { kappa, lambda: p.lambda, chi: p.chi, psi: p.psi, table }
            }
        };
        let dim = law.dim();
        let mut engine = Engine {
            dim,
            red,
            kind,
            opts: opts.clone(),
            box_lo: vec![f64::NEG_INFINITY; dim],
            box_hi: vec![f64::INFINITY; dim],
            evals: Cell::new(0),
        };
        for i in 0..dim {
            let law = engine.coord_law(i)?;
            engine.box_lo[i] = law.quantile(opts.tail_eps)?;
            engine.box_hi[i] = law.quantile(1.0 - opts.tail_eps)?;
        }
        Ok(engine)
    }

    /// Canonical marginal along coordinate i (all skewness sits in i = 0).
    pub(crate) fn coord_law(&self, i: usize) -> Result<UnivariateLaw> {
        match &self.kind {
            Kind::St { gamma, dof } => {
                UnivariateLaw::skew_t(0.0, 1.0, if i == 0 { *gamma } else { 0.0 }, *dof)
            }
            Kind::Gh { kappa, lambda, chi, psi, .. } => UnivariateLaw::gh(
                0.0,
                1.0,
                if i == 0 { *kappa } else { 0.0 },
                *lambda,
                *chi,
                *psi,
            ),
        }
    }

    pub(crate) fn to_canonical(&self, x: &DVector<f64>) -> DVector<f64> {
        self.red.to_canonical(x)
    }

    pub(crate) fn from_canonical(&self, y: &DVector<f64>) -> DVector<f64> {
        self.red.from_canonical(y)
    }

    /// (F, 1 − F) of the projection onto the unit direction with first
    /// component u1, evaluated at s = uᵀx*.
    fn proj_pair(&self, u1: f64, s: f64) -> (f64, f64) {
        self.evals.set(self.evals.get() + 1);
        match &self.kind {
            Kind::St { gamma, dof } => {
                let g = canonical_st_projected_skew(*gamma, u1);
                if dof.is_infinite() {
                    (crate::univariate::sn::cdf(g, s), crate::univariate::sn::sf(g, s))
                } else if *dof == 1.0 {
                    let f = crate::univariate::sc::cdf(g, s);
                    (f, 1.0 - f)
                } else if g == 0.0 {
                    let f = student_t_cdf(s, *dof).unwrap_or(f64::NAN);
                    (f, 1.0 - f)
                } else {
                    crate::univariate::stq::StKernel::new(g, *dof).cdf_pair(s)
                }
            }
            Kind::Gh { kappa, table, .. } => table.proj_cdf_pair(u1 * kappa, s),
        }
    }

    /// (F̃, 1 − F̃) of the projection, via the partial-moment pair.
    fn proj_tilde_pair(&self, u1: f64, s: f64) -> (f64, f64) {
        self.evals.set(self.evals.get() + 1);
        let (l, u) = match &self.kind {
            Kind::St { gamma, dof } => {
                let g = canonical_st_projected_skew(*gamma, u1);
                if dof.is_infinite() {
                    crate::univariate::sn::lu(g, s)
                } else {
                    crate::univariate::stq::StKernel::new(g, *dof).lu(s)
                }
            }
            Kind::Gh { kappa, table, .. } => table.proj_lu(u1 * kappa, s),
        };
        let total = l + u;
        if total <= 0.0 {
            return (0.5, 0.5);
        }
        ((l / total).clamp(0.0, 1.0), (u / total).clamp(0.0, 1.0))
    }

    fn objective(&self, y: &DVector<f64>, angles: &[f64], tilde: bool) -> f64 {
        let u = unit_from_angles(angles, self.dim);
        let mut s = 0.0;
        for i in 0..self.dim {
            s += u[i] * y[i];
        }
        let (f, fc) = if tilde {
            self.proj_tilde_pair(u[0], s)
        } else {
            self.proj_pair(u[0], s)
        };
        f.min(fc)
    }

    /// Infimum of the projected probability over directions.
    pub(crate) fn minimize(&self, y: &DVector<f64>, tilde: bool) -> DepthResult {
        self.evals.set(0);
        if !tilde {
            for i in 0..self.dim {
                if y[i] < self.box_lo[i] || y[i] > self.box_hi[i] {
                    let mut dir = DVector::zeros(self.dim);
                    dir[i] = if y[i] > self.box_hi[i] { 1.0 } else { -1.0 };
                    let dir = normalize(self.red.a.transpose() * dir);
                    return DepthResult { depth: 0.0, direction: dir, converged: true };
                }
            }
        }
        if self.dim == 1 {
            let (f, fc) = if tilde {
                self.proj_tilde_pair(1.0, y[0])
            } else {
                self.proj_pair(1.0, y[0])
            };
            let dir = normalize(self.red.a.transpose() * DVector::from_element(1, 1.0));
            return DepthResult { depth: f.min(fc), direction: dir, converged: true };
        }
        let (angles, value, converged) = if self.dim == 2 {
            self.minimize_circle(y, tilde)
        } else {
            self.minimize_sphere(y, tilde)
        };
        let u = unit_from_angles(&angles, self.dim);
        let dir = normalize(self.red.a.transpose() * DVector::from_column_slice(&u));
        DepthResult { depth: value, direction: dir, converged }
    }

    fn minimize_circle(&self, y: &DVector<f64>, tilde: bool) -> (Vec<f64>, f64, bool) {
        let m = self.opts.direction_grid.max(8);
        let step = std::f64::consts::PI / m as f64;
        let vals: Vec<f64> = (0..m)
            .map(|j| self.objective(y, &[j as f64 * step], tilde))
            .collect();
        // Indices of circular local minima, best-first.
        let mut seeds: Vec<usize> = (0..m)
            .filter(|&j| {
                vals[j] <= vals[(j + m - 1) % m] && vals[j] <= vals[(j + 1) % m]
            })
            .collect();
        seeds.sort_by(|&a, &b| vals[a].partial_cmp(&vals[b]).unwrap());
        seeds.truncate(self.opts.refine_seeds.max(1));
        let mut best_a = seeds.first().map(|&j| j as f64 * step).unwrap_or(0.0);
        let mut best_v = seeds.first().map(|&j| vals[j]).unwrap_or(f64::INFINITY);
        for &j in &seeds {
            let lo = (j as f64 - 1.0) * step;
            let hi = (j as f64 + 1.0) * step;
            let (a, v) = quad::golden_min(|a| self.objective(y, &[a], tilde), lo, hi, self.opts.angle_tol);
            if v < best_v {
                best_v = v;
                best_a = a;
            }
        }
        // Restart phases on a shrinking bracket around the incumbent.
        let mut width = step;
        let mut converged = true;
        loop {
            width *= 0.4;
            let (a, v) = quad::golden_min(
                |a| self.objective(y, &[a], tilde),
                best_a - width,
                best_a + width,
                self.opts.angle_tol,
            );
            let improve = best_v - v;
            if v < best_v {
                best_v = v;
                best_a = a;
            }
            if improve <= self.opts.objective_tol {
                break;
            }
            if self.evals.get() > self.opts.max_evals {
                converged = false;
                break;
            }
        }
        (vec![best_a], best_v, converged)
    }

    fn minimize_sphere(&self, y: &DVector<f64>, tilde: bool) -> (Vec<f64>, f64, bool) {
        let n_angles = self.dim - 1;
        // Per-axis grid: the configured count for d = 3, coarser above that
        // to keep the seed set near 64^2.
        let per_axis = if n_angles <= 2 {
            self.opts.direction_grid.max(8)
        } else {
            (4096f64.powf(1.0 / n_angles as f64).round() as usize).max(4)
        };
        let step = std::f64::consts::PI / per_axis as f64;
        let total = per_axis.pow(n_angles as u32);
        let mut best: Vec<(Vec<f64>, f64)> = Vec::new();
        for idx in 0..total {
            let mut rem = idx;
            let mut a = vec![0.0; n_angles];
            for slot in a.iter_mut() {
                *slot = (rem % per_axis) as f64 * step;
                rem /= per_axis;
            }
            let v = self.objective(y, &a, tilde);
            best.push((a, v));
            best.sort_by(|x, z| x.1.partial_cmp(&z.1).unwrap());
            best.truncate(self.opts.refine_seeds.max(1));
        }
        let mut incumbent = best[0].clone();
        for (seed, _) in best {
            let (a, v, _) = quad::nelder_mead(
                |a| self.objective(y, a, tilde),
                &seed,
                step,
                1e-12,
                400,
            );
            if v < incumbent.1 {
                incumbent = (a, v);
            }
        }
        let mut converged = true;
        let mut step_now = step;
        loop {
            step_now *= 0.4;
            let (a, v, _) = quad::nelder_mead(
                |a| self.objective(y, a, tilde),
                &incumbent.0,
                step_now,
                1e-12,
                400,
            );
            let improve = incumbent.1 - v;
            if v < incumbent.1 {
                incumbent = (a, v);
            }
            if improve <= self.opts.objective_tol {
                break;
            }
            if self.evals.get() > self.opts.max_evals {
                converged = false;
                break;
            }
        }
        (incumbent.0, incumbent.1, converged)
    }

    /// Maximize depth along the canonical first axis; all other coordinates
    /// are zero by the sign-flip symmetry.
    pub(crate) fn axis_max(&self, tilde: bool) -> Result<MedianResult> {
        let coord = self.coord_law(0)?;
        let lo = coord.quantile(0.001)?;
        let hi = coord.quantile(0.999)?;
        let depth_at = |t: f64| -> (f64, bool) {
            let mut y = DVector::zeros(self.dim);
            y[0] = t;
            let r = self.minimize(&y, tilde);
            (r.depth, r.converged)
        };
        let mut all_converged = true;
        let (t_best, neg_v) = quad::golden_min(
            |t| {
                let (v, c) = depth_at(t);
                all_converged &= c;
                -v
            },
            lo,
            hi,
            1e-7 * (hi - lo).abs().max(1.0),
        );
        let depth = -neg_v;
        // Flat-maximum scan: widen while the depth stays within 1e-6.
        let iqr = (coord.quantile(0.75)? - coord.quantile(0.25)?).abs();
        let probe = self.opts.flat_width * iqr;
        let mut flat_lo = t_best;
        let mut flat_hi = t_best;
        for k in 1..=8 {
            let t = t_best - k as f64 * probe;
            if depth_at(t).0 >= depth - 1e-6 {
                flat_lo = t;
            } else {
                break;
            }
        }
        for k in 1..=8 {
            let t = t_best + k as f64 * probe;
            if depth_at(t).0 >= depth - 1e-6 {
                flat_hi = t;
            } else {
                break;
            }
        }
        let multiple = (flat_hi - flat_lo) > probe * 1.5;
        let center = if multiple { 0.5 * (flat_lo + flat_hi) } else { t_best };
        let mut y = DVector::zeros(self.dim);
        y[0] = center;
        let final_depth = depth_at(center).0;
        Ok(MedianResult {
            point: self.from_canonical(&y),
            depth: final_depth,
            multiple,
            converged: all_converged,
        })
    }

    /// Trace the α-contour in the canonical frame: radial bisection along
    /// rays from the anchor, upper half-plane only, mirrored by symmetry.
    pub(crate) fn contour_canonical(
        &self,
        alpha: f64,
        n_vertices: usize,
        tilde: bool,
    ) -> Result<(Vec<[f64; 2]>, bool)> {
        if self.dim != 2 {
            return Err(Error::domain("contour", "contour tracing requires dimension 2"));
        }
        if !(alpha > 0.0 && alpha <= 0.5) {
            return Err(Error::domain("contour", format!("alpha = {alpha} not in (0, 0.5]")));
        }
        let n = n_vertices.max(8) & !1usize;
        let anchor = self.axis_max(tilde)?;
        let max_depth = anchor.depth;
        if max_depth < alpha - 1e-9 {
            return Err(Error::EmptyDepthSet { alpha, max_depth });
        }
        let anchor_y = self.to_canonical(&anchor.point);
        // Scale the ray fan to the per-coordinate quantile widths so that
        // strongly elongated contours still get evenly spread vertices;
        // long near-tangential chords otherwise bite off area near the tips.
        let mut ray_scale = [1.0f64; 2];
        for i in 0..2 {
            let coord = self.coord_law(i)?;
            let w = (coord.quantile(1.0 - alpha)? - coord.quantile(alpha)?).abs();
            ray_scale[i] = w.max(1e-12);
        }
        let half = n / 2;
        let mut upper: Vec<[f64; 2]> = Vec::with_capacity(half + 1);
        let mut converged = anchor.converged;
        let depth_at = |y1: f64, y2: f64| -> f64 {
            let y = DVector::from_column_slice(&[y1, y2]);
            self.minimize(&y, tilde).depth
        };
        for j in 0..=half {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
            let raw = (ray_scale[0] * theta.cos(), ray_scale[1] * theta.sin());
            let len = (raw.0 * raw.0 + raw.1 * raw.1).sqrt();
            let (c, s) = (raw.0 / len, raw.1 / len);
            // Outer bracket.
            let mut r_lo = 0.0f64;
            let mut r_hi = 1.0f64;
            let mut expansions = 0;
            while depth_at(anchor_y[0] + r_hi * c, anchor_y[1] + r_hi * s) >= alpha {
                r_lo = r_hi;
                r_hi *= 2.0;
                expansions += 1;
                if expansions > 120 {
                    return Err(Error::domain("contour", "contour ray failed to leave the depth set"));
                }
            }
            // Bisect until the bracket pins the radius itself (the bracket
            // always straddles the true crossing, so its width bounds the
            // radial error independently of how flat the depth profile is)
            // and the vertex meets the depth tolerance.
            let mut vertex_ok = false;
            let mut r_mid = 0.5 * (r_lo + r_hi);
            for _ in 0..90 {
                r_mid = 0.5 * (r_lo + r_hi);
                let d = depth_at(anchor_y[0] + r_mid * c, anchor_y[1] + r_mid * s);
                let width_ok = (r_hi - r_lo) <= 2e-4 * (1.0 + r_mid);
                if width_ok && (d - alpha).abs() <= self.opts.contour_tol {
                    vertex_ok = true;
                    break;
                }
                if d > alpha {
                    r_lo = r_mid;
                } else {
                    r_hi = r_mid;
                }
                if (r_hi - r_lo) <= 1e-14 * (1.0 + r_mid) {
                    // Depth jumps across the ray; accept the midpoint.
                    vertex_ok = (d - alpha).abs() <= 10.0 * self.opts.contour_tol;
                    break;
                }
            }
            converged &= vertex_ok;
            upper.push([anchor_y[0] + r_mid * c, anchor_y[1] + r_mid * s]);
        }
        let mut verts = upper.clone();
        for j in half + 1..n {
            let m = upper[n - j];
            verts.push([m[0], -m[1]]);
        }
        Ok((verts, converged))
    }
}

fn unit_from_angles(angles: &[f64], dim: usize) -> Vec<f64> {
    debug_assert_eq!(angles.len() + 1, dim);
    let mut u = vec![0.0; dim];
    let mut sin_prod = 1.0;
    for (i, a) in angles.iter().enumerate() {
        u[i] = sin_prod * a.cos();
        sin_prod *= a.sin();
    }
    u[dim - 1] = sin_prod;
    u
}

fn normalize(v: DVector<f64>) -> DVector<f64> {
    let n = v.norm();
    if n > 0.0 {
        v / n
    } else {
        v
    }
}

/// P(uᵀX ≤ uᵀx) for a unit direction u, through the exact projection law.
pub fn half_space_prob(law: &MultivariateLaw, x: &DVector<f64>, u: &DVector<f64>) -> Result<f64> {
    if (u.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::domain("half_space_prob", "u must be a unit vector"));
    }
    if x.len() != law.dim() || u.len() != law.dim() {
        return Err(Error::domain("half_space_prob", "dimension mismatch"));
    }
    law.project(u)?.cdf(u.dot(x))
}

/// Half-space depth of `x`.
pub fn hd(law: &MultivariateLaw, x: &DVector<f64>, opts: &DepthOptions) -> Result<DepthResult> {
    if x.len() != law.dim() {
        return Err(Error::domain("hd", "dimension mismatch"));
    }
    let engine = Engine::new(law, false, opts)?;
    let y = engine.to_canonical(x);
    Ok(engine.minimize(&y, false))
}

/// α-depth contour of a bivariate law.
pub fn hd_contour(
    law: &MultivariateLaw,
    alpha: f64,
    n_vertices: usize,
    opts: &DepthOptions,
) -> Result<ContourPolyline> {
    let engine = Engine::new(law, false, opts)?;
    let (canonical, converged) = engine.contour_canonical(alpha, n_vertices, false)?;
    Ok(finish_contour(&engine.red, alpha, canonical, converged))
}

pub(crate) fn finish_contour(
    red: &CanonicalReduction,
    alpha: f64,
    canonical: Vec<[f64; 2]>,
    converged: bool,
) -> ContourPolyline {
    let mut vertices: Vec<[f64; 2]> = canonical
        .iter()
        .map(|v| {
            let y = DVector::from_column_slice(v);
            let x = red.from_canonical(&y);
            [x[0], x[1]]
        })
        .collect();
    if signed_area(&vertices) < 0.0 {
        vertices.reverse();
    }
    ContourPolyline { alpha, vertices, frame: red.clone(), converged }
}

/// Exact skew-Cauchy depth set: a ball in the canonical frame with center
/// (s(α), 0, …) and radius t(α), mapped back through the affine frame. At
/// α = 0.5 the set degenerates to the angular-symmetry center; the returned
/// shape matrix is then effectively infinite.
pub fn sc_contour_exact(law: &StParams, alpha: f64) -> Result<Ellipsoid> {
    if law.dof != 1.0 {
        return Err(Error::domain("sc_contour_exact", "law is not skew-Cauchy (dof must be 1)"));
    }
    if !(alpha > 0.0 && alpha <= 0.5) {
        return Err(Error::domain("sc_contour_exact", format!("alpha = {alpha} not in (0, 0.5]")));
    }
    let red = law.canonicalize()?;
    let g = red.canonical_skew;
    let delta = g / (1.0 + g * g).sqrt();
    let angle = (0.5 - alpha) * std::f64::consts::PI;
    let s = delta / angle.cos();
    let t = angle.tan();
    let mut center_c = DVector::zeros(law.dim());
    center_c[0] = s;
    let center = red.from_canonical(&center_c);
    let t2 = (t * t).max(1e-300);
    let shape = red.a.transpose() * &red.a / t2;
    Ok(Ellipsoid { center, shape })
}

/// Half-space median: the argmax of depth, found on the canonical first axis
/// and mapped back.
pub fn half_space_median(law: &MultivariateLaw, opts: &DepthOptions) -> Result<MedianResult> {
    let engine = Engine::new(law, false, opts)?;
    engine.axis_max(false)
}

/// Skewness index d₁ = 1/2 − depth at the half-space median.
pub fn d1(law: &MultivariateLaw, opts: &DepthOptions) -> Result<f64> {
    let m = half_space_median(law, opts)?;
    Ok((0.5 - m.depth).max(0.0))
}

/// Skewness index d₂ = 1/2 − depth at the canonical component-wise median.
pub fn d2(law: &MultivariateLaw, opts: &DepthOptions) -> Result<f64> {
    let engine = Engine::new(law, false, opts)?;
    let mut y = DVector::zeros(law.dim());
    y[0] = engine.coord_law(0)?.quantile(0.5)?;
    let r = engine.minimize(&y, false);
    Ok((0.5 - r.depth).max(0.0))
}

/// Maximal-depth scenario in the ruin half-space {x : wᵀx ≥ l0}.
///
/// Returns the half-space median when it is already ruinous; otherwise
/// searches the ruin boundary hyperplane, where the quasiconcave depth
/// attains its constrained maximum.
pub fn reverse_stress(
    law: &MultivariateLaw,
    w: &DVector<f64>,
    l0: f64,
    opts: &DepthOptions,
) -> Result<StressResult> {
    let d = law.dim();
    if w.len() != d {
        return Err(Error::domain("reverse_stress", "dimension mismatch"));
    }
    let w_norm = w.norm();
    if !(w_norm > 0.0) || !l0.is_finite() {
        return Err(Error::domain("reverse_stress", "loss direction must be nonzero and the threshold finite"));
    }
    let engine = Engine::new(law, false, opts)?;
    let median = engine.axis_max(false)?;
    if w.dot(&median.point) >= l0 {
        return Ok(StressResult {
            scenario: median.point,
            depth: median.depth,
            converged: median.converged,
        });
    }
    // Orthonormal basis of the hyperplane wᵀx = l0 through its point nearest
    // the median.
    let w_unit = w / w_norm;
    let base = &median.point + &w_unit * ((l0 - w.dot(&median.point)) / w_norm);
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(d - 1);
    // Householder completion of w_unit.
    let mut v = w_unit.clone();
    v[0] -= 1.0;
    let norm2 = v.norm_squared();
    for j in 1..d {
        let mut e = DVector::zeros(d);
        e[j] = 1.0;
        let col = if norm2 < 1e-28 {
            e
        } else {
            &e - &v * (2.0 * v.dot(&e) / norm2)
        };
        basis.push(col);
    }
    let depth_at = |t: &[f64]| -> f64 {
        let mut x = base.clone();
        for (j, b) in basis.iter().enumerate() {
            x += b * t[j];
        }
        let y = engine.to_canonical(&x);
        engine.minimize(&y, false).depth
    };
    let scale = {
        // Representative spread of the depth bulk along the plane; moderate
        // quantiles, not the tail box, which is enormous for heavy tails.
        let mut width = 0.0f64;
        for i in 0..d {
            let law = engine.coord_law(i)?;
            width = width.max((law.quantile(0.99)? - law.quantile(0.01)?).abs());
        }
        width.max(1.0)
    };
    let (t_opt, depth) = if d == 2 {
        let f0 = depth_at(&[0.0]);
        let mut lo = -scale;
        let mut hi = scale;
        for _ in 0..60 {
            if depth_at(&[lo]) < f0.max(1e-9) * 0.5 {
                break;
            }
            lo *= 2.0;
        }
        for _ in 0..60 {
            if depth_at(&[hi]) < f0.max(1e-9) * 0.5 {
                break;
            }
            hi *= 2.0;
        }
        let (t, v) = quad::golden_min(|t| -depth_at(&[t]), lo, hi, 1e-9 * scale);
        (vec![t], -v)
    } else {
        let (t, v, _) = quad::nelder_mead(|t| -depth_at(t), &vec![0.0; d - 1], scale * 0.2, 1e-12, 600);
        (t, -v)
    };
    let mut scenario = base.clone();
    for (j, b) in basis.iter().enumerate() {
        scenario += b * t_opt[j];
    }
    let y = engine.to_canonical(&scenario);
    let check = engine.minimize(&y, false);
    Ok(StressResult { scenario, depth, converged: check.converged })
}
