//! Ellipsoidal approximation of depth sets, misclassification probabilities
//! of that approximation, and deviation-from-angular-symmetry sweeps.

use nalgebra::{DMatrix, DVector};

use crate::depth::{polygon_contains, DepthOptions, Ellipsoid, Engine, Kind};
use crate::error::{Error, Result};
use crate::multivariate::MultivariateLaw;
use crate::quad;
use crate::specfun::{bessel_k_scaled, ln_gamma, normal_cdf, student_t_cdf};

/// Grid controls for the misclassification quadrature.
#[derive(Debug, Clone)]
pub struct GridSpec {
    /// Cells per axis of the canonical-frame grid.
    pub resolution: usize,
    /// Halving the cell size must move each probability by less than this,
    /// otherwise the report is flagged (and refined when allowed).
    pub stability_tol: f64,
    /// Double the resolution until stable, up to `max_resolution`.
    pub auto_refine: bool,
    pub max_resolution: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            resolution: 600,
            stability_tol: 1e-3,
            auto_refine: true,
            max_resolution: 4800,
        }
    }
}

/// Misclassification masses of the ellipsoidal approximation: false
/// negatives (in the depth set, outside the ellipsoid) and false positives
/// (the reverse), with the grid metadata used for the quadrature.
#[derive(Debug, Clone)]
pub struct MisclassReport {
    pub alpha: f64,
    pub p_false_negative: f64,
    pub p_false_positive: f64,
    pub resolution: usize,
    /// Canonical-frame bounds: (low, high) per axis.
    pub bounds: [[f64; 2]; 2],
    pub cell_area: f64,
    pub stable: bool,
}

/// Families covered by the d₂ parameter sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepFamily {
    /// Skew-t with shape = degrees of freedom (infinite allowed).
    SkewT,
    /// Hyperbolic skew-t with shape = degrees of freedom.
    HyperbolicSkewT,
    /// Normal-inverse-Gaussian with shape = ψ.
    Nig,
}

#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub skew: f64,
    pub shape: f64,
    pub d2: f64,
}

/// Ellipsoidal approximation of the α-depth set: component-wise canonical
/// quantiles give the center and semi-axes, mapped back through the frame.
pub fn ellipsoid_approx(law: &MultivariateLaw, alpha: f64, opts: &DepthOptions) -> Result<Ellipsoid> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(Error::domain("ellipsoid_approx", format!("alpha = {alpha} not in (0, 0.5)")));
    }
    let engine = Engine::new(law, false, opts)?;
    let d = law.dim();
    let mut center_c = DVector::zeros(d);
    let mut inv_r2 = DVector::zeros(d);
    for i in 0..d {
        let coord = engine.coord_law(i)?;
        let a = coord.quantile(alpha)?;
        let b = coord.quantile(1.0 - alpha)?;
        center_c[i] = 0.5 * (a + b);
        let r = 0.5 * (a - b).abs();
        inv_r2[i] = 1.0 / (r * r);
    }
    let center = engine.red.from_canonical(&center_c);
    let dmat = DMatrix::from_diagonal(&inv_r2);
    let shape = engine.red.a.transpose() * dmat * &engine.red.a;
    Ok(Ellipsoid { center, shape })
}

/// Canonical bivariate density evaluator, shared by the grid quadrature.
enum CanonicalDensity<'a> {
    StFinite { gamma: f64, dof: f64, ln_c: f64 },
    StInf { gamma: f64 },
    GhClosed { kappa: f64, lambda: f64, chi: f64, rate: f64, ln_c: f64 },
    GhMixture { kappa: f64, table: &'a crate::univariate::ghmix::MixingTable },
}

impl<'a> CanonicalDensity<'a> {
    fn new(kind: &'a Kind) -> Result<CanonicalDensity<'a>> {
        Ok(match kind {
            Kind::St { gamma, dof } => {
                if dof.is_infinite() {
                    CanonicalDensity::StInf { gamma: *gamma }
                } else {
                    let ln_c = ln_gamma((dof + 2.0) / 2.0)
                        - ln_gamma(dof / 2.0)
                        - (std::f64::consts::PI * dof).ln();
                    CanonicalDensity::StFinite { gamma: *gamma, dof: *dof, ln_c }
                }
            }
            Kind::Gh { kappa, lambda, chi, psi, table } => {
                if *chi > 0.0 && *psi > 0.0 {
                    let rate = psi + kappa * kappa;
                    let omega = (chi * psi).sqrt();
                    let k_den = bessel_k_scaled(*lambda, omega)?;
                    let ln_c = -0.5 * lambda * (chi * psi).ln() + lambda * psi.ln()
                        + (1.0 - lambda) * rate.ln()
                        - (2.0 * std::f64::consts::PI).ln()
                        - (k_den.ln() - omega);
                    CanonicalDensity::GhClosed { kappa: *kappa, lambda: *lambda, chi: *chi, rate, ln_c }
                } else {
                    CanonicalDensity::GhMixture { kappa: *kappa, table }
                }
            }
        })
    }

    fn eval(&self, x1: f64, x2: f64) -> f64 {
        let q = x1 * x1 + x2 * x2;
        match self {
            CanonicalDensity::StFinite { gamma, dof, ln_c } => {
                let t2 = (ln_c - 0.5 * (dof + 2.0) * (q / dof).ln_1p()).exp();
                let arg = gamma * x1 * ((dof + 2.0) / (q + dof)).sqrt();
                2.0 * t2 * student_t_cdf(arg, dof + 2.0).unwrap_or(0.0)
            }
            CanonicalDensity::StInf { gamma } => {
                (-0.5 * q).exp() / std::f64::consts::PI * normal_cdf(gamma * x1)
            }
            CanonicalDensity::GhClosed { kappa, lambda, chi, rate, ln_c } => {
                let arg = ((chi + q) * rate).sqrt();
                match bessel_k_scaled(lambda - 1.0, arg) {
                    Ok(k) => (ln_c + k.ln() - arg + kappa * x1 - (1.0 - lambda) * arg.ln()).exp(),
                    Err(_) => 0.0,
                }
            }
            CanonicalDensity::GhMixture { kappa, table } => table.pdf2_canonical(*kappa, x1, x2),
        }
    }
}

struct EllipseCanonical {
    center: [f64; 2],
    inv_r2: [f64; 2],
}

impl EllipseCanonical {
    fn contains(&self, x1: f64, x2: f64) -> bool {
        let d1 = x1 - self.center[0];
        let d2 = x2 - self.center[1];
        d1 * d1 * self.inv_r2[0] + d2 * d2 * self.inv_r2[1] <= 1.0
    }
}

fn misclass_pass(
    density: &CanonicalDensity,
    poly: &[[f64; 2]],
    ell: &EllipseCanonical,
    bounds: &[[f64; 2]; 2],
    n: usize,
) -> (f64, f64, f64) {
    let dx = (bounds[0][1] - bounds[0][0]) / n as f64;
    let dy = (bounds[1][1] - bounds[1][0]) / n as f64;
    let cell = dx * dy;
    let mut m1_rows = Vec::with_capacity(n);
    let mut m2_rows = Vec::with_capacity(n);
    for i in 0..n {
        let x1 = bounds[0][0] + (i as f64 + 0.5) * dx;
        let mut row1 = 0.0;
        let mut row2 = 0.0;
        for j in 0..n {
            let x2 = bounds[1][0] + (j as f64 + 0.5) * dy;
            let in_q = polygon_contains(poly, [x1, x2]);
            let in_e = ell.contains(x1, x2);
            if in_q != in_e {
                let f = density.eval(x1, x2);
                if in_q {
                    row1 += f;
                } else {
                    row2 += f;
                }
            }
        }
        m1_rows.push(row1);
        m2_rows.push(row2);
    }
    (
        quad::pairwise_sum(&m1_rows) * cell,
        quad::pairwise_sum(&m2_rows) * cell,
        cell,
    )
}

/// Misclassification probabilities of the ellipsoidal approximation of a
/// bivariate α-depth set, by cell-sum quadrature over a canonical grid.
pub fn misclassification(
    law: &MultivariateLaw,
    alpha: f64,
    grid: &GridSpec,
    opts: &DepthOptions,
) -> Result<MisclassReport> {
    if law.dim() != 2 {
        return Err(Error::domain("misclassification", "requires a bivariate law"));
    }
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(Error::domain("misclassification", format!("alpha = {alpha} not in (0, 0.5)")));
    }
    let engine = Engine::new(law, false, opts)?;
    // Membership in Q_α through a finely traced canonical polygon.
    let (poly, _traced_ok) = engine.contour_canonical(alpha, 720, false)?;
    // Canonical ellipse from the per-component quantiles.
    let mut center = [0.0; 2];
    let mut inv_r2 = [0.0; 2];
    let mut bounds = [[0.0; 2]; 2];
    for i in 0..2 {
        let coord = engine.coord_law(i)?;
        let a = coord.quantile(alpha)?;
        let b = coord.quantile(1.0 - alpha)?;
        center[i] = 0.5 * (a + b);
        let r = 0.5 * (a - b).abs();
        inv_r2[i] = 1.0 / (r * r);
        // The grid needs to cover Q ∪ Q̃ only: both sets live inside the
        // per-component [q(α), q(1−α)] box, padded a little.
        let pad = 0.02 * (b - a).abs();
        bounds[i] = [a.min(b) - pad, a.max(b) + pad];
    }
    let ell = EllipseCanonical { center, inv_r2 };
    let density = CanonicalDensity::new(&engine.kind)?;

    // Always compare against a doubled grid and report the finer values;
    // halving the cell must leave both masses within the stated tolerance.
    let mut n = grid.resolution.max(50);
    let mut coarse = misclass_pass(&density, &poly, &ell, &bounds, n);
    let (p1, p2, cell, stable);
    loop {
        let fine = misclass_pass(&density, &poly, &ell, &bounds, 2 * n);
        let ok = (fine.0 - coarse.0).abs() < grid.stability_tol
            && (fine.1 - coarse.1).abs() < grid.stability_tol;
        if ok || !grid.auto_refine || 2 * n >= grid.max_resolution {
            p1 = fine.0;
            p2 = fine.1;
            cell = fine.2;
            stable = ok;
            n *= 2;
            break;
        }
        coarse = fine;
        n *= 2;
    }
    Ok(MisclassReport {
        alpha,
        p_false_negative: p1.clamp(0.0, 1.0),
        p_false_positive: p2.clamp(0.0, 1.0),
        resolution: n,
        bounds,
        cell_area: cell,
        stable,
    })
}

/// d₂ over a grid of (skew, shape) pairs for one family, on the canonical
/// bivariate member.
pub fn d2_sweep(
    family: SweepFamily,
    skews: &[f64],
    shapes: &[f64],
    opts: &DepthOptions,
) -> Result<Vec<SweepPoint>> {
    let mut out = Vec::with_capacity(skews.len() * shapes.len());
    for &skew in skews {
        for &shape in shapes {
            let law = match family {
                SweepFamily::SkewT => {
                    MultivariateLaw::St(crate::multivariate::StParams::canonical(2, skew, shape)?)
                }
                SweepFamily::HyperbolicSkewT => MultivariateLaw::Gh(
                    crate::multivariate::GhParams::canonical_gh_skew_t(2, skew, shape)?,
                ),
                SweepFamily::Nig => {
                    MultivariateLaw::Gh(crate::multivariate::GhParams::canonical_nig(2, skew, shape)?)
                }
            };
            let d2 = crate::depth::d2(&law, opts)?;
            out.push(SweepPoint { skew, shape, d2 });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::depth::sc_contour_exact;
    use crate::multivariate::StParams;

    fn opts() -> DepthOptions {
        DepthOptions::default()
    }

    #[test]
    fn elliptical_law_gets_centered_ellipsoid() {
        let disp = DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]);
        let loc = DVector::from_column_slice(&[1.0, -0.5]);
        let law = MultivariateLaw::St(
            StParams::new(loc.clone(), disp.clone(), DVector::zeros(2), 6.0).unwrap(),
        );
        let ell = ellipsoid_approx(&law, 0.1, &opts()).unwrap();
        assert!((&ell.center - &loc).norm() < 1e-8);
        // Shape proportional to the dispersion inverse.
        let inv = disp.try_inverse().unwrap();
        let ratio = ell.shape[(0, 0)] / inv[(0, 0)];
        for i in 0..2 {
            for j in 0..2 {
                assert!(
                    (ell.shape[(i, j)] - ratio * inv[(i, j)]).abs() < 1e-8 * ratio.abs(),
                    "entry ({i}, {j})"
                );
            }
        }
    }

    #[test]
    fn skew_cauchy_ellipsoid_matches_exact_contour() {
        // The canonical depth set is a ball, so the component-quantile
        // construction reproduces it exactly.
        let st = StParams::new(
            DVector::from_column_slice(&[0.5, -1.0]),
            DMatrix::from_row_slice(2, 2, &[2.0, 0.4, 0.4, 1.0]),
            DVector::from_column_slice(&[3.0, -1.0]),
            1.0,
        )
        .unwrap();
        let alpha = 0.2;
        let exact = sc_contour_exact(&st, alpha).unwrap();
        let approx = ellipsoid_approx(&MultivariateLaw::St(st), alpha, &opts()).unwrap();
        assert!(
            (&exact.center - &approx.center).norm() < 1e-9,
            "{:?} vs {:?}",
            exact.center,
            approx.center
        );
        assert!((&exact.shape - &approx.shape).norm() < 1e-9 * exact.shape.norm());
    }

    #[test]
    fn skew_cauchy_misclassification_is_negligible() {
        let law = MultivariateLaw::St(StParams::canonical(2, 3.0, 1.0).unwrap());
        let grid = GridSpec { resolution: 400, auto_refine: false, ..GridSpec::default() };
        let report = misclassification(&law, 0.1, &grid, &opts()).unwrap();
        assert!(report.p_false_negative < 1e-4, "{report:?}");
        assert!(report.p_false_positive < 1e-4, "{report:?}");
    }

    #[test]
    fn misclassification_matches_reported_skew_normal_row() {
        // CSN₂(5) at α = 0.05: masses near 0.025 and 0.009.
        let law = MultivariateLaw::St(StParams::canonical(2, 5.0, f64::INFINITY).unwrap());
        let report = misclassification(&law, 0.05, &GridSpec::default(), &opts()).unwrap();
        assert!(
            (report.p_false_negative - 0.025).abs() < 0.005,
            "false negatives {report:?}"
        );
        assert!(
            (report.p_false_positive - 0.009).abs() < 0.004,
            "false positives {report:?}"
        );
        assert!(report.stable);
    }

    #[test]
    fn misclassification_grid_refinement_is_stable() {
        let law = MultivariateLaw::St(StParams::canonical(2, 5.0, f64::INFINITY).unwrap());
        let coarse = misclassification(
            &law,
            0.05,
            &GridSpec { resolution: 300, auto_refine: false, ..GridSpec::default() },
            &opts(),
        )
        .unwrap();
        let fine = misclassification(
            &law,
            0.05,
            &GridSpec { resolution: 600, auto_refine: false, ..GridSpec::default() },
            &opts(),
        )
        .unwrap();
        assert!((coarse.p_false_negative - fine.p_false_negative).abs() < 1e-3);
        assert!((coarse.p_false_positive - fine.p_false_positive).abs() < 1e-3);
    }

    #[test]
    fn sweep_skew_t_shrinks_toward_cauchy() {
        let points = d2_sweep(SweepFamily::SkewT, &[3.0], &[1.1, 2.0, 5.0], &opts()).unwrap();
        assert!(points[0].d2 < points[1].d2 && points[1].d2 < points[2].d2, "{points:?}");
        assert!(points[0].d2 < 5e-3, "near-Cauchy d2 {points:?}");
    }

    #[test]
    fn sweep_nig_shrinks_with_growing_psi() {
        let points = d2_sweep(SweepFamily::Nig, &[3.0], &[0.1, 1.0, 5.0], &opts()).unwrap();
        assert!(
            points[0].d2 > points[1].d2 && points[1].d2 > points[2].d2 - 1e-4,
            "{points:?}"
        );
    }

    #[test]
    fn misclassification_masses_trend_with_skewness() {
        // Stronger slant, larger false-negative mass.
        let grid = GridSpec { resolution: 300, auto_refine: false, ..GridSpec::default() };
        let mut prev = -1.0;
        for &g in &[1.0, 5.0, 20.0] {
            let law = MultivariateLaw::St(StParams::canonical(2, g, f64::INFINITY).unwrap());
            let r = misclassification(&law, 0.05, &grid, &opts()).unwrap();
            assert!(r.p_false_negative >= prev - 5e-4, "g = {g}: {r:?}");
            prev = r.p_false_negative;
        }
    }
}
