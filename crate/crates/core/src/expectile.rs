//! Expectile depth: half-space probabilities are replaced by the transform
//! whose quantiles are expectiles, F̃(y) = E[(y−Y)⁺] / (E[(y−Y)⁺] + E[(Y−y)⁺]),
//! evaluated on one-dimensional projections. Requires laws with a finite
//! mean; the skew-Cauchy in particular is rejected.

use nalgebra::DVector;

use crate::depth::{finish_contour, ContourPolyline, DepthOptions, DepthResult, Engine, MedianResult};
use crate::error::{Error, Result};
use crate::multivariate::MultivariateLaw;

/// P̃(H_{x,u}) = F̃ of the projection law at uᵀx, for a unit direction u.
pub fn tilde_half_space_prob(law: &MultivariateLaw, x: &DVector<f64>, u: &DVector<f64>) -> Result<f64> {
    if (u.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::domain("tilde_half_space_prob", "u must be a unit vector"));
    }
    if x.len() != law.dim() || u.len() != law.dim() {
        return Err(Error::domain("tilde_half_space_prob", "dimension mismatch"));
    }
    law.project(u)?.jones_cdf(u.dot(x))
}

/// Expectile depth of `x`: the infimum of P̃ over unit directions.
pub fn ed(law: &MultivariateLaw, x: &DVector<f64>, opts: &DepthOptions) -> Result<DepthResult> {
    if x.len() != law.dim() {
        return Err(Error::domain("ed", "dimension mismatch"));
    }
    let engine = Engine::new(law, true, opts)?;
    let y = engine.to_canonical(x);
    Ok(engine.minimize(&y, true))
}

/// Maximizer of expectile depth, found on the canonical skewness axis.
pub fn ed_max(law: &MultivariateLaw, opts: &DepthOptions) -> Result<MedianResult> {
    let engine = Engine::new(law, true, opts)?;
    engine.axis_max(true)
}

/// α-contour of the expectile depth set of a bivariate law.
pub fn ed_contour(
    law: &MultivariateLaw,
    alpha: f64,
    n_vertices: usize,
    opts: &DepthOptions,
) -> Result<ContourPolyline> {
    let engine = Engine::new(law, true, opts)?;
    let (canonical, converged) = engine.contour_canonical(alpha, n_vertices, true)?;
    Ok(finish_contour(&engine.red, alpha, canonical, converged))
}

/// θ-expectile of uᵀX for any nonzero u. Positive homogeneity holds by
/// construction: the value is computed on the unit direction and scaled.
pub fn expectile_support_value(
    law: &MultivariateLaw,
    u: &DVector<f64>,
    theta: f64,
) -> Result<f64> {
    if u.len() != law.dim() {
        return Err(Error::domain("expectile_support_value", "dimension mismatch"));
    }
    let norm = u.norm();
    if !(norm > 0.0) {
        return Err(Error::domain("expectile_support_value", "u must be nonzero"));
    }
    let unit = u / norm;
    Ok(norm * law.project(&unit)?.expectile(theta)?)
}
