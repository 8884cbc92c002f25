//! Closed forms for the standardized skew-Cauchy law (skew-t with one degree
//! of freedom). Quantiles have the explicit secant/tangent form; the cdf is
//! its algebraic inverse.

use crate::specfun::student_t_cdf;

pub(crate) fn delta(g: f64) -> f64 {
    g / (1.0 + g * g).sqrt()
}

/// Distribution function of the standardized skew-Cauchy with slant `g`.
///
/// Inverts q(p) = δ·sec θ + tan θ, θ = (p − 1/2)π: the sine and cosine of θ
/// both have stable closed forms, and atan2 keeps full accuracy in the tails
/// where the sine alone saturates.
pub(crate) fn cdf(g: f64, z: f64) -> f64 {
    let d = delta(g);
    if z.is_infinite() {
        return if z > 0.0 { 1.0 } else { 0.0 };
    }
    let root = (1.0 + z * z - d * d).sqrt();
    let denom = 1.0 + z * z;
    let s = (z * root - d) / denom;
    let c = (d * z + root) / denom;
    (0.5 + f64::atan2(s, c) / std::f64::consts::PI).clamp(0.0, 1.0)
}

/// Quantile q(p) = δ·sec((p−1/2)π) + tan((p−1/2)π).
pub(crate) fn quantile(g: f64, p: f64) -> f64 {
    let theta = (p - 0.5) * std::f64::consts::PI;
    (delta(g) + theta.sin()) / theta.cos()
}

/// Density 2·t₁(z)·T₂(g·z·√(2/(z²+1))).
pub(crate) fn pdf(g: f64, z: f64) -> f64 {
    let t1 = 1.0 / (std::f64::consts::PI * (1.0 + z * z));
    let arg = g * z * (2.0 / (z * z + 1.0)).sqrt();
    2.0 * t1 * student_t_cdf(arg, 2.0).expect("valid dof")
}
