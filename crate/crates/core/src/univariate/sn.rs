//! Closed forms for the standardized skew-normal law with slant `a`:
//! density 2·φ(z)·Φ(a z). The cdf uses Owen's T function; left-tail partial
//! moments come from integrating by parts, which gives
//! μ(z) = mean·Φ(z·√(1+a²)) − 2·φ(z)·Φ(a z).

use crate::quad;
use crate::specfun::{normal_cdf, normal_pdf, normal_sf};

pub(crate) fn delta(a: f64) -> f64 {
    a / (1.0 + a * a).sqrt()
}

/// Owen's T function T(h, a) by quadrature of the tangent-substituted form.
pub(crate) fn owen_t(h: f64, a: f64) -> f64 {
    if a == 0.0 || h.is_infinite() {
        return 0.0;
    }
    let sign = a.signum();
    let a = a.abs();
    let hh = 0.5 * h * h;
    let theta_max = a.atan();
    let val = quad::integrate(
        |theta: f64| {
            let c = theta.cos();
            (-hh / (c * c)).exp()
        },
        0.0,
        theta_max,
        1e-14,
    );
    sign * val / (2.0 * std::f64::consts::PI)
}

/// Skew-normal distribution function F(z; a) = Φ(z) − 2T(z, a).
pub(crate) fn cdf(a: f64, z: f64) -> f64 {
    (normal_cdf(z) - 2.0 * owen_t(z, a)).clamp(0.0, 1.0)
}

/// Survival function computed from the right tail for accuracy.
pub(crate) fn sf(a: f64, z: f64) -> f64 {
    (normal_sf(z) + 2.0 * owen_t(z, a)).clamp(0.0, 1.0)
}

pub(crate) fn pdf(a: f64, z: f64) -> f64 {
    2.0 * normal_pdf(z) * normal_cdf(a * z)
}

/// Mean of the standardized skew-normal.
pub(crate) fn mean(a: f64) -> f64 {
    delta(a) * (2.0 / std::f64::consts::PI).sqrt()
}

/// Lower partial moment μ(z) = ∫_{−∞}^z s·f(s) ds.
pub(crate) fn lpm(a: f64, z: f64) -> f64 {
    mean(a) * normal_cdf(z * (1.0 + a * a).sqrt()) - 2.0 * normal_pdf(z) * normal_cdf(a * z)
}

/// (E[(z−Z)⁺], E[(Z−z)⁺]) for the standardized skew-normal.
pub(crate) fn lu(a: f64, z: f64) -> (f64, f64) {
    let s = (1.0 + a * a).sqrt();
    let two_phi = 2.0 * normal_pdf(z) * normal_cdf(a * z);
    let l = z * cdf(a, z) - mean(a) * normal_cdf(z * s) + two_phi;
    let u = mean(a) * normal_sf(z * s) + two_phi - z * sf(a, z);
    (l.max(0.0), u.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad;

    #[test]
    fn owen_t_known_values() {
        // T(h, 1) = Φ(h)·(1 − Φ(h)) / 2
        for &h in &[0.0, 0.3, 1.0, 2.5] {
            let t = owen_t(h, 1.0);
            let expected = 0.5 * normal_cdf(h) * (1.0 - normal_cdf(h));
            assert!((t - expected).abs() < 1e-14, "h = {h}: {t} vs {expected}");
        }
        // T(0, a) = atan(a) / (2π)
        let t = owen_t(0.0, 3.0);
        assert!((t - 3.0f64.atan() / (2.0 * std::f64::consts::PI)).abs() < 1e-14);
        // Odd in a, even in h.
        assert!((owen_t(0.7, -2.0) + owen_t(0.7, 2.0)).abs() < 1e-16);
        assert!((owen_t(-0.7, 2.0) - owen_t(0.7, 2.0)).abs() < 1e-16);
    }

    #[test]
    fn cdf_matches_density_quadrature() {
        for &a in &[0.0, 0.5, 3.0, -4.0, 50.0] {
            for &z in &[-2.0, -0.3, 0.0, 0.4, 1.7] {
                let direct = cdf(a, z);
                let oracle = quad::integrate(|s| pdf(a, s), -14.0, z, 1e-13);
                assert!(
                    (direct - oracle).abs() < 1e-11,
                    "a = {a}, z = {z}: {direct} vs {oracle}"
                );
            }
        }
    }

    #[test]
    fn lpm_matches_quadrature() {
        for &a in &[0.0, 3.0, -1.5] {
            for &z in &[-1.0, 0.25, 2.0] {
                let direct = lpm(a, z);
                let oracle = quad::integrate(|s| s * pdf(a, s), -16.0, z, 1e-13);
                assert!(
                    (direct - oracle).abs() < 1e-11,
                    "a = {a}, z = {z}: {direct} vs {oracle}"
                );
            }
        }
    }

    #[test]
    fn mean_is_lpm_limit() {
        let a = 3.0;
        assert!((lpm(a, 30.0) - mean(a)).abs() < 1e-14);
        assert!((mean(a) - 0.756_939_756_606_048).abs() < 1e-14);
    }

    #[test]
    fn lu_consistency() {
        // U − L = mean − z
        for &a in &[0.0, 2.0, -3.0] {
            for &z in &[-1.2, 0.0, 0.9] {
                let (l, u) = lu(a, z);
                assert!((u - l - (mean(a) - z)).abs() < 1e-12);
                assert!(l >= 0.0 && u >= 0.0);
            }
        }
    }
}
