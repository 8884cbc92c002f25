//! Quadrature kernels for the standardized skew-t law with slant `g` and
//! `nu` degrees of freedom. The substitution z = √ν·tan θ compactifies the
//! real line onto (−π/2, π/2):
//!   f(z) dz = 2·c_ν·√ν·cos^{ν−1}θ · T(g·√(ν+1)·sin θ; ν+1) dθ
//! so tails never need truncation heuristics.

use crate::quad;
use crate::specfun::{ln_gamma, student_t_cdf, student_t_pdf};

const FRAC_PI_2: f64 = std::f64::consts::FRAC_PI_2;

#[derive(Clone, Copy)]
pub(crate) struct StKernel {
    pub g: f64,
    pub nu: f64,
    /// 2·c_ν·√ν with c_ν the Student-t normalizing constant.
    weight: f64,
}

impl StKernel {
    pub(crate) fn new(g: f64, nu: f64) -> Self {
        let ln_c = ln_gamma((nu + 1.0) / 2.0) - ln_gamma(nu / 2.0)
            - 0.5 * (nu * std::f64::consts::PI).ln();
        StKernel {
            g,
            nu,
            weight: 2.0 * ln_c.exp() * nu.sqrt(),
        }
    }

    #[inline]
    fn theta_of(&self, z: f64) -> f64 {
        (z / self.nu.sqrt()).atan()
    }

    #[inline]
    fn z_of(&self, theta: f64) -> f64 {
        self.nu.sqrt() * theta.tan()
    }

    /// Transformed density: f(z(θ))·dz/dθ.
    #[inline]
    fn density_theta(&self, theta: f64) -> f64 {
        let c = theta.cos();
        if c <= 0.0 {
            return 0.0;
        }
        let skew_cdf = student_t_cdf(self.g * (self.nu + 1.0).sqrt() * theta.sin(), self.nu + 1.0)
            .expect("dof > 1");
        self.weight * c.powf(self.nu - 1.0) * skew_cdf
    }

    /// Breakpoints keeping the adaptive rule anchored on the density bulk and
    /// on the slant transition at θ = 0.
    fn splits(&self) -> [f64; 7] {
        let t = |z: f64| self.theta_of(z);
        [t(-30.0), t(-10.0), t(-3.0), 0.0, t(3.0), t(10.0), t(30.0)]
    }

    /// (F(z), 1 − F(z)) with the smaller side integrated directly.
    pub(crate) fn cdf_pair(&self, z: f64) -> (f64, f64) {
        let theta = self.theta_of(z);
        if theta <= 0.0 {
            let f = quad::integrate_split(
                |t| self.density_theta(t),
                -FRAC_PI_2,
                theta,
                &self.splits(),
                1e-11,
            )
            .clamp(0.0, 1.0);
            (f, 1.0 - f)
        } else {
            let fc = quad::integrate_split(
                |t| self.density_theta(t),
                theta,
                FRAC_PI_2,
                &self.splits(),
                1e-11,
            )
            .clamp(0.0, 1.0);
            (1.0 - fc, fc)
        }
    }

    /// Density at z.
    pub(crate) fn pdf(&self, z: f64) -> f64 {
        let q = z * z;
        let arg = self.g * z * ((self.nu + 1.0) / (q + self.nu)).sqrt();
        2.0 * student_t_pdf(z, self.nu) * student_t_cdf(arg, self.nu + 1.0).expect("dof > 1")
    }

    /// (E[(y−Z)⁺], E[(Z−y)⁺]); requires nu > 1.
    pub(crate) fn lu(&self, y: f64) -> (f64, f64) {
        let theta_y = self.theta_of(y);
        let splits = self.splits();
        let l = quad::integrate_split(
            |t| (y - self.z_of(t)) * self.density_theta(t),
            -FRAC_PI_2,
            theta_y,
            &splits,
            1e-10,
        );
        let u = quad::integrate_split(
            |t| (self.z_of(t) - y) * self.density_theta(t),
            theta_y,
            FRAC_PI_2,
            &splits,
            1e-10,
        );
        (l.max(0.0), u.max(0.0))
    }

    /// Mean δ(g)·b_ν; requires nu > 1.
    pub(crate) fn mean(&self) -> f64 {
        let b = (self.nu / std::f64::consts::PI).sqrt()
            * (ln_gamma((self.nu - 1.0) / 2.0) - ln_gamma(self.nu / 2.0)).exp();
        super::sn::delta(self.g) * b
    }
}
