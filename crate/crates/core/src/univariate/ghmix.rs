//! Normal mean-variance mixture machinery for the generalized hyperbolic
//! family: Y = μ + Wκ + √W·σ·Z with W generalized inverse Gaussian. The
//! mixing distribution is discretized once into Kronrod nodes on a log grid,
//! after which cdf, partial moments and densities are plain sums of normal
//! quantities. This also covers the ψ = 0 boundary (hyperbolic skew-t) where
//! the closed-form density degenerates.

use crate::error::{Error, Result};
use crate::quad;
use crate::specfun::{bessel_k_scaled, ln_gamma, normal_cdf, normal_pdf, normal_sf};

/// Log of the GIG(λ, χ, ψ) density normalizing constant.
pub(crate) fn gig_ln_norm(lambda: f64, chi: f64, psi: f64) -> Result<f64> {
    if chi > 0.0 && psi > 0.0 {
        let omega = (chi * psi).sqrt();
        let k = bessel_k_scaled(lambda, omega)?;
        Ok(0.5 * lambda * (psi.ln() - chi.ln()) - (2.0f64).ln() - (k.ln() - omega))
    } else if psi == 0.0 && lambda < 0.0 && chi > 0.0 {
        // Inverse gamma with shape −λ and rate χ/2.
        let alpha = -lambda;
        Ok(alpha * (chi / 2.0).ln() - ln_gamma(alpha))
    } else if chi == 0.0 && lambda > 0.0 && psi > 0.0 {
        // Gamma with shape λ and rate ψ/2.
        Ok(lambda * (psi / 2.0).ln() - ln_gamma(lambda))
    } else {
        Err(Error::domain(
            "gig",
            format!("invalid GIG parameters lambda={lambda}, chi={chi}, psi={psi}"),
        ))
    }
}

#[inline]
pub(crate) fn gig_ln_kernel(lambda: f64, chi: f64, psi: f64, w: f64) -> f64 {
    (lambda - 1.0) * w.ln() - 0.5 * (chi / w + psi * w)
}

/// GIG density.
pub(crate) fn gig_pdf(lambda: f64, chi: f64, psi: f64, w: f64) -> Result<f64> {
    if w <= 0.0 {
        return Ok(0.0);
    }
    Ok((gig_ln_norm(lambda, chi, psi)? + gig_ln_kernel(lambda, chi, psi, w)).exp())
}

/// Mode of w·f(w), used to center the log-grid for the node table.
fn log_weighted_mode(lambda: f64, chi: f64, psi: f64) -> f64 {
    if psi > 0.0 {
        (lambda + (lambda * lambda + chi * psi).sqrt()) / psi
    } else {
        // ψ = 0 requires λ < 0.
        -chi / (2.0 * lambda)
    }
}

/// E[W] of the mixing law, when it exists.
pub(crate) fn gig_mean(lambda: f64, chi: f64, psi: f64) -> Result<f64> {
    if chi > 0.0 && psi > 0.0 {
        let omega = (chi * psi).sqrt();
        let k1 = bessel_k_scaled(lambda + 1.0, omega)?;
        let k0 = bessel_k_scaled(lambda, omega)?;
        Ok((chi / psi).sqrt() * k1 / k0)
    } else if psi == 0.0 {
        let alpha = -lambda;
        if alpha <= 1.0 {
            return Err(Error::infinite_mean(format!(
                "GIG(lambda={lambda}, chi={chi}, psi=0)"
            )));
        }
        Ok(chi / 2.0 / (alpha - 1.0))
    } else {
        Ok(2.0 * lambda / psi)
    }
}

/// True when E[W^r] is finite for the mixing law.
pub(crate) fn gig_moment_finite(lambda: f64, psi: f64, r: f64) -> bool {
    psi > 0.0 || r < -lambda
}

/// Discretized mixing distribution: Σ weight_k · g(node_k) ≈ E[g(W)].
#[derive(Debug, Clone)]
pub(crate) struct MixingTable {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// 1/√node, cached for the projection hot path.
    pub inv_sqrt: Vec<f64>,
    /// Σ weights; within 1e-10 of one for a healthy table.
    pub mass: f64,
}

impl MixingTable {
    /// Builds the node table. `poly_scale` widens the grid so that integrands
    /// growing like `poly_scale·(w + √w)` stay covered.
    pub(crate) fn build(lambda: f64, chi: f64, psi: f64, poly_scale: f64) -> Result<MixingTable> {
        let ln_norm = gig_ln_norm(lambda, chi, psi)?;
        let kern = |t: f64| gig_ln_kernel(lambda, chi, psi, t.exp()) + t;
        let growth = |t: f64| (1.0 + poly_scale.abs() * (t.exp() + (0.5 * t).exp())).ln();
        let t_star = log_weighted_mode(lambda, chi, psi).ln();
        let peak = kern(t_star);
        const NATS: f64 = 55.0;
        let mut t_lo = t_star;
        while kern(t_lo) + growth(t_lo) > peak - NATS && t_lo > t_star - 400.0 {
            t_lo -= 0.5;
        }
        let mut t_hi = t_star;
        while kern(t_hi) + growth(t_hi) > peak - NATS && t_hi < t_star + 400.0 {
            t_hi += 0.5;
        }

        let mut panels = ((t_hi - t_lo) / 0.5).ceil() as usize;
        for _ in 0..4 {
            let table = Self::fill(lambda, chi, psi, ln_norm, t_lo, t_hi, panels);
            let mass: f64 = quad::pairwise_sum(&table.weights);
            if (mass - 1.0).abs() < 1e-10 {
                return Ok(table);
            }
            panels *= 2;
        }
        Ok(Self::fill(lambda, chi, psi, ln_norm, t_lo, t_hi, panels))
    }

    fn fill(
        lambda: f64,
        chi: f64,
        psi: f64,
        ln_norm: f64,
        t_lo: f64,
        t_hi: f64,
        panels: usize,
    ) -> MixingTable {
        let mut pts = Vec::with_capacity(panels * 15);
        let h = (t_hi - t_lo) / panels as f64;
        for i in 0..panels {
            quad::gk15_panel(t_lo + i as f64 * h, t_lo + (i + 1) as f64 * h, &mut pts);
        }
        let mut nodes = Vec::with_capacity(pts.len());
        let mut weights = Vec::with_capacity(pts.len());
        for (t, wq) in pts {
            let w = t.exp();
            let density = (ln_norm + gig_ln_kernel(lambda, chi, psi, w)).exp();
            nodes.push(w);
            weights.push(wq * density * w);
        }
        let inv_sqrt = nodes.iter().map(|w| 1.0 / w.sqrt()).collect();
        let mass = quad::pairwise_sum(&weights);
        MixingTable { nodes, weights, inv_sqrt, mass }
    }

    /// Fast (F, 1 − F) of the canonical projection with drift `kappa_u`;
    /// the complement uses the table mass, which is accurate to ~1e-10.
    pub(crate) fn proj_cdf_pair(&self, kappa_u: f64, y: f64) -> (f64, f64) {
        let mut f = 0.0;
        for i in 0..self.nodes.len() {
            let z = (y - self.nodes[i] * kappa_u) * self.inv_sqrt[i];
            f += self.weights[i] * normal_cdf(z);
        }
        (f.clamp(0.0, 1.0), (self.mass - f).clamp(0.0, 1.0))
    }

    /// Fast (E[(y−Y)⁺], E[(Y−y)⁺]) of the canonical projection.
    pub(crate) fn proj_lu(&self, kappa_u: f64, y: f64) -> (f64, f64) {
        let mut l = 0.0;
        let mut u = 0.0;
        for i in 0..self.nodes.len() {
            let m = self.nodes[i] * kappa_u;
            let s = 1.0 / self.inv_sqrt[i];
            let z = (y - m) * self.inv_sqrt[i];
            let q = self.weights[i];
            let pdf_term = s * normal_pdf(z);
            l += q * ((y - m) * normal_cdf(z) + pdf_term);
            u += q * ((m - y) * normal_sf(z) + pdf_term);
        }
        (l.max(0.0), u.max(0.0))
    }

    /// (F(x), 1 − F(x)) of the mixture law with location μ, scale σ, drift κ.
    pub(crate) fn cdf_pair(&self, mu: f64, sigma: f64, kappa: f64, x: f64) -> (f64, f64) {
        let mut lo = 0.0;
        let mut hi = 0.0;
        for (w, q) in self.nodes.iter().zip(&self.weights) {
            let z = (x - mu - w * kappa) / (sigma * w.sqrt());
            lo += q * normal_cdf(z);
            hi += q * normal_sf(z);
        }
        (lo.clamp(0.0, 1.0), hi.clamp(0.0, 1.0))
    }

    /// Density of the mixture law.
    pub(crate) fn pdf(&self, mu: f64, sigma: f64, kappa: f64, x: f64) -> f64 {
        let mut f = 0.0;
        for (w, q) in self.nodes.iter().zip(&self.weights) {
            let s = sigma * w.sqrt();
            f += q * normal_pdf((x - mu - w * kappa) / s) / s;
        }
        f
    }

    /// (E[(y−Y)⁺], E[(Y−y)⁺]), each a mixture of truncated-normal moments.
    pub(crate) fn lu(&self, mu: f64, sigma: f64, kappa: f64, y: f64) -> (f64, f64) {
        let mut l = 0.0;
        let mut u = 0.0;
        for (w, q) in self.nodes.iter().zip(&self.weights) {
            let m = mu + w * kappa;
            let s = sigma * w.sqrt();
            let z = (y - m) / s;
            l += q * ((y - m) * normal_cdf(z) + s * normal_pdf(z));
            u += q * ((m - y) * normal_sf(z) + s * normal_pdf(z));
        }
        (l.max(0.0), u.max(0.0))
    }

    /// Bivariate density of the canonical mixture (location 0, dispersion I,
    /// skewness κ·e₁).
    pub(crate) fn pdf2_canonical(&self, kappa: f64, x1: f64, x2: f64) -> f64 {
        let mut f = 0.0;
        for (w, q) in self.nodes.iter().zip(&self.weights) {
            let quad_form = ((x1 - w * kappa).powi(2) + x2 * x2) / (2.0 * w);
            f += q * (-quad_form).exp() / (2.0 * std::f64::consts::PI * w);
        }
        f
    }
}

/// Log-density of the univariate GH law in closed form (requires ψ > 0).
pub(crate) fn gh_ln_pdf_closed(
    mu: f64,
    sigma2: f64,
    kappa: f64,
    lambda: f64,
    chi: f64,
    psi: f64,
    x: f64,
) -> Result<f64> {
    let sigma = sigma2.sqrt();
    let q = (x - mu) * (x - mu) / sigma2;
    let rate = psi + kappa * kappa / sigma2;
    let omega = (chi * psi).sqrt();
    let arg = ((chi + q) * rate).sqrt();
    let k_num = bessel_k_scaled(lambda - 0.5, arg)?;
    let k_den = bessel_k_scaled(lambda, omega)?;
    let ln_c = -lambda / 2.0 * (chi * psi).ln() + lambda * psi.ln() + (0.5 - lambda) * rate.ln()
        - 0.5 * (2.0 * std::f64::consts::PI).ln()
        - sigma.ln()
        - (k_den.ln() - omega);
    Ok(ln_c + (k_num.ln() - arg) + (x - mu) * kappa / sigma2 - (0.5 - lambda) * arg.ln())
}
