//! Generalized inverse Gaussian law: density, distribution function and a
//! ratio-of-uniforms sampler. Parameter constraints follow the usual
//! three-branch convention: χ>0, ψ≥0 if λ<0; χ>0, ψ>0 if λ=0; χ≥0, ψ>0
//! if λ>0.

use super::ghmix;
use crate::error::{Error, Result};
use crate::quad;
use rand::Rng;
use rand_distr::Distribution;

pub(crate) fn validate(lambda: f64, chi: f64, psi: f64) -> Result<()> {
    let ok = if lambda < 0.0 {
        chi > 0.0 && psi >= 0.0
    } else if lambda == 0.0 {
        chi > 0.0 && psi > 0.0
    } else {
        chi >= 0.0 && psi > 0.0
    };
    if ok && chi.is_finite() && psi.is_finite() && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(
            "gig",
            format!("invalid GIG parameters lambda={lambda}, chi={chi}, psi={psi}"),
        ))
    }
}

pub(crate) fn pdf(lambda: f64, chi: f64, psi: f64, w: f64) -> Result<f64> {
    validate(lambda, chi, psi)?;
    ghmix::gig_pdf(lambda, chi, psi, w)
}

/// Integration window in log-space covering all but ~e^{-55} of the mass.
fn log_support(lambda: f64, chi: f64, psi: f64) -> (f64, f64) {
    let mode = if psi > 0.0 {
        (lambda + (lambda * lambda + chi * psi).sqrt()) / psi
    } else {
        -chi / (2.0 * lambda)
    };
    let kern = |t: f64| ghmix::gig_ln_kernel(lambda, chi, psi, t.exp()) + t;
    let t_star = mode.ln();
    let peak = kern(t_star);
    let mut t_lo = t_star;
    while kern(t_lo) > peak - 55.0 && t_lo > t_star - 400.0 {
        t_lo -= 0.5;
    }
    let mut t_hi = t_star;
    while kern(t_hi) > peak - 55.0 && t_hi < t_star + 400.0 {
        t_hi += 0.5;
    }
    (t_lo, t_hi)
}

pub(crate) fn cdf(lambda: f64, chi: f64, psi: f64, x: f64) -> Result<f64> {
    validate(lambda, chi, psi)?;
    if x <= 0.0 {
        return Ok(0.0);
    }
    let ln_norm = ghmix::gig_ln_norm(lambda, chi, psi)?;
    let (t_lo, t_hi) = log_support(lambda, chi, psi);
    let t_x = x.ln();
    let dens = |t: f64| (ln_norm + ghmix::gig_ln_kernel(lambda, chi, psi, t.exp()) + t).exp();
    if t_x <= t_lo {
        return Ok(0.0);
    }
    if t_x >= t_hi {
        return Ok(1.0);
    }
    // Integrate the smaller side.
    let mid = 0.5 * (t_lo + t_hi);
    if t_x <= mid {
        Ok(quad::integrate(dens, t_lo, t_x, 1e-12).clamp(0.0, 1.0))
    } else {
        Ok((1.0 - quad::integrate(dens, t_x, t_hi, 1e-12)).clamp(0.0, 1.0))
    }
}

/// (E[(y−W)⁺], E[(W−y)⁺]); all GIG laws under the constraints above have a
/// finite mean except ψ = 0 with λ ≥ −1.
pub(crate) fn lu(lambda: f64, chi: f64, psi: f64, y: f64) -> Result<(f64, f64)> {
    let mean = ghmix::gig_mean(lambda, chi, psi)?;
    let ln_norm = ghmix::gig_ln_norm(lambda, chi, psi)?;
    let (t_lo, t_hi) = log_support(lambda, chi, psi);
    let dens = |t: f64| (ln_norm + ghmix::gig_ln_kernel(lambda, chi, psi, t.exp()) + t).exp();
    if y <= 0.0 {
        return Ok((0.0, mean - y));
    }
    let t_y = y.ln().clamp(t_lo, t_hi);
    let l = quad::integrate(|t| (y - t.exp()) * dens(t), t_lo, t_y, 1e-12).max(0.0);
    let u = (l + mean - y).max(0.0);
    Ok((l, u))
}

/// Draw one GIG variate. Boundary cases map to gamma and inverse-gamma laws;
/// the interior case uses the ratio-of-uniforms rejection scheme.
pub(crate) fn sample<R: Rng + ?Sized>(rng: &mut R, lambda: f64, chi: f64, psi: f64) -> f64 {
    if chi == 0.0 {
        let g = rand_distr::Gamma::new(lambda, 2.0 / psi).expect("validated");
        return g.sample(rng);
    }
    if psi == 0.0 {
        let g = rand_distr::Gamma::new(-lambda, 1.0).expect("validated");
        return chi / 2.0 / g.sample(rng);
    }
    // Ratio of uniforms on the unnormalized density.
    let ln_f = |w: f64| ghmix::gig_ln_kernel(lambda, chi, psi, w);
    let mode = (lambda - 1.0 + ((lambda - 1.0) * (lambda - 1.0) + chi * psi).sqrt()) / psi;
    let ln_f_mode = ln_f(mode);
    // sup of w²·f(w) sits at the shifted-order mode.
    let v_arg = (lambda + 1.0 + ((lambda + 1.0) * (lambda + 1.0) + chi * psi).sqrt()) / psi;
    let v_max = v_arg * (0.5 * (ln_f(v_arg) - ln_f_mode)).exp();
    loop {
        let u: f64 = rng.random::<f64>();
        let v: f64 = rng.random::<f64>() * v_max;
        if u <= 0.0 {
            continue;
        }
        let w = v / u;
        if 2.0 * u.ln() <= ln_f(w) - ln_f_mode {
            return w;
        }
    }
}
