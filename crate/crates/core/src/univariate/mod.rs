//! One-dimensional laws: skew-normal, skew-t, skew-Cauchy, generalized
//! hyperbolic (with NIG and hyperbolic skew-t special cases), Student-t,
//! normal and GIG. Each law supports density, distribution function,
//! quantile, lower partial moment, the expectile-generating transform and
//! expectiles.

pub(crate) mod ghmix;
pub(crate) mod gig;
pub(crate) mod sc;
pub(crate) mod sn;
pub(crate) mod stq;

use crate::error::{Error, Result};
use crate::specfun::{
    normal_cdf, normal_pdf, normal_quantile, normal_sf, student_t_cdf, student_t_pdf,
    student_t_quantile,
};
pub(crate) use ghmix::MixingTable;

/// A one-dimensional law, tagged by family.
#[derive(Debug, Clone, PartialEq)]
pub enum UnivariateLaw {
    Normal {
        location: f64,
        scale2: f64,
    },
    SkewNormal {
        location: f64,
        scale2: f64,
        skew: f64,
    },
    StudentT {
        location: f64,
        scale2: f64,
        dof: f64,
    },
    SkewT {
        location: f64,
        scale2: f64,
        skew: f64,
        dof: f64,
    },
    SkewCauchy {
        location: f64,
        scale2: f64,
        skew: f64,
    },
    Gh {
        location: f64,
        scale2: f64,
        skew: f64,
        lambda: f64,
        chi: f64,
        psi: f64,
    },
    Gig {
        lambda: f64,
        chi: f64,
        psi: f64,
    },
}

use UnivariateLaw::*;

fn check_scale(op: &'static str, scale2: f64) -> Result<()> {
    if scale2 > 0.0 && scale2.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(op, format!("scale2 = {scale2} must be positive")))
    }
}

impl UnivariateLaw {
    pub fn normal(location: f64, scale2: f64) -> Result<Self> {
        check_scale("normal", scale2)?;
        Ok(Normal { location, scale2 })
    }

    /// Skew-normal; `skew = 0` reduces to the normal law.
    pub fn skew_normal(location: f64, scale2: f64, skew: f64) -> Result<Self> {
        check_scale("skew_normal", scale2)?;
        if skew == 0.0 {
            return Ok(Normal { location, scale2 });
        }
        Ok(SkewNormal { location, scale2, skew })
    }

    pub fn student_t(location: f64, scale2: f64, dof: f64) -> Result<Self> {
        check_scale("student_t", scale2)?;
        if !(dof > 0.0) {
            return Err(Error::domain("student_t", format!("dof = {dof} must be positive")));
        }
        if dof.is_infinite() {
            return Ok(Normal { location, scale2 });
        }
        Ok(StudentT { location, scale2, dof })
    }

    /// Skew-t. Degenerate shapes normalize to their own families: infinite
    /// dof gives the skew-normal, one degree of freedom the skew-Cauchy and
    /// zero skewness the symmetric Student-t.
    pub fn skew_t(location: f64, scale2: f64, skew: f64, dof: f64) -> Result<Self> {
        check_scale("skew_t", scale2)?;
        if !(dof > 0.0) {
            return Err(Error::domain("skew_t", format!("dof = {dof} must be positive")));
        }
        if skew == 0.0 {
            return Self::student_t(location, scale2, dof);
        }
        if dof.is_infinite() {
            return Ok(SkewNormal { location, scale2, skew });
        }
        if dof == 1.0 {
            return Ok(SkewCauchy { location, scale2, skew });
        }
        Ok(SkewT { location, scale2, skew, dof })
    }

    pub fn skew_cauchy(location: f64, scale2: f64, skew: f64) -> Result<Self> {
        check_scale("skew_cauchy", scale2)?;
        Ok(SkewCauchy { location, scale2, skew })
    }

    pub fn gh(location: f64, scale2: f64, skew: f64, lambda: f64, chi: f64, psi: f64) -> Result<Self> {
        check_scale("gh", scale2)?;
        gig::validate(lambda, chi, psi)?;
        Ok(Gh { location, scale2, skew, lambda, chi, psi })
    }

    /// Normal-inverse-Gaussian: λ = −1/2 with the identifiability convention χ = ψ.
    pub fn nig(location: f64, scale2: f64, skew: f64, psi: f64) -> Result<Self> {
        Self::gh(location, scale2, skew, -0.5, psi, psi)
    }

    /// Hyperbolic skew-t: λ = −ν/2, χ = ν, ψ = 0.
    pub fn gh_skew_t(location: f64, scale2: f64, skew: f64, dof: f64) -> Result<Self> {
        if !(dof > 0.0 && dof.is_finite()) {
            return Err(Error::domain("gh_skew_t", format!("dof = {dof} must be positive")));
        }
        Self::gh(location, scale2, skew, -dof / 2.0, dof, 0.0)
    }

    pub fn gig(lambda: f64, chi: f64, psi: f64) -> Result<Self> {
        gig::validate(lambda, chi, psi)?;
        Ok(Gig { lambda, chi, psi })
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            Normal { .. } => "Normal",
            SkewNormal { .. } => "SN",
            StudentT { .. } => "Student-t",
            SkewT { .. } => "ST",
            SkewCauchy { .. } => "SC",
            Gh { psi, lambda, chi, .. } => {
                if *psi == 0.0 {
                    "GH-skew-t"
                } else if *lambda == -0.5 && chi == psi {
                    "NIG"
                } else {
                    "GH"
                }
            }
            Gig { .. } => "GIG",
        }
    }

    fn scale(&self) -> f64 {
        match self {
            Normal { scale2, .. }
            | SkewNormal { scale2, .. }
            | StudentT { scale2, .. }
            | SkewT { scale2, .. }
            | SkewCauchy { scale2, .. }
            | Gh { scale2, .. } => scale2.sqrt(),
            Gig { lambda, chi, psi } => ghmix::gig_mean(*lambda, *chi, *psi).unwrap_or(1.0).max(1e-3),
        }
    }

    fn center_hint(&self) -> f64 {
        match self {
            Normal { location, .. }
            | SkewNormal { location, .. }
            | StudentT { location, .. }
            | SkewT { location, .. }
            | SkewCauchy { location, .. }
            | Gh { location, .. } => *location,
            Gig { .. } => self.scale(),
        }
    }

    /// Density.
    pub fn pdf(&self, x: f64) -> Result<f64> {
        Ok(match self {
            Normal { location, scale2 } => {
                let w = scale2.sqrt();
                normal_pdf((x - location) / w) / w
            }
            SkewNormal { location, scale2, skew } => {
                let w = scale2.sqrt();
                sn::pdf(*skew, (x - location) / w) / w
            }
            StudentT { location, scale2, dof } => {
                let w = scale2.sqrt();
                student_t_pdf((x - location) / w, *dof) / w
            }
            SkewT { location, scale2, skew, dof } => {
                let w = scale2.sqrt();
                stq::StKernel::new(*skew, *dof).pdf((x - location) / w) / w
            }
            SkewCauchy { location, scale2, skew } => {
                let w = scale2.sqrt();
                sc::pdf(*skew, (x - location) / w) / w
            }
            Gh { location, scale2, skew, lambda, chi, psi } => {
                if *psi > 0.0 && *chi > 0.0 {
                    ghmix::gh_ln_pdf_closed(*location, *scale2, *skew, *lambda, *chi, *psi, x)?.exp()
                } else {
                    let table = MixingTable::build(*lambda, *chi, *psi, 0.0)?;
                    table.pdf(*location, scale2.sqrt(), *skew, x)
                }
            }
            Gig { lambda, chi, psi } => gig::pdf(*lambda, *chi, *psi, x)?,
        })
    }

    /// Distribution function.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        Ok(self.cdf_pair(x)?.0)
    }

    /// (F(x), 1 − F(x)) with each side computed from its own tail where that
    /// matters for accuracy.
    pub(crate) fn cdf_pair(&self, x: f64) -> Result<(f64, f64)> {
        Ok(match self {
            Normal { location, scale2 } => {
                let z = (x - location) / scale2.sqrt();
                (normal_cdf(z), normal_sf(z))
            }
            SkewNormal { location, scale2, skew } => {
                let z = (x - location) / scale2.sqrt();
                (sn::cdf(*skew, z), sn::sf(*skew, z))
            }
            StudentT { location, scale2, dof } => {
                let z = (x - location) / scale2.sqrt();
                let f = student_t_cdf(z, *dof)?;
                let fc = student_t_cdf(-z, *dof)?;
                (f, fc)
            }
            SkewT { location, scale2, skew, dof } => {
                let z = (x - location) / scale2.sqrt();
                stq::StKernel::new(*skew, *dof).cdf_pair(z)
            }
            SkewCauchy { location, scale2, skew } => {
                let z = (x - location) / scale2.sqrt();
                let f = sc::cdf(*skew, z);
                (f, 1.0 - f)
            }
            Gh { location, scale2, skew, lambda, chi, psi } => {
                let table = MixingTable::build(*lambda, *chi, *psi, 0.0)?;
                table.cdf_pair(*location, scale2.sqrt(), *skew, x)
            }
            Gig { lambda, chi, psi } => {
                let f = gig::cdf(*lambda, *chi, *psi, x)?;
                (f, 1.0 - f)
            }
        })
    }

    /// Quantile. Skew-Cauchy, normal and Student-t use closed forms; the rest
    /// invert the cdf by bracketed bisection with one Newton polish.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::domain("quantile", format!("p = {p} not in (0, 1)")));
        }
        match self {
            Normal { location, scale2 } => Ok(location + scale2.sqrt() * normal_quantile(p)?),
            StudentT { location, scale2, dof } => {
                Ok(location + scale2.sqrt() * student_t_quantile(p, *dof)?)
            }
            SkewCauchy { location, scale2, skew } => {
                Ok(location + scale2.sqrt() * sc::quantile(*skew, p))
            }
            _ => self.invert_cdf(p),
        }
    }

    fn invert_cdf(&self, p: f64) -> Result<f64> {
        // Reuse one prepared evaluator for the Gh family: the node table is
        // the expensive part.
        let gh_table = match self {
            Gh { lambda, chi, psi, .. } => Some(MixingTable::build(*lambda, *chi, *psi, 0.0)?),
            _ => None,
        };
        let cdf_at = |x: f64| -> Result<f64> {
            match (self, &gh_table) {
                (Gh { location, scale2, skew, .. }, Some(t)) => {
                    Ok(t.cdf_pair(*location, scale2.sqrt(), *skew, x).0)
                }
                _ => self.cdf(x),
            }
        };
        let mut lo = self.center_hint();
        let mut hi = lo;
        let mut step = self.scale();
        for _ in 0..200 {
            if cdf_at(lo)? <= p {
                break;
            }
            lo -= step;
            step *= 2.0;
        }
        step = self.scale();
        for _ in 0..200 {
            if cdf_at(hi)? >= p {
                break;
            }
            hi += step;
            step *= 2.0;
        }
        if matches!(self, Gig { .. }) {
            lo = lo.max(0.0);
        }
        for _ in 0..120 {
            let mid = 0.5 * (lo + hi);
            if cdf_at(mid)? < p {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-10 * (1.0 + mid.abs()) {
                break;
            }
        }
        let mut x = 0.5 * (lo + hi);
        let density = self.pdf(x)?;
        if density > 1e-12 {
            let err = cdf_at(x)? - p;
            let step = err / density;
            if step.abs() < self.scale() {
                x -= step;
            }
        }
        Ok(x)
    }

    /// Mean, when it exists. The exact finiteness conditions: skew-t needs
    /// ν > 1; the ψ = 0 hyperbolic boundary needs ν > 2 when skewed (the
    /// mixture mean E[W] must exist) and ν > 1 when symmetric (only E[√W]
    /// enters).
    pub fn mean(&self) -> Result<f64> {
        match self {
            Normal { location, .. } => Ok(*location),
            SkewNormal { location, scale2, skew } => {
                Ok(location + scale2.sqrt() * sn::mean(*skew))
            }
            StudentT { location, scale2: _, dof } => {
                if *dof > 1.0 {
                    Ok(*location)
                } else {
                    Err(Error::infinite_mean(format!("Student-t with dof = {dof}")))
                }
            }
            SkewT { location, scale2, skew, dof } => {
                if *dof > 1.0 {
                    Ok(location + scale2.sqrt() * stq::StKernel::new(*skew, *dof).mean())
                } else {
                    Err(Error::infinite_mean(format!("ST with dof = {dof}")))
                }
            }
            SkewCauchy { .. } => Err(Error::infinite_mean("SC (skew-Cauchy)".to_string())),
            Gh { location, scale2: _, skew, lambda, chi, psi } => {
                self.check_gh_mean(*skew, *lambda, *psi)?;
                if *skew == 0.0 {
                    Ok(*location)
                } else {
                    Ok(location + skew * ghmix::gig_mean(*lambda, *chi, *psi)?)
                }
            }
            Gig { lambda, chi, psi } => ghmix::gig_mean(*lambda, *chi, *psi),
        }
    }

    fn check_gh_mean(&self, skew: f64, lambda: f64, psi: f64) -> Result<()> {
        let needed = if skew == 0.0 { 0.5 } else { 1.0 };
        if ghmix::gig_moment_finite(lambda, psi, needed) {
            Ok(())
        } else {
            Err(Error::infinite_mean(format!(
                "{} with lambda = {lambda}, psi = {psi}, skew = {skew}",
                self.family_name()
            )))
        }
    }

    /// (E[(y−Y)⁺], E[(Y−y)⁺]); requires a finite mean.
    pub(crate) fn lu(&self, y: f64) -> Result<(f64, f64)> {
        match self {
            Normal { location, scale2 } => {
                let w = scale2.sqrt();
                let z = (y - location) / w;
                let l = w * (z * normal_cdf(z) + normal_pdf(z));
                let u = w * (normal_pdf(z) - z * normal_sf(z));
                Ok((l.max(0.0), u.max(0.0)))
            }
            SkewNormal { location, scale2, skew } => {
                let w = scale2.sqrt();
                let (l, u) = sn::lu(*skew, (y - location) / w);
                Ok((w * l, w * u))
            }
            StudentT { location, scale2, dof } => {
                if !(*dof > 1.0) {
                    return Err(Error::infinite_mean(format!("Student-t with dof = {dof}")));
                }
                let w = scale2.sqrt();
                let z = (y - location) / w;
                let tail = student_t_pdf(z, *dof) * (dof + z * z) / (dof - 1.0);
                let l = z * student_t_cdf(z, *dof)? + tail;
                let u = tail - z * student_t_cdf(-z, *dof)?;
                Ok(((w * l).max(0.0), (w * u).max(0.0)))
            }
            SkewT { location, scale2, skew, dof } => {
                if !(*dof > 1.0) {
                    return Err(Error::infinite_mean(format!("ST with dof = {dof}")));
                }
                let w = scale2.sqrt();
                let (l, u) = stq::StKernel::new(*skew, *dof).lu((y - location) / w);
                Ok((w * l, w * u))
            }
            SkewCauchy { .. } => Err(Error::infinite_mean("SC (skew-Cauchy)".to_string())),
            Gh { location, scale2, skew, lambda, chi, psi } => {
                self.check_gh_mean(*skew, *lambda, *psi)?;
                let sigma = scale2.sqrt();
                let table = MixingTable::build(*lambda, *chi, *psi, skew.abs() + sigma)?;
                Ok(table.lu(*location, sigma, *skew, y))
            }
            Gig { lambda, chi, psi } => gig::lu(*lambda, *chi, *psi, y),
        }
    }

    /// Lower partial moment μ(y) = ∫_{−∞}^y x dF(x).
    pub fn lower_partial_moment(&self, y: f64) -> Result<f64> {
        if let SkewNormal { location, scale2, skew } = self {
            let w = scale2.sqrt();
            let z = (y - location) / w;
            return Ok(location * sn::cdf(*skew, z) + w * sn::lpm(*skew, z));
        }
        let (l, _) = self.lu(y)?;
        Ok(y * self.cdf(y)? - l)
    }

    /// The transform whose quantiles are the expectiles:
    /// F̃(y) = E[(y−Y)⁺] / (E[(y−Y)⁺] + E[(Y−y)⁺]).
    pub fn jones_cdf(&self, y: f64) -> Result<f64> {
        let (l, u) = self.lu(y)?;
        Ok((l / (l + u)).clamp(0.0, 1.0))
    }

    /// θ-expectile: the root of θ·E[(Y−y)⁺] = (1−θ)·E[(Y−y)⁻], found by
    /// bisection on the strictly decreasing residual.
    pub fn expectile(&self, theta: f64) -> Result<f64> {
        if !(theta > 0.0 && theta < 1.0) {
            return Err(Error::domain("expectile", format!("theta = {theta} not in (0, 1)")));
        }
        let mean = self.mean()?;
        let residual = |y: f64| -> Result<f64> {
            let (l, u) = self.lu(y)?;
            Ok(theta * u - (1.0 - theta) * l)
        };
        let scale = self.scale();
        let mut lo = mean - scale;
        let mut step = scale;
        for _ in 0..200 {
            if residual(lo)? > 0.0 {
                break;
            }
            lo -= step;
            step *= 2.0;
        }
        let mut hi = mean + scale;
        step = scale;
        for _ in 0..200 {
            if residual(hi)? < 0.0 {
                break;
            }
            hi += step;
            step *= 2.0;
        }
        for _ in 0..120 {
            let mid = 0.5 * (lo + hi);
            if residual(mid)? > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-13 * (1.0 + mid.abs()) {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}
