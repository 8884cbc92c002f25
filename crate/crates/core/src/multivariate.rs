//! Multivariate skew-t and generalized hyperbolic laws: densities, linear
//! forms, canonical-form reductions, one-dimensional projections and
//! samplers.
//!
//! The canonical form concentrates all skewness in the first coordinate:
//! a lower-Cholesky factor B of the dispersion matrix and an orthonormal
//! completion P of a mandated first column give the affine map
//! x* = Pᵀ B⁻¹ (x − location).

use nalgebra::{DMatrix, DVector};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::specfun::{bessel_k_scaled, ln_gamma, normal_cdf, student_t_cdf};
use crate::univariate::{ghmix, gig, UnivariateLaw};

/// Parameters of the d-dimensional skew-t law: location ξ, dispersion Ω,
/// skewness vector γ and degrees of freedom ν. An infinite `dof` gives the
/// skew-normal member of the family.
#[derive(Debug, Clone, PartialEq)]
pub struct StParams {
    pub location: DVector<f64>,
    pub dispersion: DMatrix<f64>,
    pub skewness: DVector<f64>,
    pub dof: f64,
}

/// Parameters of the d-dimensional generalized hyperbolic law: location μ,
/// dispersion Σ, skewness κ and GIG mixing parameters (λ, χ, ψ).
#[derive(Debug, Clone, PartialEq)]
pub struct GhParams {
    pub location: DVector<f64>,
    pub dispersion: DMatrix<f64>,
    pub skewness: DVector<f64>,
    pub lambda: f64,
    pub chi: f64,
    pub psi: f64,
}

/// A law from either family, as consumed by the depth machinery.
#[derive(Debug, Clone, PartialEq)]
pub enum MultivariateLaw {
    St(StParams),
    Gh(GhParams),
}

/// The affine reduction x* = A·x + b carrying a law to canonical form,
/// together with the canonical scalar skewness.
#[derive(Debug, Clone)]
pub struct CanonicalReduction {
    /// Forward map matrix A = PᵀB⁻¹.
    pub a: DMatrix<f64>,
    /// Forward offset b = −A·location.
    pub b: DVector<f64>,
    /// Cached inverse A⁻¹ = B·P.
    pub a_inv: DMatrix<f64>,
    /// γ* = (γᵀ Ω̄ γ)^{1/2} for skew-t, κ* = (κᵀ Σ⁻¹ κ)^{1/2} for GH.
    pub canonical_skew: f64,
}

impl CanonicalReduction {
    pub fn to_canonical(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.a * x + &self.b
    }

    pub fn from_canonical(&self, y: &DVector<f64>) -> DVector<f64> {
        &self.a_inv * (y - &self.b)
    }
}

fn check_dims(
    op: &'static str,
    location: &DVector<f64>,
    dispersion: &DMatrix<f64>,
    skewness: &DVector<f64>,
) -> Result<usize> {
    let d = location.len();
    if d == 0 {
        return Err(Error::domain(op, "dimension must be at least 1"));
    }
    if dispersion.nrows() != d || dispersion.ncols() != d {
        return Err(Error::domain(
            op,
            format!(
                "dispersion is {}x{}, expected {d}x{d}",
                dispersion.nrows(),
                dispersion.ncols()
            ),
        ));
    }
    if skewness.len() != d {
        return Err(Error::domain(
            op,
            format!("skewness has length {}, expected {d}", skewness.len()),
        ));
    }
    if location.iter().any(|v| !v.is_finite())
        || dispersion.iter().any(|v| !v.is_finite())
        || skewness.iter().any(|v| !v.is_finite())
    {
        return Err(Error::domain(op, "parameters must be finite"));
    }
    Ok(d)
}

fn cholesky_lower(op: &'static str, m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let sym_err = (m - m.transpose()).amax();
    if sym_err > 1e-10 * (1.0 + m.amax()) {
        return Err(Error::domain(op, "dispersion matrix is not symmetric"));
    }
    let l = nalgebra::Cholesky::new(m.clone())
        .map(|c| c.l())
        .ok_or_else(|| Error::domain(op, "dispersion matrix is not positive-definite"))?;
    // nalgebra accepts exactly singular matrices (zero or NaN pivots);
    // reject anything without a healthy positive pivot everywhere.
    let mut dmax = 0.0f64;
    for v in l.diagonal().iter() {
        if !v.is_finite() || *v <= 0.0 {
            return Err(Error::domain(
                op,
                "dispersion matrix is not positive-definite (numerically singular)",
            ));
        }
        dmax = dmax.max(*v);
    }
    // Pivots scale like the square root of the eigenvalues, so an
    // eps-level-singular matrix shows up as a pivot near √eps · dmax.
    if l.diagonal().iter().any(|v| *v <= 1e-7 * dmax) {
        return Err(Error::domain(
            op,
            "dispersion matrix is not positive-definite (numerically singular)",
        ));
    }
    Ok(l)
}

/// Orthonormal matrix whose first column is `first` (unit), completed by a
/// Householder reflection; the identity when no direction is mandated.
fn orthonormal_completion(first: Option<&DVector<f64>>, d: usize) -> DMatrix<f64> {
    match first {
        None => DMatrix::identity(d, d),
        Some(p1) => {
            let mut v = p1.clone();
            v[0] -= 1.0;
            let norm2 = v.norm_squared();
            if norm2 < 1e-28 {
                return DMatrix::identity(d, d);
            }
            DMatrix::identity(d, d) - (&v * v.transpose()) * (2.0 / norm2)
        }
    }
}

impl StParams {
    pub fn new(
        location: DVector<f64>,
        dispersion: DMatrix<f64>,
        skewness: DVector<f64>,
        dof: f64,
    ) -> Result<Self> {
        check_dims("st_params", &location, &dispersion, &skewness)?;
        if !(dof > 0.0) {
            return Err(Error::domain("st_params", format!("dof = {dof} must be positive")));
        }
        cholesky_lower("st_params", &dispersion)?;
        Ok(StParams { location, dispersion, skewness, dof })
    }

    /// Canonical skew-t: location 0, dispersion I, skewness γ·e₁.
    pub fn canonical(dim: usize, gamma: f64, dof: f64) -> Result<Self> {
        let mut skew = DVector::zeros(dim);
        skew[0] = gamma;
        StParams::new(DVector::zeros(dim), DMatrix::identity(dim, dim), skew, dof)
    }

    pub fn dim(&self) -> usize {
        self.location.len()
    }

    fn omega_diag(&self) -> DVector<f64> {
        self.dispersion.diagonal().map(f64::sqrt)
    }

    /// Correlation-scaled dispersion Ω̄ = ω⁻¹ Ω ω⁻¹.
    fn dispersion_bar(&self) -> DMatrix<f64> {
        let w = self.omega_diag();
        DMatrix::from_fn(self.dim(), self.dim(), |i, j| {
            self.dispersion[(i, j)] / (w[i] * w[j])
        })
    }

    /// Density (skew-normal when dof is infinite).
    pub fn pdf(&self, x: &DVector<f64>) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::domain("st_pdf", "dimension mismatch"));
        }
        let d = self.dim() as f64;
        let chol = cholesky_lower("st_pdf", &self.dispersion)?;
        let diff = x - &self.location;
        let half = chol
            .solve_lower_triangular(&diff)
            .ok_or_else(|| Error::domain("st_pdf", "singular Cholesky factor"))?;
        let q = half.norm_squared();
        let ln_det_sqrt: f64 = chol.diagonal().iter().map(|v| v.ln()).sum();
        let w = self.omega_diag();
        let slant: f64 = (0..self.dim())
            .map(|i| self.skewness[i] * diff[i] / w[i])
            .sum();
        if self.dof.is_finite() {
            let nu = self.dof;
            let ln_t = ln_gamma((nu + d) / 2.0)
                - ln_gamma(nu / 2.0)
                - 0.5 * d * (std::f64::consts::PI * nu).ln()
                - ln_det_sqrt
                - 0.5 * (nu + d) * (q / nu).ln_1p();
            let arg = slant * ((nu + d) / (q + nu)).sqrt();
            Ok(2.0 * ln_t.exp() * student_t_cdf(arg, nu + d)?)
        } else {
            let ln_n = -0.5 * d * (2.0 * std::f64::consts::PI).ln() - ln_det_sqrt - 0.5 * q;
            Ok(2.0 * ln_n.exp() * normal_cdf(slant))
        }
    }

    /// Linear form Y = A·X + b for full-rank A (k×d, k ≤ d).
    pub fn linear_form(&self, a: &DMatrix<f64>, b: &DVector<f64>) -> Result<StParams> {
        let (k, d) = (a.nrows(), a.ncols());
        if d != self.dim() || b.len() != k || k == 0 || k > d {
            return Err(Error::domain("st_linear_form", "shape mismatch"));
        }
        let location = a * &self.location + b;
        let dispersion = a * &self.dispersion * a.transpose();
        let chol_y = cholesky_lower("st_linear_form", &dispersion)
            .map_err(|_| Error::domain("st_linear_form", "transformation matrix is rank-deficient"))?;
        let w = self.omega_diag();
        // C = ω⁻¹ Ω Aᵀ
        let c = DMatrix::from_fn(d, k, |i, j| {
            (0..d).map(|m| self.dispersion[(i, m)] * a[(j, m)]).sum::<f64>() / w[i]
        });
        let ct_gamma = c.transpose() * &self.skewness;
        // Ω_Y⁻¹ (Cᵀ γ) through the Cholesky factor of Ω_Y.
        let mut solved = ct_gamma.clone();
        chol_y.solve_lower_triangular_mut(&mut solved);
        chol_y.transpose().solve_upper_triangular_mut(&mut solved);
        let omega_y = dispersion.diagonal().map(f64::sqrt);
        let numerator = DVector::from_fn(k, |i, _| omega_y[i] * solved[i]);
        let bar = self.dispersion_bar();
        let quad_full: f64 = (self.skewness.transpose() * &bar * &self.skewness)[(0, 0)];
        let c_solved: f64 = ct_gamma.dot(&solved);
        let denom = (1.0 + quad_full - c_solved).max(0.0).sqrt();
        let skewness = numerator / denom;
        StParams::new(location, dispersion, skewness, self.dof)
    }

    /// Canonical reduction per the lower-Cholesky / Householder convention.
    pub fn canonicalize(&self) -> Result<CanonicalReduction> {
        let chol = cholesky_lower("canonicalize_st", &self.dispersion)?;
        let w = self.omega_diag();
        let bar = self.dispersion_bar();
        let quad: f64 = (self.skewness.transpose() * &bar * &self.skewness)[(0, 0)];
        let skew = quad.max(0.0).sqrt();
        let p = if skew > 1e-14 {
            let scaled = DVector::from_fn(self.dim(), |i, _| self.skewness[i] / w[i]);
            let first = (chol.transpose() * scaled) / skew;
            orthonormal_completion(Some(&first), self.dim())
        } else {
            orthonormal_completion(None, self.dim())
        };
        let b_inv = chol
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::domain("canonicalize_st", "singular Cholesky factor"))?;
        let a = p.transpose() * b_inv;
        let a_inv = chol * p;
        let b = -(&a * &self.location);
        Ok(CanonicalReduction { a, b, a_inv, canonical_skew: skew })
    }

    /// One-dimensional law of uᵀX, exact from the linear-form rules.
    pub fn project(&self, u: &DVector<f64>) -> Result<UnivariateLaw> {
        let a = DMatrix::from_fn(1, self.dim(), |_, j| u[j]);
        let reduced = self.linear_form(&a, &DVector::zeros(1))?;
        reduced.as_univariate()
    }

    /// View a one-dimensional parameter set as a univariate law.
    pub fn as_univariate(&self) -> Result<UnivariateLaw> {
        if self.dim() != 1 {
            return Err(Error::domain("as_univariate", "dimension must be 1"));
        }
        UnivariateLaw::skew_t(
            self.location[0],
            self.dispersion[(0, 0)],
            self.skewness[0],
            self.dof,
        )
    }

    /// Draws via the hidden-truncation skew-normal representation divided by
    /// an independent √(χ²_ν / ν); rows are observations.
    pub fn sample(&self, n: usize, seed: u64) -> Result<DMatrix<f64>> {
        use rand::SeedableRng;
        let d = self.dim();
        let bar = self.dispersion_bar();
        let quad: f64 = (self.skewness.transpose() * &bar * &self.skewness)[(0, 0)];
        let delta = (&bar * &self.skewness) / (1.0 + quad).sqrt();
        // Z | Z0 = z0 is normal with mean δ·z0 and covariance Ω̄ − δδᵀ.
        let resid = DMatrix::from_fn(d, d, |i, j| bar[(i, j)] - delta[i] * delta[j]);
        let resid_l = nalgebra::Cholesky::new(resid.clone())
            .or_else(|| {
                // Near-singular residual for extreme slants: nudge the diagonal.
                nalgebra::Cholesky::new(resid + DMatrix::identity(d, d) * 1e-12)
            })
            .map(|c| c.l())
            .ok_or_else(|| Error::domain("sample_st", "slant too extreme for the sampler"))?;
        let w = self.omega_diag();
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let mut out = DMatrix::zeros(n, d);
        let chi2 = if self.dof.is_finite() {
            Some(
                rand_distr::ChiSquared::new(self.dof)
                    .map_err(|e| Error::domain("sample_st", e.to_string()))?,
            )
        } else {
            None
        };
        for row in 0..n {
            let z0: f64 = StandardNormal.sample(&mut rng);
            let raw: DVector<f64> = DVector::from_fn(d, |_, _| StandardNormal.sample(&mut rng));
            let z = &delta * z0 + &resid_l * raw;
            let sn = if z0 > 0.0 { z } else { -z };
            let scale_mix = match &chi2 {
                Some(c) => (c.sample(&mut rng) / self.dof).sqrt(),
                None => 1.0,
            };
            for j in 0..d {
                out[(row, j)] = self.location[j] + w[j] * sn[j] / scale_mix;
            }
        }
        Ok(out)
    }
}

impl GhParams {
    pub fn new(
        location: DVector<f64>,
        dispersion: DMatrix<f64>,
        skewness: DVector<f64>,
        lambda: f64,
        chi: f64,
        psi: f64,
    ) -> Result<Self> {
        check_dims("gh_params", &location, &dispersion, &skewness)?;
        gig::validate(lambda, chi, psi)?;
        cholesky_lower("gh_params", &dispersion)?;
        Ok(GhParams { location, dispersion, skewness, lambda, chi, psi })
    }

    /// Normal-inverse-Gaussian member: λ = −1/2, χ = ψ.
    pub fn nig(
        location: DVector<f64>,
        dispersion: DMatrix<f64>,
        skewness: DVector<f64>,
        psi: f64,
    ) -> Result<Self> {
        GhParams::new(location, dispersion, skewness, -0.5, psi, psi)
    }

    /// Hyperbolic skew-t member: λ = −ν/2, χ = ν, ψ = 0.
    pub fn gh_skew_t(
        location: DVector<f64>,
        dispersion: DMatrix<f64>,
        skewness: DVector<f64>,
        dof: f64,
    ) -> Result<Self> {
        if !(dof > 0.0 && dof.is_finite()) {
            return Err(Error::domain("gh_skew_t", format!("dof = {dof} must be positive")));
        }
        GhParams::new(location, dispersion, skewness, -dof / 2.0, dof, 0.0)
    }

    /// Canonical GH: location 0, dispersion I, skewness κ·e₁.
    pub fn canonical(dim: usize, kappa: f64, lambda: f64, chi: f64, psi: f64) -> Result<Self> {
        let mut skew = DVector::zeros(dim);
        skew[0] = kappa;
        GhParams::new(DVector::zeros(dim), DMatrix::identity(dim, dim), skew, lambda, chi, psi)
    }

    pub fn canonical_nig(dim: usize, kappa: f64, psi: f64) -> Result<Self> {
        Self::canonical(dim, kappa, -0.5, psi, psi)
    }

    pub fn canonical_gh_skew_t(dim: usize, kappa: f64, dof: f64) -> Result<Self> {
        Self::canonical(dim, kappa, -dof / 2.0, dof, 0.0)
    }

    pub fn dim(&self) -> usize {
        self.location.len()
    }

    /// Rescale by a > 0 using the identifiability freedom
    /// (μ, aΣ, aκ, λ, χ/a, aψ) ~ (μ, Σ, κ, λ, χ, ψ).
    pub fn rescaled(&self, a: f64) -> Result<GhParams> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::domain("gh_rescale", "factor must be positive"));
        }
        GhParams::new(
            self.location.clone(),
            &self.dispersion * a,
            &self.skewness * a,
            self.lambda,
            self.chi / a,
            self.psi * a,
        )
    }

    /// Density. The closed Bessel form needs χ, ψ > 0; on the ψ = 0 boundary
    /// (hyperbolic skew-t) and at χ = 0 the mixture quadrature is used.
    pub fn pdf(&self, x: &DVector<f64>) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::domain("gh_pdf", "dimension mismatch"));
        }
        if self.chi > 0.0 && self.psi > 0.0 {
            self.pdf_closed(x)
        } else {
            let table = ghmix::MixingTable::build(self.lambda, self.chi, self.psi, 0.0)?;
            self.pdf_mixture(&table, x)
        }
    }

    fn prepared_chol(&self, op: &'static str) -> Result<(DMatrix<f64>, f64)> {
        let chol = cholesky_lower(op, &self.dispersion)?;
        let ln_det_sqrt: f64 = chol.diagonal().iter().map(|v| v.ln()).sum();
        Ok((chol, ln_det_sqrt))
    }

    fn pdf_closed(&self, x: &DVector<f64>) -> Result<f64> {
        let d = self.dim() as f64;
        let (chol, ln_det_sqrt) = self.prepared_chol("gh_pdf")?;
        let diff = x - &self.location;
        let half = chol
            .solve_lower_triangular(&diff)
            .ok_or_else(|| Error::domain("gh_pdf", "singular factor"))?;
        let q = half.norm_squared();
        let half_k = chol
            .solve_lower_triangular(&self.skewness)
            .ok_or_else(|| Error::domain("gh_pdf", "singular factor"))?;
        let rate = self.psi + half_k.norm_squared();
        let drift = half.dot(&half_k);
        let omega = (self.chi * self.psi).sqrt();
        let arg = ((self.chi + q) * rate).sqrt();
        let order = self.lambda - d / 2.0;
        let k_num = bessel_k_scaled(order, arg)?;
        let k_den = bessel_k_scaled(self.lambda, omega)?;
        let ln_c = -0.5 * self.lambda * (self.chi * self.psi).ln()
            + self.lambda * self.psi.ln()
            + (d / 2.0 - self.lambda) * rate.ln()
            - 0.5 * d * (2.0 * std::f64::consts::PI).ln()
            - ln_det_sqrt
            - (k_den.ln() - omega);
        Ok((ln_c + k_num.ln() - arg + drift - (d / 2.0 - self.lambda) * arg.ln()).exp())
    }

    pub(crate) fn pdf_mixture(&self, table: &ghmix::MixingTable, x: &DVector<f64>) -> Result<f64> {
        let d = self.dim() as f64;
        let (chol, ln_det_sqrt) = self.prepared_chol("gh_pdf")?;
        let diff = x - &self.location;
        let half_x = chol
            .solve_lower_triangular(&diff)
            .ok_or_else(|| Error::domain("gh_pdf", "singular factor"))?;
        let half_k = chol
            .solve_lower_triangular(&self.skewness)
            .ok_or_else(|| Error::domain("gh_pdf", "singular factor"))?;
        let ln_norm = -0.5 * d * (2.0 * std::f64::consts::PI).ln() - ln_det_sqrt;
        let mut f = 0.0;
        for (w, qw) in table.nodes.iter().zip(&table.weights) {
            let mut quad_form = 0.0;
            for i in 0..half_x.len() {
                let r = half_x[i] - w * half_k[i];
                quad_form += r * r;
            }
            f += qw * (ln_norm - 0.5 * d * w.ln() - quad_form / (2.0 * w)).exp();
        }
        Ok(f)
    }

    /// Linear form Y = A·X + b: (Aμ + b, AΣAᵀ, Aκ) with mixing unchanged.
    pub fn linear_form(&self, a: &DMatrix<f64>, b: &DVector<f64>) -> Result<GhParams> {
        let (k, d) = (a.nrows(), a.ncols());
        if d != self.dim() || b.len() != k || k == 0 || k > d {
            return Err(Error::domain("gh_linear_form", "shape mismatch"));
        }
        let dispersion = a * &self.dispersion * a.transpose();
        cholesky_lower("gh_linear_form", &dispersion)
            .map_err(|_| Error::domain("gh_linear_form", "transformation matrix is rank-deficient"))?;
        GhParams::new(
            a * &self.location + b,
            dispersion,
            a * &self.skewness,
            self.lambda,
            self.chi,
            self.psi,
        )
    }

    /// Canonical reduction with κ* = (κᵀ Σ⁻¹ κ)^{1/2}.
    pub fn canonicalize(&self) -> Result<CanonicalReduction> {
        let chol = cholesky_lower("canonicalize_gh", &self.dispersion)?;
        let half_k = chol
            .solve_lower_triangular(&self.skewness)
            .ok_or_else(|| Error::domain("canonicalize_gh", "singular Cholesky factor"))?;
        let skew = half_k.norm();
        let p = if skew > 1e-14 {
            let first = &half_k / skew;
            orthonormal_completion(Some(&first), self.dim())
        } else {
            orthonormal_completion(None, self.dim())
        };
        let b_inv = chol
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::domain("canonicalize_gh", "singular Cholesky factor"))?;
        let a = p.transpose() * b_inv;
        let a_inv = chol * p;
        let b = -(&a * &self.location);
        Ok(CanonicalReduction { a, b, a_inv, canonical_skew: skew })
    }

    pub fn project(&self, u: &DVector<f64>) -> Result<UnivariateLaw> {
        let a = DMatrix::from_fn(1, self.dim(), |_, j| u[j]);
        let reduced = self.linear_form(&a, &DVector::zeros(1))?;
        reduced.as_univariate()
    }

    pub fn as_univariate(&self) -> Result<UnivariateLaw> {
        if self.dim() != 1 {
            return Err(Error::domain("as_univariate", "dimension must be 1"));
        }
        UnivariateLaw::gh(
            self.location[0],
            self.dispersion[(0, 0)],
            self.skewness[0],
            self.lambda,
            self.chi,
            self.psi,
        )
    }

    /// Draws X = μ + Wκ + √W·A·Z with W ~ GIG(λ, χ, ψ); rows are observations.
    pub fn sample(&self, n: usize, seed: u64) -> Result<DMatrix<f64>> {
        use rand::SeedableRng;
        let d = self.dim();
        let chol = cholesky_lower("sample_gh", &self.dispersion)?;
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let mut out = DMatrix::zeros(n, d);
        for row in 0..n {
            let w = gig::sample(&mut rng, self.lambda, self.chi, self.psi);
            let raw: DVector<f64> = DVector::from_fn(d, |_, _| StandardNormal.sample(&mut rng));
            let z = &chol * raw;
            let sw = w.sqrt();
            for j in 0..d {
                out[(row, j)] = self.location[j] + w * self.skewness[j] + sw * z[j];
            }
        }
        Ok(out)
    }
}

impl MultivariateLaw {
    pub fn dim(&self) -> usize {
        match self {
            MultivariateLaw::St(p) => p.dim(),
            MultivariateLaw::Gh(p) => p.dim(),
        }
    }

    pub fn pdf(&self, x: &DVector<f64>) -> Result<f64> {
        match self {
            MultivariateLaw::St(p) => p.pdf(x),
            MultivariateLaw::Gh(p) => p.pdf(x),
        }
    }

    pub fn canonicalize(&self) -> Result<CanonicalReduction> {
        match self {
            MultivariateLaw::St(p) => p.canonicalize(),
            MultivariateLaw::Gh(p) => p.canonicalize(),
        }
    }

    pub fn linear_form(&self, a: &DMatrix<f64>, b: &DVector<f64>) -> Result<MultivariateLaw> {
        match self {
            MultivariateLaw::St(p) => Ok(MultivariateLaw::St(p.linear_form(a, b)?)),
            MultivariateLaw::Gh(p) => Ok(MultivariateLaw::Gh(p.linear_form(a, b)?)),
        }
    }

    /// Law of uᵀX as a univariate law.
    pub fn project(&self, u: &DVector<f64>) -> Result<UnivariateLaw> {
        match self {
            MultivariateLaw::St(p) => p.project(u),
            MultivariateLaw::Gh(p) => p.project(u),
        }
    }

    pub fn sample(&self, n: usize, seed: u64) -> Result<DMatrix<f64>> {
        match self {
            MultivariateLaw::St(p) => p.sample(n, seed),
            MultivariateLaw::Gh(p) => p.sample(n, seed),
        }
    }

    pub fn location(&self) -> &DVector<f64> {
        match self {
            MultivariateLaw::St(p) => &p.location,
            MultivariateLaw::Gh(p) => &p.location,
        }
    }
}

/// Projection of the canonical skew-t onto a unit vector u:
/// CST₁(γ*, ν) with γ* = u₁γ / √(1 + γ²(1 − u₁²)).
pub fn project_canonical_st(gamma: f64, dof: f64, u: &DVector<f64>) -> Result<UnivariateLaw> {
    if (u.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::domain("project_st", "u must be a unit vector"));
    }
    let u1 = u[0].clamp(-1.0, 1.0);
    let g = canonical_st_projected_skew(gamma, u1);
    UnivariateLaw::skew_t(0.0, 1.0, g, dof)
}

#[inline]
pub(crate) fn canonical_st_projected_skew(gamma: f64, u1: f64) -> f64 {
    u1 * gamma / (1.0 + gamma * gamma * (1.0 - u1 * u1).max(0.0)).sqrt()
}

/// Projection of the canonical GH onto a unit vector u: CGH₁(u₁κ, λ, χ, ψ).
pub fn project_canonical_gh(
    kappa: f64,
    lambda: f64,
    chi: f64,
    psi: f64,
    u: &DVector<f64>,
) -> Result<UnivariateLaw> {
    if (u.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::domain("project_gh", "u must be a unit vector"));
    }
    UnivariateLaw::gh(0.0, 1.0, u[0] * kappa, lambda, chi, psi)
}

/// Draws from the GIG mixing law, exposed for distributional validation.
pub fn sample_gig(lambda: f64, chi: f64, psi: f64, n: usize, seed: u64) -> Result<Vec<f64>> {
    use rand::SeedableRng;
    gig::validate(lambda, chi, psi)?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    Ok((0..n).map(|_| gig::sample(&mut rng, lambda, chi, psi)).collect())
}
