//! Law specification files: a TOML document naming the family, dimension,
//! location, dispersion (row-major lower triangle), skewness and shape
//! parameters. Unknown keys are rejected and every numeric field is
//! range-checked before any computation runs.

use nalgebra::{DMatrix, DVector};
use serde::Deserialize;
use skewdepth::multivariate::{GhParams, StParams};
use skewdepth::MultivariateLaw;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    family: String,
    dimension: usize,
    location: Vec<f64>,
    dispersion: Vec<f64>,
    skewness: Vec<f64>,
    dof: Option<f64>,
    lambda: Option<f64>,
    chi: Option<f64>,
    psi: Option<f64>,
}

#[derive(Debug)]
pub struct ParsedLaw {
    pub law: MultivariateLaw,
    pub warnings: Vec<String>,
}

pub fn parse_law(text: &str) -> Result<ParsedLaw, String> {
    let raw: RawSpec = toml::from_str(text).map_err(|e| format!("law spec: {e}"))?;
    let d = raw.dimension;
    if d == 0 {
        return Err("dimension: must be at least 1".into());
    }
    if raw.location.len() != d {
        return Err(format!(
            "location: expected {d} entries, found {}",
            raw.location.len()
        ));
    }
    if raw.skewness.len() != d {
        return Err(format!(
            "skewness: expected {d} entries, found {}",
            raw.skewness.len()
        ));
    }
    let tri = d * (d + 1) / 2;
    if raw.dispersion.len() != tri {
        return Err(format!(
            "dispersion: expected the {tri}-entry row-major lower triangle for dimension {d}, found {}",
            raw.dispersion.len()
        ));
    }
    for (field, values) in [
        ("location", &raw.location),
        ("dispersion", &raw.dispersion),
        ("skewness", &raw.skewness),
    ] {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(format!("{field}: entries must be finite"));
        }
    }
    let mut dispersion = DMatrix::zeros(d, d);
    let mut it = raw.dispersion.iter();
    for i in 0..d {
        for j in 0..=i {
            let v = *it.next().expect("length checked");
            dispersion[(i, j)] = v;
            dispersion[(j, i)] = v;
        }
    }
    let location = DVector::from_vec(raw.location);
    let skewness = DVector::from_vec(raw.skewness);

    let forbid = |name: &str, value: &Option<f64>, family: &str| -> Result<(), String> {
        if value.is_some() {
            Err(format!("{name}: not a parameter of family `{family}`"))
        } else {
            Ok(())
        }
    };

    let mut warnings = Vec::new();
    let law = match raw.family.as_str() {
        "st" => {
            forbid("lambda", &raw.lambda, "st")?;
            forbid("chi", &raw.chi, "st")?;
            forbid("psi", &raw.psi, "st")?;
            let dof = raw.dof.ok_or("dof: required for family `st`")?;
            if !(dof > 0.0) {
                return Err(format!("dof: must be positive, got {dof}"));
            }
            MultivariateLaw::St(
                StParams::new(location, dispersion, skewness, dof).map_err(|e| e.to_string())?,
            )
        }
        "sn" => {
            forbid("dof", &raw.dof, "sn")?;
            forbid("lambda", &raw.lambda, "sn")?;
            forbid("chi", &raw.chi, "sn")?;
            forbid("psi", &raw.psi, "sn")?;
            MultivariateLaw::St(
                StParams::new(location, dispersion, skewness, f64::INFINITY)
                    .map_err(|e| e.to_string())?,
            )
        }
        "sc" => {
            forbid("dof", &raw.dof, "sc")?;
            forbid("lambda", &raw.lambda, "sc")?;
            forbid("chi", &raw.chi, "sc")?;
            forbid("psi", &raw.psi, "sc")?;
            MultivariateLaw::St(
                StParams::new(location, dispersion, skewness, 1.0).map_err(|e| e.to_string())?,
            )
        }
        "gh" => {
            forbid("dof", &raw.dof, "gh")?;
            let lambda = raw.lambda.ok_or("lambda: required for family `gh`")?;
            let chi = raw.chi.ok_or("chi: required for family `gh`")?;
            let psi = raw.psi.ok_or("psi: required for family `gh`")?;
            MultivariateLaw::Gh(
                GhParams::new(location, dispersion, skewness, lambda, chi, psi)
                    .map_err(|e| e.to_string())?,
            )
        }
        "nig" => {
            forbid("dof", &raw.dof, "nig")?;
            forbid("lambda", &raw.lambda, "nig")?;
            let psi = raw.psi.ok_or("psi: required for family `nig`")?;
            if !(psi > 0.0) {
                return Err(format!("psi: must be positive, got {psi}"));
            }
            let params = match raw.chi {
                None => GhParams::nig(location, dispersion, skewness, psi)
                    .map_err(|e| e.to_string())?,
                Some(chi) if chi == psi => GhParams::nig(location, dispersion, skewness, psi)
                    .map_err(|e| e.to_string())?,
                Some(chi) => {
                    if !(chi > 0.0) {
                        return Err(format!("chi: must be positive, got {chi}"));
                    }
                    // Identifiability: rescale (Σ, κ, χ, ψ) by a = √(χ/ψ) so
                    // that χ' = ψ' = √(χψ) without changing the law.
                    let a = (chi / psi).sqrt();
                    warnings.push(format!(
                        "nig spec has chi = {chi} != psi = {psi}; rescaled by {a} to chi = psi = {}",
                        (chi * psi).sqrt()
                    ));
                    let base =
                        GhParams::new(location, dispersion, skewness, -0.5, chi, psi)
                            .map_err(|e| e.to_string())?;
                    base.rescaled(a).map_err(|e| e.to_string())?
                }
            };
            MultivariateLaw::Gh(params)
        }
        "ghst" => {
            forbid("lambda", &raw.lambda, "ghst")?;
            forbid("chi", &raw.chi, "ghst")?;
            forbid("psi", &raw.psi, "ghst")?;
            let dof = raw.dof.ok_or("dof: required for family `ghst`")?;
            MultivariateLaw::Gh(
                GhParams::gh_skew_t(location, dispersion, skewness, dof)
                    .map_err(|e| e.to_string())?,
            )
        }
        other => {
            return Err(format!(
                "family: unknown family `{other}` (expected st, sn, sc, gh, nig or ghst)"
            ))
        }
    };
    Ok(ParsedLaw { law, warnings })
}
