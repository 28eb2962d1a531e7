//! Bulk refractive index of the host glass via a three-term Sellmeier
//! expansion, and the material contribution to chromatic dispersion.

use crate::{Error, Result, PS_PER_KM_PER_GROUP_INDEX};

/// Wavelength window (nm) over which this crate trusts its material and
/// waveguide models. Everything refuses to extrapolate beyond it.
pub const SELLMEIER_VALID_NM: (f64, f64) = (1200.0, 1700.0);

/// Three-term Sellmeier coefficients: n²(λ) = 1 + Σ bᵢλ²/(λ² − λᵢ²),
/// λ in µm.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialModel {
    pub name: String,
    pub b: [f64; 3],
    pub wavelength_um: [f64; 3],
}

/// Fused silica, after Malitson, J. Opt. Soc. Am. 55, 1205 (1965).
pub fn fused_silica() -> MaterialModel {
    MaterialModel {
        name: "fused silica (Malitson 1965)".into(),
        b: [0.6961663, 0.4079426, 0.8974794],
        wavelength_um: [0.0684043, 0.1162414, 9.896161],
    }
}

/// Bulk index at `lambda_nm`, restricted to [`SELLMEIER_VALID_NM`].
pub fn material_index(model: &MaterialModel, lambda_nm: f64) -> Result<f64> {
    let (min_nm, max_nm) = SELLMEIER_VALID_NM;
    if !(lambda_nm.is_finite() && (min_nm..=max_nm).contains(&lambda_nm)) {
        return Err(Error::OutsideValidity {
            lambda_nm,
            min_nm,
            max_nm,
        });
    }
    let lam_um = lambda_nm * 1.0e-3;
    let lam2 = lam_um * lam_um;
    let mut n2 = 1.0;
    for (b, lam_res) in model.b.iter().zip(model.wavelength_um) {
        n2 += b * lam2 / (lam2 - lam_res * lam_res);
    }
    if !(n2.is_finite() && n2 > 1.0) {
        return Err(Error::InvalidInput(format!(
            "Sellmeier model '{}' gives non-physical n² = {n2} at {lambda_nm} nm",
            model.name
        )));
    }
    Ok(n2.sqrt())
}

/// Material dispersion D_mat = −(λ/c)·d²n/dλ² in ps/(km·nm), from a
/// five-point second-difference of the Sellmeier curve (h = 1 nm).
pub fn material_dispersion(model: &MaterialModel, lambda_nm: f64) -> Result<f64> {
    const H_NM: f64 = 1.0;
    let n: Vec<f64> = (-2i32..=2)
        .map(|k| material_index(model, lambda_nm + k as f64 * H_NM))
        .collect::<Result<_>>()?;
    let d2 = (-n[0] + 16.0 * n[1] - 30.0 * n[2] + 16.0 * n[3] - n[4]) / (12.0 * H_NM * H_NM);
    Ok(-PS_PER_KM_PER_GROUP_INDEX * lambda_nm * d2)
}
