//! Radially layered index profiles on a common cladding.
//!
//! A profile is a sequence of annular layers (bounded by increasing radii)
//! whose index is the cladding index scaled by a relative step:
//! n_layer(λ) = n_cl(λ)·(1 + δ). δ > 0 raises a core, δ < 0 depresses a
//! trench, and everything beyond the outermost boundary is cladding.

use crate::mcf_model::TrenchProfile;
use crate::mode_solver::material::{material_index, MaterialModel};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RadialIndexProfile {
    /// Outer radius of each layer, µm, strictly increasing.
    boundaries_um: Vec<f64>,
    /// Relative index step of each layer as a fraction (not percent).
    deltas_frac: Vec<f64>,
    pub model: MaterialModel,
}

impl RadialIndexProfile {
    /// Builds a profile from `(outer_radius_um, delta_pct)` layers, listed
    /// inside-out.
    pub fn new(layers: Vec<(f64, f64)>, model: MaterialModel) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::InvalidInput("profile has no layers".into()));
        }
        let mut prev = 0.0;
        for &(radius, delta_pct) in &layers {
            if !(radius.is_finite() && radius > prev) {
                return Err(Error::InvalidInput(format!(
                    "layer radii must increase from 0, got {radius} um after {prev} um"
                )));
            }
            if !(delta_pct.is_finite() && delta_pct > -100.0 && delta_pct < 100.0) {
                return Err(Error::InvalidInput(format!(
                    "relative index step must lie in (-100, 100) %, got {delta_pct} %"
                )));
            }
            prev = radius;
        }
        Ok(Self {
            boundaries_um: layers.iter().map(|l| l.0).collect(),
            deltas_frac: layers.iter().map(|l| l.1 / 100.0).collect(),
            model,
        })
    }

    /// Single raised core of radius `a_um` and step `delta1_pct`.
    pub fn step_index(a_um: f64, delta1_pct: f64, model: MaterialModel) -> Result<Self> {
        if !(delta1_pct.is_finite() && delta1_pct > 0.0) {
            return Err(Error::InvalidInput(format!(
                "step-index core needs a positive index step, got {delta1_pct} %"
            )));
        }
        Self::new(vec![(a_um, delta1_pct)], model)
    }

    /// Core / spacer / depressed-trench profile from a [`TrenchProfile`].
    pub fn trench_assisted(trench: &TrenchProfile, model: MaterialModel) -> Result<Self> {
        trench.validate()?;
        Self::new(
            vec![
                (trench.a1_um, trench.delta1_pct),
                (trench.trench_start_um(), 0.0),
                (trench.trench_end_um(), -trench.delta2_pct),
            ],
            model,
        )
    }

    /// Index at radius `r_um`; layer i owns (b_{i−1}, b_i].
    pub fn index(&self, r_um: f64, lambda_nm: f64) -> Result<f64> {
        if !(r_um.is_finite() && r_um >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "radius must be non-negative, got {r_um} um"
            )));
        }
        let n_cl = material_index(&self.model, lambda_nm)?;
        for (boundary, delta) in self.boundaries_um.iter().zip(&self.deltas_frac) {
            if r_um <= *boundary {
                return Ok(n_cl * (1.0 + delta));
            }
        }
        Ok(n_cl)
    }

    pub fn cladding_index(&self, lambda_nm: f64) -> Result<f64> {
        material_index(&self.model, lambda_nm)
    }

    /// Largest index anywhere in the cross-section (the cladding itself if
    /// every layer is depressed).
    pub fn max_index(&self, lambda_nm: f64) -> Result<f64> {
        let n_cl = material_index(&self.model, lambda_nm)?;
        let max_delta = self.deltas_frac.iter().copied().fold(0.0, f64::max);
        Ok(n_cl * (1.0 + max_delta))
    }

    /// Radius beyond which the profile is pure cladding, µm.
    pub fn outermost_radius_um(&self) -> f64 {
        *self.boundaries_um.last().expect("profiles have >= 1 layer")
    }

    pub(crate) fn boundaries_um(&self) -> &[f64] {
        &self.boundaries_um
    }

    pub(crate) fn deltas_frac(&self) -> &[f64] {
        &self.deltas_frac
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mode_solver::material::fused_silica;
    use approx::assert_relative_eq;

    #[test]
    fn step_profile_indexing() {
        let p = RadialIndexProfile::step_index(4.1, 0.36, fused_silica()).unwrap();
        let n_cl = p.cladding_index(1550.0).unwrap();
        assert_relative_eq!(p.index(0.0, 1550.0).unwrap(), n_cl * 1.0036);
        assert_relative_eq!(p.index(4.1, 1550.0).unwrap(), n_cl * 1.0036);
        assert_relative_eq!(p.index(4.1000001, 1550.0).unwrap(), n_cl);
        assert_relative_eq!(p.max_index(1550.0).unwrap(), n_cl * 1.0036);
        assert_eq!(p.outermost_radius_um(), 4.1);
    }

    #[test]
    fn trench_profile_layers() {
        let t = TrenchProfile::new(4.2, 0.36, 3.1, 4.0, 1.0).unwrap();
        let p = RadialIndexProfile::trench_assisted(&t, fused_silica()).unwrap();
        let n_cl = p.cladding_index(1550.0).unwrap();
        assert_relative_eq!(p.index(2.0, 1550.0).unwrap(), n_cl * 1.0036);
        assert_relative_eq!(p.index(5.0, 1550.0).unwrap(), n_cl);
        assert_relative_eq!(p.index(8.0, 1550.0).unwrap(), n_cl * 0.99);
        assert_relative_eq!(p.index(12.0, 1550.0).unwrap(), n_cl);
        assert_eq!(p.outermost_radius_um(), 4.2 + 3.1 + 4.0);
        // A trench never raises the maximum above the core.
        assert_relative_eq!(p.max_index(1550.0).unwrap(), n_cl * 1.0036);
    }

    #[test]
    fn rejects_malformed_layer_stacks() {
        let silica = fused_silica();
        assert!(RadialIndexProfile::new(vec![], silica.clone()).is_err());
        assert!(RadialIndexProfile::new(vec![(4.0, 0.3), (3.0, 0.0)], silica.clone()).is_err());
        assert!(RadialIndexProfile::new(vec![(0.0, 0.3)], silica.clone()).is_err());
        assert!(RadialIndexProfile::new(vec![(4.0, f64::NAN)], silica.clone()).is_err());
        assert!(RadialIndexProfile::step_index(4.0, -0.3, silica).is_err());
    }
}
