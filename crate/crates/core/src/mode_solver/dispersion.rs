//! Chromatic-dispersion extraction: turn n_eff(λ) from the mode solver
//! into the τ₀/D/S coefficients used by the delay-line models.
//!
//! Five LP01 solves on a symmetric wavelength stencil give the first three
//! derivatives of n_eff by central differences:
//!
//! ```text
//! n_g = n_eff − λ·n′         τ₀ = n_g/c
//! D   = −(λ/c)·n″            S  = −(n″ + λ·n‴)/c
//! ```
//!
//! The solver's grid is wavelength-independent, so the stencil differences
//! see a smooth function and the derivatives are stable down to sub-nm
//! steps; [`MIN_STENCIL_NM`] guards the point where eigenvalue resolution
//! would start to dominate the second difference.

use crate::mcf_model::CoreDispersion;
use crate::mode_solver::profile::RadialIndexProfile;
use crate::mode_solver::solve::{solve_lp01, ModeSolution, SolverNumerics};
use crate::parallel::{par_fill, resolve_threads};
use crate::{Error, Result, PS_PER_KM_PER_GROUP_INDEX};

/// Smallest usable wavelength stencil step, nm.
pub const MIN_STENCIL_NM: f64 = 0.1;

/// Solves the profile on the five-point stencil λ₀ + kδ, k ∈ −2..=2, and
/// returns the dispersion coefficients at λ₀.
///
/// The whole stencil must stay inside `band` (itself inside the material
/// validity window), and δ must be at least [`MIN_STENCIL_NM`].
pub fn dispersion_from_profile(
    profile: &RadialIndexProfile,
    lambda0_nm: f64,
    band: (f64, f64),
    delta_lambda_nm: f64,
    numerics: &SolverNumerics,
) -> Result<CoreDispersion> {
    if !(delta_lambda_nm.is_finite() && delta_lambda_nm >= MIN_STENCIL_NM) {
        return Err(Error::StencilTooFine {
            delta_nm: delta_lambda_nm,
            min_nm: MIN_STENCIL_NM,
        });
    }
    let (lo, hi) = band;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::EmptyBand {
            min_nm: lo,
            max_nm: hi,
        });
    }
    if lambda0_nm - 2.0 * delta_lambda_nm < lo || lambda0_nm + 2.0 * delta_lambda_nm > hi {
        return Err(Error::InvalidInput(format!(
            "stencil [{}, {}] nm leaves the band [{lo}, {hi}] nm",
            lambda0_nm - 2.0 * delta_lambda_nm,
            lambda0_nm + 2.0 * delta_lambda_nm
        )));
    }

    let lambdas: Vec<f64> = (-2i32..=2)
        .map(|k| lambda0_nm + k as f64 * delta_lambda_nm)
        .collect();
    let threads = resolve_threads(numerics.threads).min(lambdas.len());
    let mut solutions: Vec<Option<Result<ModeSolution>>> = vec![None; lambdas.len()];
    par_fill(&mut solutions, threads, |i| {
        Some(solve_lp01(profile, lambdas[i], numerics))
    });
    let mut n = [0.0; 5];
    for (slot, out) in solutions.into_iter().zip(n.iter_mut()) {
        *out = slot.expect("par_fill visits every slot")?.n_eff;
    }

    let d = delta_lambda_nm;
    let d1 = (n[0] - 8.0 * n[1] + 8.0 * n[3] - n[4]) / (12.0 * d);
    let d2 = (-n[0] + 16.0 * n[1] - 30.0 * n[2] + 16.0 * n[3] - n[4]) / (12.0 * d * d);
    let d3 = (-n[0] + 2.0 * n[1] - 2.0 * n[3] + n[4]) / (2.0 * d * d * d);

    let n_group = n[2] - lambda0_nm * d1;
    let k = PS_PER_KM_PER_GROUP_INDEX;
    CoreDispersion::physical(
        k * n_group,
        -k * lambda0_nm * d2,
        -k * (d2 + lambda0_nm * d3),
    )
}
