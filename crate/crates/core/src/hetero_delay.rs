//! Group-delay expansion and differential-delay algebra for heterogeneous
//! MCF links.
//!
//! The group delay of core n at wavelength λ over a link of length L is the
//! truncated Taylor expansion around the anchor wavelength λ0:
//!
//! ```text
//! τ_n(λ) = L · [ τ0_n + D_n·(λ − λ0) + (S_n/2)·(λ − λ0)² ]
//! ```
//!
//! A spatial-diversity TTDL samples all cores at one operating wavelength
//! λm; adjacent cores then differ by Δτ = L·[Δτ0 + ΔD·(λm−λ0) +
//! (ΔS/2)·(λm−λ0)²], which is uniform across pairs when the anchor delays
//! agree, ΔD is constant, and the slopes match — the operability conditions
//! checked by [`validate_hetero_spec`].

use crate::mcf_model::{CoreDispersion, HeteroMCFSpec};
use crate::taps::{Tap, TapSet};
use crate::{Error, Result};

/// Wavelength window within which the delay expansion is trusted, nm.
/// Matches the material model's validity window.
pub const BAND_WINDOW_NM: (f64, f64) = (1200.0, 1700.0);

/// Acceptance thresholds for the heterogeneous operability conditions.
///
/// Defaults: anchor delays agree within 0.1 ps over the link, the
/// dispersion step is uniform within 1% of its mean, adjacent slopes agree
/// within 0.005 ps/(km·nm²), and the quadratic term stays below 5% of the
/// linear term everywhere in the operating band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeteroTolerances {
    pub anchor_spread_max_ps: f64,
    /// Allowed deviation of each adjacent-pair ΔD from the mean ΔD,
    /// relative to the mean ΔD.
    pub delta_d_rel_max: f64,
    pub slope_variation_max_ps_km_nm2: f64,
    pub quadratic_fraction_max: f64,
}

impl Default for HeteroTolerances {
    fn default() -> Self {
        Self {
            anchor_spread_max_ps: 0.1,
            delta_d_rel_max: 0.01,
            slope_variation_max_ps_km_nm2: 0.005,
            quadratic_fraction_max: 0.05,
        }
    }
}

/// Measured operability metrics of a heterogeneous link spec.
#[derive(Debug, Clone, PartialEq)]
pub struct HeteroValidationReport {
    /// Spread of anchor delays across cores over the full link, ps.
    pub anchor_delay_spread_ps: f64,
    /// Adjacent-pair dispersion steps D_{n+1} − D_n, ps/(km·nm).
    pub delta_d_values_ps_km_nm: Vec<f64>,
    /// Worst deviation of a step from the mean step, ps/(km·nm).
    pub delta_d_max_deviation_ps_km_nm: f64,
    /// Worst adjacent slope difference |S_{n+1} − S_n|, ps/(km·nm²).
    pub slope_variation_max_ps_km_nm2: f64,
    /// Worst ratio of the quadratic to the linear differential-delay term
    /// over the operating band.
    pub quadratic_fraction_max: f64,
    pub pass: bool,
}

fn check_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "{name} must be finite, got {v}"
        )))
    }
}

/// Group delay of one core at `lambda_nm` over `length_km`, in ps.
pub fn group_delay(
    core: &CoreDispersion,
    lambda_nm: f64,
    lambda0_nm: f64,
    length_km: f64,
) -> Result<f64> {
    check_finite("lambda_nm", lambda_nm)?;
    check_finite("lambda0_nm", lambda0_nm)?;
    if !(length_km > 0.0 && length_km.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "link length must be positive and finite, got {length_km} km"
        )));
    }
    let dl = lambda_nm - lambda0_nm;
    Ok(length_km * (core.tau0_ps_km + core.d_ps_km_nm * dl + 0.5 * core.s_ps_km_nm2 * dl * dl))
}

/// Differential delay of each adjacent-core pair at the operating
/// wavelength `lambda_m_nm`, in ps; entry n is core n+1 minus core n.
///
/// Evaluates the closed form `L·[Δτ0 + ΔD·(λm−λ0) + (ΔS/2)·(λm−λ0)²]`
/// per pair, which equals the difference of the per-core [`group_delay`]
/// values up to rounding.
pub fn differential_delay_spatial(spec: &HeteroMCFSpec, lambda_m_nm: f64) -> Result<Vec<f64>> {
    check_finite("lambda_m_nm", lambda_m_nm)?;
    let cores = spec.cores();
    if cores.len() < 2 {
        return Err(Error::TooFewCores {
            needed: 2,
            got: cores.len(),
        });
    }
    let x = lambda_m_nm - spec.lambda0_nm;
    Ok(cores
        .windows(2)
        .map(|pair| {
            let dtau0 = pair[1].tau0_ps_km - pair[0].tau0_ps_km;
            let dd = pair[1].d_ps_km_nm - pair[0].d_ps_km_nm;
            let ds = pair[1].s_ps_km_nm2 - pair[0].s_ps_km_nm2;
            spec.length_km * (dtau0 + dd * x + 0.5 * ds * x * x)
        })
        .collect())
}

/// Delay difference of one core between two wavelengths `lambda_ref_nm`
/// and `lambda_ref_nm + delta_lambda_nm`, in ps.
pub fn differential_delay_wavelength(
    core: &CoreDispersion,
    delta_lambda_nm: f64,
    lambda_ref_nm: f64,
    lambda0_nm: f64,
    length_km: f64,
) -> Result<f64> {
    if delta_lambda_nm == 0.0 {
        return Err(Error::InvalidInput(
            "wavelength step must be nonzero for a wavelength-diversity delay".into(),
        ));
    }
    check_finite("delta_lambda_nm", delta_lambda_nm)?;
    let far = group_delay(core, lambda_ref_nm + delta_lambda_nm, lambda0_nm, length_km)?;
    let near = group_delay(core, lambda_ref_nm, lambda0_nm, length_km)?;
    Ok(far - near)
}

/// Evaluates all four operability metrics of a spec over the operating
/// band `(lambda_min_nm, lambda_max_nm)`.
///
/// The band must have positive width, contain the anchor wavelength, and
/// sit inside [`BAND_WINDOW_NM`]. The quadratic fraction is the ratio
/// |(ΔS/2)(λ−λ0)²| / |ΔD(λ−λ0)|, taken as 0 at λ0 when both terms vanish
/// and as infinite when a pair has slope mismatch but no dispersion step.
pub fn validate_hetero_spec(
    spec: &HeteroMCFSpec,
    band: (f64, f64),
    tolerances: &HeteroTolerances,
) -> Result<HeteroValidationReport> {
    let (lo, hi) = band;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::EmptyBand {
            min_nm: lo,
            max_nm: hi,
        });
    }
    if lo < BAND_WINDOW_NM.0 || hi > BAND_WINDOW_NM.1 {
        return Err(Error::InvalidInput(format!(
            "band [{lo}, {hi}] nm exceeds the {}-{} nm window",
            BAND_WINDOW_NM.0, BAND_WINDOW_NM.1
        )));
    }
    if spec.lambda0_nm < lo || spec.lambda0_nm > hi {
        return Err(Error::InvalidInput(format!(
            "band [{lo}, {hi}] nm does not contain the anchor wavelength {} nm",
            spec.lambda0_nm
        )));
    }

    let cores = spec.cores();
    let tau0_min = cores
        .iter()
        .map(|c| c.tau0_ps_km)
        .fold(f64::INFINITY, f64::min);
    let tau0_max = cores
        .iter()
        .map(|c| c.tau0_ps_km)
        .fold(f64::NEG_INFINITY, f64::max);
    let anchor_delay_spread_ps = (tau0_max - tau0_min) * spec.length_km;

    let delta_d: Vec<f64> = cores
        .windows(2)
        .map(|p| p[1].d_ps_km_nm - p[0].d_ps_km_nm)
        .collect();
    let (delta_d_max_deviation, mean_delta_d) = if delta_d.is_empty() {
        (0.0, 0.0)
    } else {
        let mean = delta_d.iter().sum::<f64>() / delta_d.len() as f64;
        let dev = delta_d.iter().map(|d| (d - mean).abs()).fold(0.0, f64::max);
        (dev, mean)
    };

    let slope_variation_max = cores
        .windows(2)
        .map(|p| (p[1].s_ps_km_nm2 - p[0].s_ps_km_nm2).abs())
        .fold(0.0, f64::max);

    // The ratio grows linearly in |λ−λ0|, so the band edges are the worst case.
    let mut quadratic_fraction_max: f64 = 0.0;
    for pair in cores.windows(2) {
        let dd = pair[1].d_ps_km_nm - pair[0].d_ps_km_nm;
        let ds = pair[1].s_ps_km_nm2 - pair[0].s_ps_km_nm2;
        for edge in [lo, hi] {
            let x = edge - spec.lambda0_nm;
            let quad = (0.5 * ds * x * x).abs();
            let lin = (dd * x).abs();
            let frac = if quad == 0.0 {
                0.0
            } else if lin == 0.0 {
                f64::INFINITY
            } else {
                quad / lin
            };
            quadratic_fraction_max = quadratic_fraction_max.max(frac);
        }
    }

    let pass = anchor_delay_spread_ps <= tolerances.anchor_spread_max_ps
        && delta_d_max_deviation <= tolerances.delta_d_rel_max * mean_delta_d.abs()
        && slope_variation_max <= tolerances.slope_variation_max_ps_km_nm2
        && quadratic_fraction_max <= tolerances.quadratic_fraction_max;

    Ok(HeteroValidationReport {
        anchor_delay_spread_ps,
        delta_d_values_ps_km_nm: delta_d,
        delta_d_max_deviation_ps_km_nm: delta_d_max_deviation,
        slope_variation_max_ps_km_nm2: slope_variation_max,
        quadratic_fraction_max,
        pass,
    })
}

/// Spatial-diversity tap set: one tap per core at the operating wavelength
/// `lambda_m_nm`, weighted by `weights` (one weight per core, by index).
///
/// Errs when `lambda_m_nm` equals the anchor wavelength — there every core
/// shares the same delay and the taps collapse.
pub fn tap_set_spatial(spec: &HeteroMCFSpec, lambda_m_nm: f64, weights: &[f64]) -> Result<TapSet> {
    if weights.len() != spec.core_count() {
        return Err(Error::InvalidInput(format!(
            "{} weights for {} cores",
            weights.len(),
            spec.core_count()
        )));
    }
    if lambda_m_nm == spec.lambda0_nm {
        return Err(Error::DegenerateTaps(format!(
            "operating wavelength equals the anchor wavelength {} nm, where all \
             cores share one group delay",
            spec.lambda0_nm
        )));
    }
    let mut taps = Vec::with_capacity(spec.core_count());
    for (idx, (core, weight)) in spec.cores().iter().zip(weights).enumerate() {
        let delay = group_delay(core, lambda_m_nm, spec.lambda0_nm, spec.length_km)?;
        taps.push(Tap::labeled(delay, *weight, format!("core{}", idx + 1)));
    }
    TapSet::with_label(taps, format!("spatial diversity at {lambda_m_nm} nm"))
}
