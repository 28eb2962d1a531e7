//! Inverse problems: size a device to hit a target response.
//!
//! The closed-form half inverts the delay/FSR relations (grating spacing
//! for a homogeneous device, operating wavelength for a dispersion-ramp
//! link, the per-core dispersion ramp itself). The search half fits a
//! trench-assisted profile to target dispersion coefficients by running
//! the mode solver inside a box-constrained Nelder–Mead with
//! Latin-hypercube restarts, everything seeded for reproducibility.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::mcf_model::{CoreDispersion, TrenchProfile};
use crate::mode_solver::{
    dispersion_from_profile, fused_silica, RadialIndexProfile, SolverNumerics,
};
use crate::{Error, Result, C_MM_PER_PS};

/// Grating spacing (mm) that gives a homogeneous-fiber multicavity device
/// the requested FSR: Δz = c/(2·n_g·FSR).
pub fn spacing_for_fsr(target_fsr_ghz: f64, group_index: f64) -> Result<f64> {
    if !(target_fsr_ghz.is_finite() && target_fsr_ghz > 0.0) {
        return Err(Error::InvalidInput(format!(
            "target FSR must be positive, got {target_fsr_ghz} GHz"
        )));
    }
    if !(group_index.is_finite() && group_index > 1.0) {
        return Err(Error::InvalidInput(format!(
            "group index must exceed 1, got {group_index}"
        )));
    }
    Ok(1000.0 * C_MM_PER_PS / (2.0 * group_index * target_fsr_ghz))
}

/// Operating wavelength at which a dispersion-ramp link reaches the target
/// FSR, ignoring dispersion slope: λ_m = λ₀ + 1000/(ΔD·L·FSR).
pub fn wavelength_for_fsr_hetero(
    delta_d_ps_km_nm: f64,
    length_km: f64,
    lambda0_nm: f64,
    target_fsr_ghz: f64,
) -> Result<f64> {
    check_link_args(delta_d_ps_km_nm, 0.0, length_km, lambda0_nm, target_fsr_ghz)?;
    if delta_d_ps_km_nm == 0.0 {
        return Err(Error::InvalidInput(
            "adjacent-core dispersion step is zero; no wavelength tunes the FSR".into(),
        ));
    }
    Ok(lambda0_nm + 1000.0 / (delta_d_ps_km_nm * length_km * target_fsr_ghz))
}

/// [`wavelength_for_fsr_hetero`] with the slope mismatch folded in: solves
/// (ΔS/2)·x² + ΔD·x = 1000/(L·FSR) exactly and returns the root nearest
/// the slope-free answer.
pub fn wavelength_for_fsr_hetero_with_slope(
    delta_d_ps_km_nm: f64,
    delta_s_ps_km_nm2: f64,
    length_km: f64,
    lambda0_nm: f64,
    target_fsr_ghz: f64,
) -> Result<f64> {
    check_link_args(
        delta_d_ps_km_nm,
        delta_s_ps_km_nm2,
        length_km,
        lambda0_nm,
        target_fsr_ghz,
    )?;
    if delta_s_ps_km_nm2 == 0.0 {
        return wavelength_for_fsr_hetero(delta_d_ps_km_nm, length_km, lambda0_nm, target_fsr_ghz);
    }
    let q = 1000.0 / (length_km * target_fsr_ghz);
    let disc = delta_d_ps_km_nm * delta_d_ps_km_nm + 2.0 * delta_s_ps_km_nm2 * q;
    if disc < 0.0 {
        return Err(Error::InvalidInput(format!(
            "no real operating wavelength reaches {target_fsr_ghz} GHz: \
             the slope term caps the differential delay (discriminant {disc})"
        )));
    }
    let root = disc.sqrt();
    let x_plus = (-delta_d_ps_km_nm + root) / delta_s_ps_km_nm2;
    let x_minus = (-delta_d_ps_km_nm - root) / delta_s_ps_km_nm2;
    // Prefer the root nearest the slope-free answer; on a tie (ΔD = 0)
    // take the red-shifted one.
    let reference = if delta_d_ps_km_nm != 0.0 {
        q / delta_d_ps_km_nm
    } else {
        0.0
    };
    let d_plus = (x_plus - reference).abs();
    let d_minus = (x_minus - reference).abs();
    let x = if d_plus < d_minus || (d_plus == d_minus && x_plus >= x_minus) {
        x_plus
    } else {
        x_minus
    };
    Ok(lambda0_nm + x)
}

fn check_link_args(
    delta_d: f64,
    delta_s: f64,
    length_km: f64,
    lambda0_nm: f64,
    target_fsr_ghz: f64,
) -> Result<()> {
    let ok = delta_d.is_finite()
        && delta_s.is_finite()
        && length_km.is_finite()
        && length_km > 0.0
        && lambda0_nm.is_finite()
        && lambda0_nm > 0.0
        && target_fsr_ghz.is_finite()
        && target_fsr_ghz > 0.0;
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "link parameters out of range: dD {delta_d} ps/(km·nm), dS {delta_s} ps/(km·nm²), \
             L {length_km} km, lambda0 {lambda0_nm} nm, FSR {target_fsr_ghz} GHz"
        )))
    }
}

/// Per-core dispersion targets on a uniform ramp D_n = d1 + n·ΔD, all
/// sharing slope `s`. `tau0_ps_km == 0` selects the relative convention
/// (anchor delays equalized by design); a positive value is used verbatim
/// for every core.
pub fn assign_core_dispersions(
    core_count: u32,
    d1_ps_km_nm: f64,
    delta_d_ps_km_nm: f64,
    tau0_ps_km: f64,
    s_ps_km_nm2: f64,
) -> Result<Vec<CoreDispersion>> {
    if core_count == 0 {
        return Err(Error::TooFewCores { needed: 1, got: 0 });
    }
    if !(d1_ps_km_nm.is_finite()
        && delta_d_ps_km_nm.is_finite()
        && s_ps_km_nm2.is_finite()
        && tau0_ps_km.is_finite()
        && tau0_ps_km >= 0.0)
    {
        return Err(Error::InvalidInput(format!(
            "ramp parameters out of range: d1 {d1_ps_km_nm}, dD {delta_d_ps_km_nm}, \
             tau0 {tau0_ps_km}, s {s_ps_km_nm2}"
        )));
    }
    (0..core_count)
        .map(|n| {
            let d = d1_ps_km_nm + n as f64 * delta_d_ps_km_nm;
            if tau0_ps_km == 0.0 {
                Ok(CoreDispersion::relative(d, s_ps_km_nm2))
            } else {
                CoreDispersion::physical(tau0_ps_km, d, s_ps_km_nm2)
            }
        })
        .collect()
}

/// Box constraints for the trench-profile fit. The trench depth is held
/// fixed; the four searched coordinates are (a1, δ1, a2, w).
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileSearchBox {
    pub a1_um: (f64, f64),
    pub delta1_pct: (f64, f64),
    pub a2_um: (f64, f64),
    pub w_um: (f64, f64),
    pub delta2_pct: f64,
}

impl Default for ProfileSearchBox {
    fn default() -> Self {
        Self {
            a1_um: (3.42, 4.98),
            delta1_pct: (0.3333, 0.3864),
            a2_um: (2.42, 5.48),
            w_um: (2.61, 5.41),
            delta2_pct: 1.0,
        }
    }
}

impl ProfileSearchBox {
    /// Validates ordering and positivity. Collapsed ranges (min == max)
    /// are allowed: they pin a coordinate.
    pub fn new(
        a1_um: (f64, f64),
        delta1_pct: (f64, f64),
        a2_um: (f64, f64),
        w_um: (f64, f64),
        delta2_pct: f64,
    ) -> Result<Self> {
        let boxed = Self {
            a1_um,
            delta1_pct,
            a2_um,
            w_um,
            delta2_pct,
        };
        for (name, (lo, hi)) in boxed.named_ranges() {
            if !(lo.is_finite() && hi.is_finite() && 0.0 < lo && lo <= hi) {
                return Err(Error::InvalidInput(format!(
                    "search range for {name} must satisfy 0 < min <= max, got [{lo}, {hi}]"
                )));
            }
        }
        if !(delta2_pct.is_finite() && delta2_pct > 0.0) {
            return Err(Error::InvalidInput(format!(
                "trench depth must be positive, got {delta2_pct} %"
            )));
        }
        Ok(boxed)
    }

    /// Pins every coordinate to one point — a box that evaluates a single
    /// candidate profile.
    pub fn pinned(profile: &TrenchProfile) -> Result<Self> {
        Self::new(
            (profile.a1_um, profile.a1_um),
            (profile.delta1_pct, profile.delta1_pct),
            (profile.a2_um, profile.a2_um),
            (profile.w_um, profile.w_um),
            profile.delta2_pct,
        )
    }

    fn ranges(&self) -> [(f64, f64); 4] {
        [self.a1_um, self.delta1_pct, self.a2_um, self.w_um]
    }

    fn named_ranges(&self) -> [(&'static str, (f64, f64)); 4] {
        [
            ("a1_um", self.a1_um),
            ("delta1_pct", self.delta1_pct),
            ("a2_um", self.a2_um),
            ("w_um", self.w_um),
        ]
    }

    /// Every range pinned to a single point.
    pub fn is_collapsed(&self) -> bool {
        self.ranges().iter().all(|(lo, hi)| lo == hi)
    }

    fn clamp(&self, x: &mut [f64; 4]) {
        for (v, (lo, hi)) in x.iter_mut().zip(self.ranges()) {
            *v = v.clamp(lo, hi);
        }
    }

    fn to_profile(&self, x: &[f64; 4]) -> Result<TrenchProfile> {
        TrenchProfile::new(x[0], x[1], x[2], x[3], self.delta2_pct)
    }

    /// One Latin-hypercube batch: `count` points stratified per dimension.
    fn latin_hypercube(&self, count: usize, rng: &mut ChaCha8Rng) -> Vec<[f64; 4]> {
        let mut points = vec![[0.0; 4]; count];
        for (dim, (lo, hi)) in self.ranges().into_iter().enumerate() {
            let mut strata: Vec<usize> = (0..count).collect();
            strata.shuffle(rng);
            for (point, stratum) in points.iter_mut().zip(strata) {
                let u = (stratum as f64 + rng.random::<f64>()) / count as f64;
                point[dim] = lo + u * (hi - lo);
            }
        }
        points
    }
}

/// Relative emphasis of the three dispersion coordinates in the fit
/// objective Σ wᵢ·Δᵢ². The defaults roughly equalize the practically
/// relevant error scales (ps/km, ps/(km·nm), ps/(km·nm²)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitWeights {
    pub tau0: f64,
    pub d: f64,
    pub s: f64,
}

impl Default for FitWeights {
    fn default() -> Self {
        Self {
            tau0: 1.0e4,
            d: 400.0,
            s: 4.0e4,
        }
    }
}

/// Everything the fit needs besides target, box, weights, and budget.
#[derive(Debug, Clone, PartialEq)]
pub struct FitOptions {
    pub lambda0_nm: f64,
    pub band: (f64, f64),
    pub delta_lambda_nm: f64,
    pub numerics: SolverNumerics,
    /// Seed of the Latin-hypercube sampler; fixed so fits replay exactly.
    pub seed: u64,
    /// Latin-hypercube restarts of the simplex.
    pub restarts: u32,
    /// Simplex objective spread below which a restart counts as converged.
    pub tol: f64,
    /// Simplex iterations without improvement before a restart is cut.
    pub patience: u32,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            lambda0_nm: 1550.0,
            band: (1540.0, 1560.0),
            delta_lambda_nm: 2.0,
            numerics: SolverNumerics::default(),
            seed: 7,
            restarts: 4,
            tol: 1.0e-10,
            patience: 20,
        }
    }
}

/// Outcome of [`fit_profile_to_dispersion`].
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub profile: TrenchProfile,
    /// Dispersion of `profile`, re-evaluated fresh at the end.
    pub achieved: CoreDispersion,
    pub objective: f64,
    pub evaluations: usize,
    /// Whether the winning restart closed its simplex below tolerance.
    pub converged: bool,
    pub seed: u64,
}

struct FitContext<'a> {
    target: &'a CoreDispersion,
    boxed: &'a ProfileSearchBox,
    weights: &'a FitWeights,
    options: &'a FitOptions,
    budget: usize,
    evaluations: usize,
    failed: usize,
}

impl FitContext<'_> {
    fn remaining(&self) -> usize {
        self.budget.saturating_sub(self.evaluations)
    }

    fn dispersion_at(&mut self, x: &[f64; 4]) -> Result<CoreDispersion> {
        self.evaluations += 1;
        let profile = self.boxed.to_profile(x)?;
        let radial = RadialIndexProfile::trench_assisted(&profile, fused_silica())?;
        dispersion_from_profile(
            &radial,
            self.options.lambda0_nm,
            self.options.band,
            self.options.delta_lambda_nm,
            &self.options.numerics,
        )
    }

    fn objective_of(&self, achieved: &CoreDispersion) -> f64 {
        let w = self.weights;
        let mut obj = w.d * (achieved.d_ps_km_nm - self.target.d_ps_km_nm).powi(2)
            + w.s * (achieved.s_ps_km_nm2 - self.target.s_ps_km_nm2).powi(2);
        if !self.target.relative {
            obj += w.tau0 * (achieved.tau0_ps_km - self.target.tau0_ps_km).powi(2);
        }
        obj
    }

    /// Objective at `x`; solver failures count as +∞ and are tallied.
    fn evaluate(&mut self, x: &[f64; 4]) -> f64 {
        match self.dispersion_at(x) {
            Ok(achieved) => self.objective_of(&achieved),
            Err(_) => {
                self.failed += 1;
                f64::INFINITY
            }
        }
    }
}

/// Nelder–Mead coefficients: reflection, expansion, contraction, shrink.
const NM_ALPHA: f64 = 1.0;
const NM_GAMMA: f64 = 2.0;
const NM_RHO: f64 = 0.5;
const NM_SIGMA: f64 = 0.5;

/// Finds a trench profile whose modal dispersion matches `target`.
///
/// Spends at most `budget` solver evaluations: Latin-hypercube batches
/// seed a box-clamped Nelder–Mead simplex, restarted `options.restarts`
/// times; the best point is re-evaluated fresh at the end and returned.
/// A first batch in which most evaluations fail aborts with
/// [`Error::InfeasibleBox`].
pub fn fit_profile_to_dispersion(
    target: &CoreDispersion,
    boxed: &ProfileSearchBox,
    weights: &FitWeights,
    budget: usize,
    options: &FitOptions,
) -> Result<FitResult> {
    if budget == 0 {
        return Err(Error::InvalidInput(
            "fit budget must allow at least one evaluation".into(),
        ));
    }
    let weights_ok = weights.tau0.is_finite()
        && weights.tau0 >= 0.0
        && weights.d.is_finite()
        && weights.d >= 0.0
        && weights.s.is_finite()
        && weights.s >= 0.0;
    if !weights_ok {
        return Err(Error::InvalidInput(format!(
            "fit weights must be non-negative, got tau0 {} d {} s {}",
            weights.tau0, weights.d, weights.s
        )));
    }

    // One evaluation of the full budget is reserved for the final fresh
    // re-check of the winner; the context's budget is the search share.
    let mut ctx = FitContext {
        target,
        boxed,
        weights,
        options,
        budget: budget - 1,
        evaluations: 0,
        failed: 0,
    };

    // A pinned box means "evaluate this one profile".
    if boxed.is_collapsed() {
        let x = [
            boxed.a1_um.0,
            boxed.delta1_pct.0,
            boxed.a2_um.0,
            boxed.w_um.0,
        ];
        let achieved = ctx.dispersion_at(&x)?;
        return Ok(FitResult {
            profile: boxed.to_profile(&x)?,
            achieved,
            objective: ctx.objective_of(&achieved),
            evaluations: ctx.evaluations,
            converged: true,
            seed: options.seed,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);

    // Budget 1 on an open box: spend it on a single sampled candidate.
    if ctx.budget == 0 {
        let x = boxed.latin_hypercube(1, &mut rng)[0];
        let achieved = ctx.dispersion_at(&x)?;
        return Ok(FitResult {
            profile: boxed.to_profile(&x)?,
            achieved,
            objective: ctx.objective_of(&achieved),
            evaluations: ctx.evaluations,
            converged: false,
            seed: options.seed,
        });
    }

    let mut best: Option<([f64; 4], f64)> = None;
    let mut best_converged = false;

    'restarts: for restart in 0..options.restarts.max(1) {
        if ctx.remaining() == 0 {
            break;
        }
        let batch_size = ctx.remaining().min(5);
        let batch = boxed.latin_hypercube(batch_size, &mut rng);
        let mut simplex: Vec<([f64; 4], f64)> = batch
            .into_iter()
            .map(|x| {
                let f = ctx.evaluate(&x);
                (x, f)
            })
            .collect();

        if restart == 0 && ctx.failed * 2 > ctx.evaluations {
            return Err(Error::InfeasibleBox {
                failed: ctx.failed,
                attempted: ctx.evaluations,
            });
        }

        let update_best = |best: &mut Option<([f64; 4], f64)>, candidate: &([f64; 4], f64)| {
            if best.as_ref().is_none_or(|(_, f)| candidate.1 < *f) {
                *best = Some(*candidate);
                true
            } else {
                false
            }
        };
        for p in &simplex {
            if update_best(&mut best, p) {
                best_converged = false;
            }
        }
        if simplex.len() < 5 {
            break; // Not enough budget to move a simplex.
        }

        let mut stale = 0u32;
        loop {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let spread = simplex[4].1 - simplex[0].1;
            if spread.is_nan() || spread <= options.tol * (1.0 + simplex[0].1.abs()) {
                if best.as_ref().is_some_and(|(x, _)| *x == simplex[0].0) {
                    best_converged = true;
                }
                continue 'restarts;
            }
            if stale > options.patience || ctx.remaining() == 0 {
                continue 'restarts;
            }

            let mut centroid = [0.0; 4];
            for p in &simplex[..4] {
                for (c, v) in centroid.iter_mut().zip(p.0) {
                    *c += v * 0.25;
                }
            }
            let worst = simplex[4];
            let mut improved = false;

            let mut reflected = [0.0; 4];
            for i in 0..4 {
                reflected[i] = centroid[i] + NM_ALPHA * (centroid[i] - worst.0[i]);
            }
            boxed.clamp(&mut reflected);
            let f_reflected = ctx.evaluate(&reflected);

            if f_reflected < simplex[0].1 && ctx.remaining() > 0 {
                let mut expanded = [0.0; 4];
                for i in 0..4 {
                    expanded[i] = centroid[i] + NM_GAMMA * (centroid[i] - worst.0[i]);
                }
                boxed.clamp(&mut expanded);
                let f_expanded = ctx.evaluate(&expanded);
                simplex[4] = if f_expanded < f_reflected {
                    (expanded, f_expanded)
                } else {
                    (reflected, f_reflected)
                };
                improved = true;
            } else if f_reflected < simplex[3].1 {
                simplex[4] = (reflected, f_reflected);
                improved = f_reflected < simplex[0].1;
            } else if ctx.remaining() > 0 {
                let mut contracted = [0.0; 4];
                for i in 0..4 {
                    contracted[i] = centroid[i] + NM_RHO * (worst.0[i] - centroid[i]);
                }
                boxed.clamp(&mut contracted);
                let f_contracted = ctx.evaluate(&contracted);
                if f_contracted < worst.1 {
                    simplex[4] = (contracted, f_contracted);
                    improved = f_contracted < simplex[0].1;
                } else {
                    // Shrink everything toward the best vertex.
                    for i in 1..5 {
                        if ctx.remaining() == 0 {
                            continue 'restarts;
                        }
                        let mut shrunk = simplex[0].0;
                        for (s, &v) in shrunk.iter_mut().zip(simplex[i].0.iter()) {
                            *s += NM_SIGMA * (v - *s);
                        }
                        boxed.clamp(&mut shrunk);
                        let f_shrunk = ctx.evaluate(&shrunk);
                        simplex[i] = (shrunk, f_shrunk);
                    }
                }
            }

            for p in &simplex {
                if update_best(&mut best, p) {
                    best_converged = false;
                    improved = true;
                }
            }
            stale = if improved { 0 } else { stale + 1 };
        }
    }

    let (best_x, _) = best.ok_or(Error::InfeasibleBox {
        failed: ctx.failed,
        attempted: ctx.evaluations,
    })?;
    // Fresh final evaluation: FitResult.achieved never relies on state
    // cached during the search.
    let achieved = ctx.dispersion_at(&best_x)?;
    Ok(FitResult {
        profile: boxed.to_profile(&best_x)?,
        achieved,
        objective: ctx.objective_of(&achieved),
        evaluations: ctx.evaluations,
        converged: best_converged,
        seed: options.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fbg_multicavity::DEFAULT_GROUP_INDEX;
    use approx::assert_relative_eq;

    #[test]
    fn spacing_inverts_the_fsr_relation() {
        let z = spacing_for_fsr(4.97, DEFAULT_GROUP_INDEX).unwrap();
        assert_relative_eq!(z, 20.542301486346222, max_relative = 1e-12);
        // Round trip through the delay relation.
        let delay = 2.0 * DEFAULT_GROUP_INDEX * z / C_MM_PER_PS;
        assert_relative_eq!(1000.0 / delay, 4.97, max_relative = 1e-9);
    }

    #[test]
    fn doubling_the_fsr_halves_the_spacing_exactly() {
        for fsr in [1.0, 4.97, 12.5, 17.76] {
            let z = spacing_for_fsr(fsr, DEFAULT_GROUP_INDEX).unwrap();
            let z2 = spacing_for_fsr(2.0 * fsr, DEFAULT_GROUP_INDEX).unwrap();
            assert_eq!(z2, z / 2.0);
        }
    }

    #[test]
    fn wavelength_inverts_the_ramp_relation() {
        assert_eq!(
            wavelength_for_fsr_hetero(1.0, 5.0, 1550.0, 20.0).unwrap(),
            1560.0
        );
        assert_eq!(
            wavelength_for_fsr_hetero(1.0, 5.0, 1550.0, 10.0).unwrap(),
            1570.0
        );
        assert_eq!(
            wavelength_for_fsr_hetero(2.0, 5.0, 1550.0, 20.0).unwrap(),
            1555.0
        );
        // A negative step tunes to the blue side.
        assert_eq!(
            wavelength_for_fsr_hetero(-1.0, 5.0, 1550.0, 20.0).unwrap(),
            1540.0
        );
        assert!(wavelength_for_fsr_hetero(0.0, 5.0, 1550.0, 20.0).is_err());
    }

    #[test]
    fn slope_correction_shifts_the_operating_point() {
        let plain = wavelength_for_fsr_hetero(1.0, 5.0, 1550.0, 20.0).unwrap();
        let sloped = wavelength_for_fsr_hetero_with_slope(1.0, 0.01, 5.0, 1550.0, 20.0).unwrap();
        assert_relative_eq!(sloped, 1559.5445115010332, max_relative = 1e-12);
        assert!(sloped < plain, "positive slope reaches the delay earlier");
        // Zero slope reduces to the plain relation bit for bit.
        assert_eq!(
            wavelength_for_fsr_hetero_with_slope(1.0, 0.0, 5.0, 1550.0, 20.0).unwrap(),
            plain
        );
    }

    #[test]
    fn slope_only_ramp_picks_the_red_root() {
        let lambda = wavelength_for_fsr_hetero_with_slope(0.0, 0.02, 5.0, 1550.0, 10.0).unwrap();
        assert_relative_eq!(lambda, 1550.0 + 2000.0f64.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn opposing_slope_can_make_the_target_unreachable() {
        assert!(matches!(
            wavelength_for_fsr_hetero_with_slope(0.1, -0.01, 5.0, 1550.0, 20.0),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn ramp_assignment_hits_exact_endpoints() {
        let cores = assign_core_dispersions(7, 14.75, 1.0, 0.0, 0.0).unwrap();
        assert_eq!(cores.len(), 7);
        assert_eq!(cores[0].d_ps_km_nm, 14.75);
        assert_eq!(cores[6].d_ps_km_nm, 20.75);
        assert!(cores.iter().all(|c| c.relative && c.tau0_ps_km == 0.0));

        let physical = assign_core_dispersions(3, 17.0, 0.5, 4.9e6, 0.06).unwrap();
        assert!(physical.iter().all(|c| !c.relative));
        assert_eq!(physical[2].d_ps_km_nm, 18.0);
    }

    #[test]
    fn ramp_assignment_rejects_nonsense() {
        assert!(matches!(
            assign_core_dispersions(0, 14.75, 1.0, 0.0, 0.0),
            Err(Error::TooFewCores { .. })
        ));
        assert!(assign_core_dispersions(7, f64::NAN, 1.0, 0.0, 0.0).is_err());
        assert!(assign_core_dispersions(7, 14.75, 1.0, -5.0, 0.0).is_err());
    }

    #[test]
    fn search_box_validation_and_clamping() {
        let boxed = ProfileSearchBox::default();
        assert!(!boxed.is_collapsed());
        let mut x = [10.0, 0.001, 3.0, 100.0];
        boxed.clamp(&mut x);
        assert_eq!(x, [4.98, 0.3333, 3.0, 5.41]);

        assert!(
            ProfileSearchBox::new((2.0, 1.0), (0.3, 0.4), (2.0, 3.0), (2.0, 3.0), 1.0).is_err()
        );
        assert!(
            ProfileSearchBox::new((1.0, 2.0), (0.3, 0.4), (2.0, 3.0), (2.0, 3.0), -1.0).is_err()
        );

        let pinned =
            ProfileSearchBox::pinned(&TrenchProfile::new(4.2, 0.36, 3.1, 4.0, 1.0).unwrap())
                .unwrap();
        assert!(pinned.is_collapsed());
    }

    #[test]
    fn latin_hypercube_stratifies_each_dimension() {
        let boxed = ProfileSearchBox::default();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let points = boxed.latin_hypercube(5, &mut rng);
        assert_eq!(points.len(), 5);
        for (dim, (lo, hi)) in boxed.ranges().into_iter().enumerate() {
            let width = (hi - lo) / 5.0;
            let mut strata: Vec<usize> = points
                .iter()
                .map(|p| {
                    assert!(p[dim] >= lo && p[dim] <= hi);
                    (((p[dim] - lo) / width) as usize).min(4)
                })
                .collect();
            strata.sort_unstable();
            assert_eq!(
                strata,
                vec![0, 1, 2, 3, 4],
                "dimension {dim} not stratified"
            );
        }
    }

    fn coarse_fit_options() -> FitOptions {
        FitOptions {
            numerics: SolverNumerics {
                dr_fine_um: 0.05,
                dr_coarse_um: 0.25,
                ..Default::default()
            },
            ..Default::default()
        }
    }

    #[test]
    fn pinned_box_fit_is_a_single_evaluation() {
        let profile = TrenchProfile::new(4.2, 0.36, 3.1, 4.0, 1.0).unwrap();
        let boxed = ProfileSearchBox::pinned(&profile).unwrap();
        let options = coarse_fit_options();
        let radial = RadialIndexProfile::trench_assisted(&profile, fused_silica()).unwrap();
        let direct = dispersion_from_profile(
            &radial,
            options.lambda0_nm,
            options.band,
            options.delta_lambda_nm,
            &options.numerics,
        )
        .unwrap();

        let target = CoreDispersion::relative(direct.d_ps_km_nm, direct.s_ps_km_nm2);
        let fit = fit_profile_to_dispersion(&target, &boxed, &FitWeights::default(), 3, &options)
            .unwrap();
        assert_eq!(fit.evaluations, 1);
        assert!(fit.converged);
        assert_eq!(
            fit.achieved.d_ps_km_nm.to_bits(),
            direct.d_ps_km_nm.to_bits()
        );
        assert!(fit.objective < 1e-20, "objective {}", fit.objective);
        assert_eq!(fit.profile, profile);
    }

    #[test]
    fn fit_replays_bit_identically_for_a_fixed_seed() {
        let target = CoreDispersion::relative(20.0, 0.06);
        let boxed = ProfileSearchBox::default();
        let options = coarse_fit_options();
        let run = || {
            fit_profile_to_dispersion(&target, &boxed, &FitWeights::default(), 12, &options)
                .unwrap()
        };
        let a = run();
        let b = run();
        assert_eq!(a.evaluations, b.evaluations);
        assert_eq!(a.objective.to_bits(), b.objective.to_bits());
        assert_eq!(a.profile, b.profile);
        assert!(a.evaluations <= 12);
    }

    #[test]
    fn fit_reports_infeasible_box_when_evaluations_fail() {
        let target = CoreDispersion::relative(20.0, 0.06);
        let boxed = ProfileSearchBox::default();
        // Inverted grid steps make every solver call fail.
        let options = FitOptions {
            numerics: SolverNumerics {
                dr_fine_um: 0.2,
                dr_coarse_um: 0.1,
                ..Default::default()
            },
            ..Default::default()
        };
        assert!(matches!(
            fit_profile_to_dispersion(&target, &boxed, &FitWeights::default(), 20, &options),
            Err(Error::InfeasibleBox {
                failed: 5,
                attempted: 5
            })
        ));
    }

    #[test]
    fn zero_budget_is_rejected() {
        let target = CoreDispersion::relative(20.0, 0.06);
        assert!(fit_profile_to_dispersion(
            &target,
            &ProfileSearchBox::default(),
            &FitWeights::default(),
            0,
            &coarse_fit_options(),
        )
        .is_err());
    }
}
