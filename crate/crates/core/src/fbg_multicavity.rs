//! FBG-based multicavity devices: arrays of weak gratings inscribed at
//! chosen positions in chosen cores of a homogeneous multicore fiber.
//!
//! A grating at position z reflects a tap whose round-trip delay is
//! 2·n_g·z/c. Two sampling schemes give taps:
//!
//! * **wavelength diversity** — one core, gratings at different Bragg
//!   wavelengths; each wavelength selects one cavity mirror.
//! * **spatial diversity** — one Bragg wavelength, matching gratings in
//!   different cores; fan-in combines the per-core reflections.
//!
//! Tap amplitude follows the weak-grating cascade model: the matched
//! grating contributes √R and every grating closer to the launch end in
//! the same core transmits a factor (1−R_j), independent of wavelength.

use std::collections::BTreeSet;

use crate::mcf_model::MCFGeometry;
use crate::report::ValidationReport;
use crate::taps::{Tap, TapSet};
use crate::{Error, Result, C_MM_PER_PS};

/// Group index of the germanosilicate cores used when nothing better is
/// known; dispersion-fitted values override it.
pub const DEFAULT_GROUP_INDEX: f64 = 1.4682;

/// Default minimum Bragg-wavelength separation between gratings sharing a
/// core, nm. Closer than this and their reflection bands overlap.
pub const DEFAULT_WAVELENGTH_GUARD_NM: f64 = 1.0;

/// Default |λ − λ_B| matching window for spatial-diversity extraction, nm.
pub const DEFAULT_MATCHING_TOLERANCE_NM: f64 = 0.25;

/// One uniform FBG inscribed in one core.
#[derive(Debug, Clone, PartialEq)]
pub struct FBG {
    /// 1-based core id; core 1 is the central core of a hex layout.
    pub core_id: u32,
    pub bragg_wavelength_nm: f64,
    /// Distance from the launch-end facet to the grating start, mm.
    pub position_mm: f64,
    /// Peak power reflectivity, in [0, 1).
    pub reflectivity: f64,
    pub grating_length_mm: f64,
}

impl FBG {
    pub fn new(
        core_id: u32,
        bragg_wavelength_nm: f64,
        position_mm: f64,
        reflectivity: f64,
        grating_length_mm: f64,
    ) -> Result<Self> {
        if !(bragg_wavelength_nm.is_finite() && bragg_wavelength_nm > 0.0) {
            return Err(Error::InvalidInput(format!(
                "Bragg wavelength must be positive, got {bragg_wavelength_nm} nm"
            )));
        }
        if !(position_mm.is_finite() && position_mm >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "grating position must be non-negative, got {position_mm} mm"
            )));
        }
        if !(reflectivity.is_finite() && (0.0..1.0).contains(&reflectivity)) {
            return Err(Error::InvalidInput(format!(
                "reflectivity must lie in [0, 1), got {reflectivity}"
            )));
        }
        if !(grating_length_mm.is_finite() && grating_length_mm > 0.0) {
            return Err(Error::InvalidInput(format!(
                "grating length must be positive, got {grating_length_mm} mm"
            )));
        }
        Ok(Self {
            core_id,
            bragg_wavelength_nm,
            position_mm,
            reflectivity,
            grating_length_mm,
        })
    }
}

/// Peak reflectivity of a uniform grating from coupled-mode theory,
/// R = tanh²(κL).
pub fn uniform_fbg_reflectivity(kappa_per_mm: f64, grating_length_mm: f64) -> Result<f64> {
    if !(kappa_per_mm.is_finite() && kappa_per_mm >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "coupling coefficient must be non-negative, got {kappa_per_mm} /mm"
        )));
    }
    if !(grating_length_mm.is_finite() && grating_length_mm > 0.0) {
        return Err(Error::InvalidInput(format!(
            "grating length must be positive, got {grating_length_mm} mm"
        )));
    }
    Ok((kappa_per_mm * grating_length_mm).tanh().powi(2))
}

/// A grating array in one fiber: geometry plus the inscription list.
///
/// Construction sorts gratings by (core, position) and checks per-grating
/// field sanity; whether neighbors overlap or crowd in wavelength is the
/// job of [`validate_inscription_plan`], which reports rather than rejects.
#[derive(Debug, Clone, PartialEq)]
pub struct MulticavityDevice {
    pub geometry: MCFGeometry,
    gratings: Vec<FBG>,
    pub group_index: f64,
    pub wavelength_guard_nm: f64,
}

impl MulticavityDevice {
    pub fn new(geometry: MCFGeometry, mut gratings: Vec<FBG>, group_index: f64) -> Result<Self> {
        if gratings.is_empty() {
            return Err(Error::InvalidInput("device has no gratings".into()));
        }
        if !(group_index.is_finite() && group_index > 1.0) {
            return Err(Error::InvalidInput(format!(
                "group index must exceed 1, got {group_index}"
            )));
        }
        for g in &gratings {
            if g.core_id == 0 || g.core_id > geometry.core_count {
                return Err(Error::UnknownCore(g.core_id));
            }
        }
        gratings.sort_by(|a, b| {
            a.core_id
                .cmp(&b.core_id)
                .then(a.position_mm.total_cmp(&b.position_mm))
        });
        Ok(Self {
            geometry,
            gratings,
            group_index,
            wavelength_guard_nm: DEFAULT_WAVELENGTH_GUARD_NM,
        })
    }

    pub fn with_wavelength_guard(mut self, guard_nm: f64) -> Result<Self> {
        if !(guard_nm.is_finite() && guard_nm >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "wavelength guard must be non-negative, got {guard_nm} nm"
            )));
        }
        self.wavelength_guard_nm = guard_nm;
        Ok(self)
    }

    /// Gratings sorted by (core, position).
    pub fn gratings(&self) -> &[FBG] {
        &self.gratings
    }

    /// Core ids that contain at least one grating, ascending.
    pub fn cores_with_gratings(&self) -> Vec<u32> {
        self.gratings
            .iter()
            .map(|g| g.core_id)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    fn round_trip_delay_ps(&self, position_mm: f64) -> f64 {
        2.0 * self.group_index * position_mm / C_MM_PER_PS
    }

    /// Amplitude of the tap reflected by `gratings[idx]`: √R through the
    /// transmission of every same-core grating nearer the launch end.
    fn tap_amplitude(&self, idx: usize) -> f64 {
        let g = &self.gratings[idx];
        let mut amp = g.reflectivity.sqrt();
        for other in &self.gratings[..idx] {
            if other.core_id == g.core_id {
                amp *= 1.0 - other.reflectivity;
            }
        }
        amp
    }
}

/// Taps of one core sampled by wavelength diversity: every grating in
/// `core_id` contributes one tap at its own Bragg wavelength.
pub fn tap_set_wavelength_diversity(device: &MulticavityDevice, core_id: u32) -> Result<TapSet> {
    if core_id == 0 || core_id > device.geometry.core_count {
        return Err(Error::UnknownCore(core_id));
    }
    let taps: Vec<Tap> = device
        .gratings
        .iter()
        .enumerate()
        .filter(|(_, g)| g.core_id == core_id)
        .map(|(i, g)| {
            Tap::labeled(
                device.round_trip_delay_ps(g.position_mm),
                device.tap_amplitude(i),
                format!("core{}@{}nm", g.core_id, g.bragg_wavelength_nm),
            )
        })
        .collect();
    if taps.is_empty() {
        return Err(Error::EmptyCore(core_id));
    }
    TapSet::with_label(taps, format!("wavelength diversity core {core_id}"))
}

/// Taps sampled by spatial diversity: per core, the gratings whose Bragg
/// wavelength lies within `matching_tolerance_nm` of `bragg_wavelength_nm`.
pub fn tap_set_spatial_diversity(
    device: &MulticavityDevice,
    bragg_wavelength_nm: f64,
    matching_tolerance_nm: f64,
) -> Result<TapSet> {
    if !(matching_tolerance_nm.is_finite() && matching_tolerance_nm >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "matching tolerance must be non-negative, got {matching_tolerance_nm} nm"
        )));
    }
    let taps: Vec<Tap> = device
        .gratings
        .iter()
        .enumerate()
        .filter(|(_, g)| {
            (g.bragg_wavelength_nm - bragg_wavelength_nm).abs() <= matching_tolerance_nm
        })
        .map(|(i, g)| {
            Tap::labeled(
                device.round_trip_delay_ps(g.position_mm),
                device.tap_amplitude(i),
                format!("core{}@{}nm", g.core_id, g.bragg_wavelength_nm),
            )
        })
        .collect();
    if taps.is_empty() {
        return Err(Error::NoMatchingGratings {
            wavelength_nm: bragg_wavelength_nm,
            tolerance_nm: matching_tolerance_nm,
        });
    }
    TapSet::with_label(
        taps,
        format!("spatial diversity at {bragg_wavelength_nm} nm"),
    )
}

/// The 9-grating demonstrator: three Bragg wavelengths replicated across
/// three outer-ring cores of a 7-core fiber, staggered so that wavelength
/// diversity gives per-core cavity lengths of 20/21/22 mm and spatial
/// diversity gives inter-core offsets of 6/7/8 mm.
pub fn reference_device() -> MulticavityDevice {
    reference_device_with(DEFAULT_GROUP_INDEX)
}

/// [`reference_device`] with an explicit group index.
pub fn reference_device_with(group_index: f64) -> MulticavityDevice {
    const LAMBDAS_NM: [f64; 3] = [1537.07, 1541.51, 1546.26];
    // (core, wavelength index, position mm)
    const PLACEMENTS: [(u32, usize, f64); 9] = [
        (6, 0, 0.0),
        (6, 1, 20.0),
        (6, 2, 40.0),
        (5, 0, 6.0),
        (5, 1, 27.0),
        (5, 2, 48.0),
        (4, 0, 12.0),
        (4, 1, 34.0),
        (4, 2, 56.0),
    ];
    let gratings = PLACEMENTS
        .iter()
        .map(|&(core, li, z)| FBG::new(core, LAMBDAS_NM[li], z, 0.1, 2.0).unwrap())
        .collect();
    MulticavityDevice::new(MCFGeometry::seven_core(), gratings, group_index)
        .expect("reference placements are valid")
}

/// Femtosecond inscription beam cross-section at the core plane, µm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSettings {
    pub width_um: f64,
    pub height_um: f64,
}

impl Default for BeamSettings {
    fn default() -> Self {
        Self {
            width_um: 23.0,
            height_um: 40.0,
        }
    }
}

/// Manufacturability limits for core-selective phase-mask inscription.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InscriptionConstraints {
    /// Widest beam that still addresses one core of the target pitch, µm.
    pub beam_width_max_um: f64,
    pub beam_height_min_um: f64,
    pub beam_height_max_um: f64,
    /// Nominal phase-mask period, nm; recorded in reports, not checked.
    pub phase_mask_period_nm: f64,
}

impl Default for InscriptionConstraints {
    fn default() -> Self {
        Self {
            beam_width_max_um: 23.0,
            beam_height_min_um: 30.0,
            beam_height_max_um: 50.0,
            phase_mask_period_nm: 1070.0,
        }
    }
}

/// Checks that a device can actually be written grating by grating:
/// the beam fits one core, its height stays within the working range,
/// same-core gratings do not overlap longitudinally, and same-core Bragg
/// wavelengths keep the device's guard separation.
pub fn validate_inscription_plan(
    device: &MulticavityDevice,
    beam: &BeamSettings,
    constraints: &InscriptionConstraints,
) -> ValidationReport {
    let mut report = ValidationReport::default();

    report.push(
        "single_core_addressability",
        constraints.beam_width_max_um - beam.width_um,
        "um",
        format!(
            "beam width {} um against single-core limit {} um (pitch {} um)",
            beam.width_um, constraints.beam_width_max_um, device.geometry.core_pitch_um
        ),
    );

    let height_margin = (beam.height_um - constraints.beam_height_min_um)
        .min(constraints.beam_height_max_um - beam.height_um);
    report.push(
        "beam_height_range",
        height_margin,
        "um",
        format!(
            "beam height {} um inside [{}, {}] um",
            beam.height_um, constraints.beam_height_min_um, constraints.beam_height_max_um
        ),
    );

    // Longitudinal clearance between consecutive gratings of one core.
    let mut overlap_margin = f64::INFINITY;
    let mut worst_pair = String::from("no same-core grating pairs");
    for w in device.gratings.windows(2) {
        if w[0].core_id != w[1].core_id {
            continue;
        }
        let gap = w[1].position_mm - w[0].position_mm - w[0].grating_length_mm;
        if gap < overlap_margin {
            overlap_margin = gap;
            worst_pair = format!(
                "core {} gratings at {} mm and {} mm (length {} mm)",
                w[0].core_id, w[0].position_mm, w[1].position_mm, w[0].grating_length_mm
            );
        }
    }
    report.push("grating_overlap", overlap_margin, "mm", worst_pair);

    // Bragg separation among gratings sharing a core.
    let mut guard_margin = f64::INFINITY;
    let mut worst_guard = String::from("no same-core grating pairs");
    for (i, a) in device.gratings.iter().enumerate() {
        for b in &device.gratings[i + 1..] {
            if a.core_id != b.core_id {
                continue;
            }
            let sep =
                (a.bragg_wavelength_nm - b.bragg_wavelength_nm).abs() - device.wavelength_guard_nm;
            if sep < guard_margin {
                guard_margin = sep;
                worst_guard = format!(
                    "core {} wavelengths {} nm and {} nm (guard {} nm)",
                    a.core_id,
                    a.bragg_wavelength_nm,
                    b.bragg_wavelength_nm,
                    device.wavelength_guard_nm
                );
            }
        }
    }
    report.push("wavelength_guard_band", guard_margin, "nm", worst_guard);

    report
}
