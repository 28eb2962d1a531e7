//! Fiber cross-section geometry, trench-assisted index profiles, and
//! per-core dispersion specifications shared by all other modules.
//!
//! Transverse dimensions are in µm, wavelengths in nm, link lengths in km,
//! dispersion in ps/(km·nm), slope in ps/(km·nm²). Units are fixed per
//! field and never inferred.

use crate::report::ValidationReport;
use crate::{Error, Result};

/// Nominal core radius used for clearance checks when no index profile is
/// attached, in µm.
pub const DEFAULT_CORE_RADIUS_UM: f64 = 4.1;

/// Arrangement of cores in the fiber cross-section.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoreLayout {
    /// One core on the fiber axis.
    Single,
    /// One center core plus a hexagonal ring of six, all at the core pitch.
    Hex1Ring,
}

/// Multicore fiber cross-section.
///
/// Core indexing convention: the center core is index 1; outer cores are
/// 2–7 counterclockwise from the +x axis. Device fixtures attach data to
/// explicit indices rather than assuming any vendor numbering.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MCFGeometry {
    pub core_count: u32,
    pub cladding_diameter_um: f64,
    pub core_pitch_um: f64,
    pub layout: CoreLayout,
    pub core_radius_nominal_um: f64,
}

impl MCFGeometry {
    /// The 7-core geometry used by the device fixtures: 125 µm cladding,
    /// 35 µm pitch, hexagonal single-ring layout.
    pub fn seven_core() -> Self {
        Self {
            core_count: 7,
            cladding_diameter_um: 125.0,
            core_pitch_um: 35.0,
            layout: CoreLayout::Hex1Ring,
            core_radius_nominal_um: DEFAULT_CORE_RADIUS_UM,
        }
    }

    /// Single-core geometry with the standard 125 µm cladding.
    pub fn single_core() -> Self {
        Self {
            core_count: 1,
            cladding_diameter_um: 125.0,
            core_pitch_um: 35.0,
            layout: CoreLayout::Single,
            core_radius_nominal_um: DEFAULT_CORE_RADIUS_UM,
        }
    }
}

/// Transverse core centers in µm, deterministically ordered: center core
/// first, then counterclockwise from the +x axis.
pub fn core_positions(geometry: &MCFGeometry) -> Result<Vec<(f64, f64)>> {
    match (geometry.layout, geometry.core_count) {
        (CoreLayout::Single, 1) => Ok(vec![(0.0, 0.0)]),
        (CoreLayout::Hex1Ring, 7) => {
            let mut centers = vec![(0.0, 0.0)];
            for k in 0..6 {
                let angle = k as f64 * std::f64::consts::FRAC_PI_3;
                let (sin, cos) = angle.sin_cos();
                centers.push((geometry.core_pitch_um * cos, geometry.core_pitch_um * sin));
            }
            Ok(centers)
        }
        (layout, n) => Err(Error::UnsupportedLayout(format!(
            "{layout:?} with {n} cores has no defined positions"
        ))),
    }
}

/// Checks every geometry rule and reports each with its measured margin.
///
/// Rules: positive core count, layout/core-count consistency, positive
/// pitch (ring layouts), every core fully inside the cladding (strict), and
/// pairwise center distances at least the pitch.
pub fn validate_geometry(geometry: &MCFGeometry) -> ValidationReport {
    let mut report = ValidationReport::default();

    report.push(
        "core_count_positive",
        geometry.core_count as f64 - 1.0,
        "cores",
        format!("{} cores", geometry.core_count),
    );

    let layout_ok = matches!(
        (geometry.layout, geometry.core_count),
        (CoreLayout::Single, 1) | (CoreLayout::Hex1Ring, 7)
    );
    report.push(
        "layout_core_count",
        if layout_ok { 0.0 } else { -1.0 },
        "",
        format!(
            "{:?} layout with {} cores",
            geometry.layout, geometry.core_count
        ),
    );

    if geometry.layout == CoreLayout::Hex1Ring {
        report.push_checked(
            "pitch_positive",
            geometry.core_pitch_um > 0.0,
            geometry.core_pitch_um,
            "um",
            format!("core pitch {} um", geometry.core_pitch_um),
        );
    }

    if let Ok(centers) = core_positions(geometry) {
        let half_clad = geometry.cladding_diameter_um / 2.0;
        let outer_edge = centers
            .iter()
            .map(|(x, y)| x.hypot(*y) + geometry.core_radius_nominal_um)
            .fold(f64::NEG_INFINITY, f64::max);
        // Strict containment: a core edge touching the cladding edge fails.
        let margin = half_clad - outer_edge;
        report.push_checked(
            "core_within_cladding",
            margin > 0.0,
            margin,
            "um",
            format!("outermost core edge at {outer_edge} um, cladding radius {half_clad} um"),
        );

        if centers.len() > 1 {
            let mut min_dist = f64::INFINITY;
            for i in 0..centers.len() {
                for j in i + 1..centers.len() {
                    let d = (centers[i].0 - centers[j].0).hypot(centers[i].1 - centers[j].1);
                    min_dist = min_dist.min(d);
                }
            }
            // Equality holds for adjacent cores; allow rounding in the trig.
            let slack = 1e-9 * geometry.core_pitch_um.abs();
            report.push(
                "pairwise_pitch",
                min_dist - geometry.core_pitch_um + slack,
                "um",
                format!(
                    "closest centers {min_dist} um apart, pitch {} um",
                    geometry.core_pitch_um
                ),
            );
        }
    }

    report
}

/// Trench-assisted refractive index profile of one core.
///
/// Radially: core `[0, a1]` raised by `delta1` percent over the cladding,
/// inner cladding `(a1, a1+a2]`, trench `(a1+a2, a1+a2+w]` depressed by
/// `delta2` percent, outer cladding beyond.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrenchProfile {
    pub a1_um: f64,
    /// Core-to-cladding relative index difference, percent.
    pub delta1_pct: f64,
    /// Core-to-trench separation, µm.
    pub a2_um: f64,
    /// Trench width, µm.
    pub w_um: f64,
    /// Cladding-to-trench relative index difference, percent.
    pub delta2_pct: f64,
}

impl TrenchProfile {
    pub fn new(
        a1_um: f64,
        delta1_pct: f64,
        a2_um: f64,
        w_um: f64,
        delta2_pct: f64,
    ) -> Result<Self> {
        let p = Self {
            a1_um,
            delta1_pct,
            a2_um,
            w_um,
            delta2_pct,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("a1_um", self.a1_um),
            ("a2_um", self.a2_um),
            ("w_um", self.w_um),
            ("delta1_pct", self.delta1_pct),
            ("delta2_pct", self.delta2_pct),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "trench profile {name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Inner trench radius a1 + a2, µm.
    pub fn trench_start_um(&self) -> f64 {
        self.a1_um + self.a2_um
    }

    /// Outer trench radius a1 + a2 + w, µm.
    pub fn trench_end_um(&self) -> f64 {
        self.a1_um + self.a2_um + self.w_um
    }
}

/// Anchor group delay, chromatic dispersion, and dispersion slope of one
/// core, all per unit length at the anchor wavelength λ0.
///
/// `relative = true` marks the relative-delay convention where `tau0_ps_km`
/// is measured against an arbitrary common reference instead of being the
/// physical group delay (which is ≈ 4.9e6 ps/km in silica and must be
/// positive).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoreDispersion {
    pub tau0_ps_km: f64,
    pub d_ps_km_nm: f64,
    pub s_ps_km_nm2: f64,
    pub relative: bool,
}

impl CoreDispersion {
    /// Physical convention: `tau0` is the absolute group delay, > 0.
    pub fn physical(tau0_ps_km: f64, d_ps_km_nm: f64, s_ps_km_nm2: f64) -> Result<Self> {
        if tau0_ps_km <= 0.0 || tau0_ps_km.is_nan() {
            return Err(Error::InvalidInput(format!(
                "physical anchor delay must be positive, got {tau0_ps_km} ps/km \
                 (use the relative convention for offsets)"
            )));
        }
        Self::checked(tau0_ps_km, d_ps_km_nm, s_ps_km_nm2, false)
    }

    /// Relative convention anchored at zero.
    pub fn relative(d_ps_km_nm: f64, s_ps_km_nm2: f64) -> Self {
        Self {
            tau0_ps_km: 0.0,
            d_ps_km_nm,
            s_ps_km_nm2,
            relative: true,
        }
    }

    /// Relative convention with an explicit anchor-delay offset.
    pub fn relative_with_offset(
        tau0_ps_km: f64,
        d_ps_km_nm: f64,
        s_ps_km_nm2: f64,
    ) -> Result<Self> {
        Self::checked(tau0_ps_km, d_ps_km_nm, s_ps_km_nm2, true)
    }

    fn checked(tau0: f64, d: f64, s: f64, relative: bool) -> Result<Self> {
        for (name, v) in [("tau0_ps_km", tau0), ("d_ps_km_nm", d), ("s_ps_km_nm2", s)] {
            if !v.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "core dispersion {name} must be finite, got {v}"
                )));
            }
        }
        Ok(Self {
            tau0_ps_km: tau0,
            d_ps_km_nm: d,
            s_ps_km_nm2: s,
            relative,
        })
    }
}

/// A heterogeneous MCF link: geometry, anchor wavelength, per-core
/// dispersion triples ordered by core index, and link length.
///
/// Construction enforces the ordering convention that dispersion D is
/// non-decreasing in the core index — the arrangement that turns a
/// wavelength detuning into uniformly spaced, ascending tap delays.
#[derive(Debug, Clone, PartialEq)]
pub struct HeteroMCFSpec {
    pub geometry: MCFGeometry,
    pub lambda0_nm: f64,
    cores: Vec<CoreDispersion>,
    pub length_km: f64,
}

impl HeteroMCFSpec {
    pub fn new(
        geometry: MCFGeometry,
        lambda0_nm: f64,
        cores: Vec<CoreDispersion>,
        length_km: f64,
    ) -> Result<Self> {
        if cores.len() != geometry.core_count as usize {
            return Err(Error::InvalidInput(format!(
                "spec lists {} cores but the geometry has {}",
                cores.len(),
                geometry.core_count
            )));
        }
        if !(length_km > 0.0 && length_km.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "link length must be positive and finite, got {length_km} km"
            )));
        }
        if !(lambda0_nm > 0.0 && lambda0_nm.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "anchor wavelength must be positive and finite, got {lambda0_nm} nm"
            )));
        }
        for pair in cores.windows(2) {
            if pair[1].d_ps_km_nm < pair[0].d_ps_km_nm {
                return Err(Error::InvalidInput(format!(
                    "dispersion must be non-decreasing by core index, got {} after {} ps/(km nm)",
                    pair[1].d_ps_km_nm, pair[0].d_ps_km_nm
                )));
            }
        }
        if cores.windows(2).any(|p| p[0].relative != p[1].relative) {
            return Err(Error::InvalidInput(
                "cores mix the physical and relative anchor-delay conventions".into(),
            ));
        }
        Ok(Self {
            geometry,
            lambda0_nm,
            cores,
            length_km,
        })
    }

    pub fn cores(&self) -> &[CoreDispersion] {
        &self.cores
    }

    pub fn core_count(&self) -> usize {
        self.cores.len()
    }
}
