//! Built-in example configs, one per job kind plus variants.
//!
//! `--fixtures` writes these into the output directory so a new user can
//! run every kind without composing a config from scratch. The test suite
//! also replays each one twice to pin down byte-identical outputs.

use std::path::Path;

use crate::jobs::CliError;

/// The nine demonstrator gratings: three Bragg wavelengths replicated
/// across three outer-ring cores, staggered 20/21/22 mm within a core and
/// 6/7/8 mm between cores.
const GRATINGS: &str = "\
[grating]
core = 6
lambda_nm = 1537.07
position_mm = 0
reflectivity = 0.1

[grating]
core = 6
lambda_nm = 1541.51
position_mm = 20
reflectivity = 0.1

[grating]
core = 6
lambda_nm = 1546.26
position_mm = 40
reflectivity = 0.1

[grating]
core = 5
lambda_nm = 1537.07
position_mm = 6
reflectivity = 0.1

[grating]
core = 5
lambda_nm = 1541.51
position_mm = 27
reflectivity = 0.1

[grating]
core = 5
lambda_nm = 1546.26
position_mm = 48
reflectivity = 0.1

[grating]
core = 4
lambda_nm = 1537.07
position_mm = 12
reflectivity = 0.1

[grating]
core = 4
lambda_nm = 1541.51
position_mm = 34
reflectivity = 0.1

[grating]
core = 4
lambda_nm = 1546.26
position_mm = 56
reflectivity = 0.1
";

const THREE_TAP_FILTER: &str = "\
# Uniform 3-tap comb: 100 ps spacing gives a 10 GHz free spectral range.
[job]
kind = simulate-filter

[filter]
f_start_ghz = 0
f_stop_ghz = 30
points = 3001

[tap]
delay_ps = 0
amplitude = 1

[tap]
delay_ps = 100
amplitude = 1

[tap]
delay_ps = 200
amplitude = 1
";

const HETERO_SPATIAL_1560: &str = "\
# Seven-core link, 1 ps/(km nm) dispersion step per core: at 10 nm
# detuning the per-core delay increment is 50 ps (20 GHz FSR).
[job]
kind = taps-hetero

[link]
lambda0_nm = 1550
length_km = 5
lambda_m_nm = 1560

[cores]
count = 7
d1_ps_km_nm = 14.75
delta_d_ps_km_nm = 1
";

const HETERO_SPATIAL_1570: &str = "\
# Same link read at 20 nm detuning: 100 ps increment, 10 GHz FSR.
[job]
kind = taps-hetero

[link]
lambda0_nm = 1550
length_km = 5
lambda_m_nm = 1570

[cores]
count = 7
d1_ps_km_nm = 14.75
delta_d_ps_km_nm = 1
";

const HETERO_LINK_CHECK: &str = "\
# Operability check of the uniform-ramp link over the C-band edge.
[job]
kind = validate-hetero

[link]
lambda0_nm = 1550
length_km = 5

[cores]
count = 7
d1_ps_km_nm = 14.75
delta_d_ps_km_nm = 1
s_ps_km_nm2 = 0.06

[band]
min_nm = 1540
max_nm = 1570
";

const SPACING_TARGET: &str = "\
# Grating spacing for a 4.97 GHz free spectral range in silica.
[job]
kind = design-spacing

[target]
fsr_ghz = 4.97
group_index = 1.4682
";

const WAVELENGTH_TARGET: &str = "\
# Readout wavelength that yields a 20 GHz FSR on the demo link.
[job]
kind = design-wavelength

[target]
fsr_ghz = 20

[link]
lambda0_nm = 1550
length_km = 5
delta_d_ps_km_nm = 1
";

const PROFILE_FIT_DEMO: &str = "\
# Short trench-profile fit on a coarse grid; raise the budget and
# tighten [numerics] for production-quality dispersion targets.
[job]
kind = design-profile

[target]
d_ps_km_nm = 23.4
s_ps_km_nm2 = 0.065

[search]
a1_um = 3.8,4.6
delta1_pct = 0.34,0.38
a2_um = 2.6,3.6
w_um = 3.4,4.6
delta2_pct = 1.0
budget = 40

[numerics]
dr_fine_um = 0.05
dr_coarse_um = 0.25
";

const DISPERSION_STEP: &str = "\
# Chromatic dispersion of a plain step-index core at 1550 nm.
[job]
kind = solve-dispersion

[profile]
type = step
a1_um = 4.1
delta1_pct = 0.36
";

/// `(file name, kind, contents)` for every bundled example.
pub fn fixtures() -> Vec<(&'static str, &'static str, String)> {
    let with_gratings = |head: &str, tail: &str| format!("{head}\n{GRATINGS}\n{tail}");
    vec![
        (
            "three_tap_filter.cfg",
            "simulate-filter",
            THREE_TAP_FILTER.into(),
        ),
        (
            "fbg_wavelength_core6.cfg",
            "taps-fbg",
            with_gratings(
                "\
# Wavelength diversity: the three gratings written in core 6, spaced
# 20 mm apart, form a three-tap delay line read out on one core.
[job]
kind = taps-fbg
",
                "\
[select]
mode = wavelength
core = 6
",
            ),
        ),
        (
            "fbg_spatial_lambda1.cfg",
            "taps-fbg",
            with_gratings(
                "\
# Spatial diversity: the first Bragg wavelength appears once per core at
# staggered positions, so the taps come from cores 6, 5, and 4.
[job]
kind = taps-fbg
",
                "\
[select]
mode = spatial
lambda_nm = 1537.07
",
            ),
        ),
        (
            "hetero_spatial_1560.cfg",
            "taps-hetero",
            HETERO_SPATIAL_1560.into(),
        ),
        (
            "hetero_spatial_1570.cfg",
            "taps-hetero",
            HETERO_SPATIAL_1570.into(),
        ),
        (
            "hetero_link_check.cfg",
            "validate-hetero",
            HETERO_LINK_CHECK.into(),
        ),
        (
            "inscription_check.cfg",
            "validate-inscription",
            with_gratings(
                "\
# Manufacturability check of the demonstrator inscription plan.
[job]
kind = validate-inscription
",
                "\
[beam]
width_um = 23
height_um = 40
",
            ),
        ),
        (
            "spacing_target.cfg",
            "design-spacing",
            SPACING_TARGET.into(),
        ),
        (
            "wavelength_target.cfg",
            "design-wavelength",
            WAVELENGTH_TARGET.into(),
        ),
        (
            "profile_fit_demo.cfg",
            "design-profile",
            PROFILE_FIT_DEMO.into(),
        ),
        (
            "dispersion_step.cfg",
            "solve-dispersion",
            DISPERSION_STEP.into(),
        ),
    ]
}

/// Writes every fixture into `out`; returns how many files were written.
pub fn write_all(out: &Path) -> Result<usize, CliError> {
    let all = fixtures();
    for (name, _, contents) in &all {
        let path = out.join(name);
        std::fs::write(&path, contents)
            .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))?;
    }
    Ok(all.len())
}
