//! One runner per job kind: schema table, engine calls, output files.
//!
//! Every runner takes the parsed config plus the output directory and
//! returns a one-line summary for stderr. Validation kinds write their
//! report file before failing, so a nonzero exit still leaves the full
//! rule-by-rule picture on disk.

use std::fmt;
use std::fs;
use std::path::Path;

use mcf_ttdl_core::design::{
    assign_core_dispersions, fit_profile_to_dispersion, spacing_for_fsr,
    wavelength_for_fsr_hetero_with_slope, FitOptions, FitWeights, ProfileSearchBox,
};
use mcf_ttdl_core::fbg_multicavity::{
    tap_set_spatial_diversity, tap_set_wavelength_diversity, validate_inscription_plan,
    BeamSettings, InscriptionConstraints, MulticavityDevice, DEFAULT_GROUP_INDEX,
    DEFAULT_MATCHING_TOLERANCE_NM, DEFAULT_WAVELENGTH_GUARD_NM, FBG,
};
use mcf_ttdl_core::hetero_delay::{tap_set_spatial, validate_hetero_spec, HeteroTolerances};
use mcf_ttdl_core::mode_solver::{
    dispersion_from_profile, fused_silica, solve_lp01, RadialIndexProfile, SolverNumerics,
};
use mcf_ttdl_core::rf_filter::{
    fsr_estimate, response_metrics, transfer_function_threaded, FsrMethod,
};
use mcf_ttdl_core::{CoreDispersion, HeteroMCFSpec, MCFGeometry, Tap, TapSet, TrenchProfile};

use crate::config::{parse_config, Config, ConfigError, JobSchema, ParsedSection, SectionSchema};
use crate::emit::{response_csv, taps_csv, Record};

/// Failure classes in exit-code order: validation 1, bad input 2, I/O 3.
#[derive(Debug)]
pub enum CliError {
    /// A requested check failed; the report file is already on disk.
    Validation(String),
    /// Config, flag, or engine rejection — the run never started.
    Input(String),
    /// Filesystem trouble reading the config or writing outputs.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Input(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(msg) => write!(f, "validation failed: {msg}"),
            CliError::Input(msg) => write!(f, "config error: {msg}"),
            CliError::Io(msg) => write!(f, "io error: {msg}"),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<mcf_ttdl_core::Error> for CliError {
    fn from(e: mcf_ttdl_core::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

const fn sec(
    name: &'static str,
    required: bool,
    repeatable: bool,
    required_keys: &'static [&'static str],
    optional_keys: &'static [&'static str],
) -> SectionSchema {
    SectionSchema {
        name,
        required,
        repeatable,
        required_keys,
        optional_keys,
    }
}

const JOB: SectionSchema = sec("job", true, false, &["kind"], &[]);

const NUMERICS: SectionSchema = sec(
    "numerics",
    false,
    false,
    &[],
    &[
        "dr_fine_um",
        "fine_margin_um",
        "dr_coarse_um",
        "domain_factor",
        "bc_refinements",
    ],
);

const STENCIL: SectionSchema = sec(
    "stencil",
    false,
    false,
    &[],
    &[
        "lambda0_nm",
        "band_min_nm",
        "band_max_nm",
        "delta_lambda_nm",
    ],
);

const DEVICE: SectionSchema = sec(
    "device",
    false,
    false,
    &[],
    &["group_index", "pitch_um", "wavelength_guard_nm"],
);

const GRATING: SectionSchema = sec(
    "grating",
    true,
    true,
    &["core", "lambda_nm", "position_mm", "reflectivity"],
    &["grating_length_mm"],
);

static SCHEMAS: &[JobSchema] = &[
    JobSchema {
        kind: "simulate-filter",
        sections: &[
            JOB,
            sec(
                "filter",
                true,
                false,
                &["f_start_ghz", "f_stop_ghz", "points"],
                &[],
            ),
            sec("tap", true, true, &["delay_ps", "amplitude"], &["label"]),
        ],
    },
    JobSchema {
        kind: "taps-fbg",
        sections: &[
            JOB,
            DEVICE,
            GRATING,
            sec(
                "select",
                true,
                false,
                &["mode"],
                &["core", "lambda_nm", "matching_tolerance_nm"],
            ),
        ],
    },
    JobSchema {
        kind: "taps-hetero",
        sections: &[
            JOB,
            sec(
                "link",
                true,
                false,
                &["lambda0_nm", "length_km", "lambda_m_nm"],
                &[],
            ),
            sec(
                "cores",
                true,
                false,
                &["count", "d1_ps_km_nm", "delta_d_ps_km_nm"],
                &["s_ps_km_nm2", "tau0_ps_km", "weights"],
            ),
        ],
    },
    JobSchema {
        kind: "validate-hetero",
        sections: &[
            JOB,
            sec("link", true, false, &["lambda0_nm", "length_km"], &[]),
            sec(
                "cores",
                true,
                false,
                &["count", "d1_ps_km_nm", "delta_d_ps_km_nm"],
                &["s_ps_km_nm2", "tau0_ps_km"],
            ),
            sec("band", true, false, &["min_nm", "max_nm"], &[]),
            sec(
                "tolerances",
                false,
                false,
                &[],
                &[
                    "anchor_spread_max_ps",
                    "delta_d_rel_max",
                    "slope_variation_max_ps_km_nm2",
                    "quadratic_fraction_max",
                ],
            ),
        ],
    },
    JobSchema {
        kind: "validate-inscription",
        sections: &[
            JOB,
            DEVICE,
            GRATING,
            sec("beam", true, false, &["width_um", "height_um"], &[]),
            sec(
                "constraints",
                false,
                false,
                &[],
                &[
                    "beam_width_max_um",
                    "beam_height_min_um",
                    "beam_height_max_um",
                    "phase_mask_period_nm",
                ],
            ),
        ],
    },
    JobSchema {
        kind: "design-spacing",
        sections: &[
            JOB,
            sec("target", true, false, &["fsr_ghz"], &["group_index"]),
        ],
    },
    JobSchema {
        kind: "design-wavelength",
        sections: &[
            JOB,
            sec("target", true, false, &["fsr_ghz"], &[]),
            sec(
                "link",
                true,
                false,
                &["lambda0_nm", "length_km", "delta_d_ps_km_nm"],
                &["delta_s_ps_km_nm2"],
            ),
        ],
    },
    JobSchema {
        kind: "design-profile",
        sections: &[
            JOB,
            sec(
                "target",
                true,
                false,
                &["d_ps_km_nm", "s_ps_km_nm2"],
                &["tau0_ps_km"],
            ),
            sec(
                "search",
                true,
                false,
                &[
                    "a1_um",
                    "delta1_pct",
                    "a2_um",
                    "w_um",
                    "delta2_pct",
                    "budget",
                ],
                &["seed", "restarts", "patience", "tol"],
            ),
            sec("weights", false, false, &[], &["tau0", "d", "s"]),
            NUMERICS,
            STENCIL,
        ],
    },
    JobSchema {
        kind: "solve-dispersion",
        sections: &[
            JOB,
            sec(
                "profile",
                true,
                false,
                &["type", "a1_um", "delta1_pct"],
                &["a2_um", "w_um", "delta2_pct"],
            ),
            NUMERICS,
            STENCIL,
        ],
    },
];

pub fn schema_for(kind: &str) -> &'static JobSchema {
    SCHEMAS
        .iter()
        .find(|s| s.kind == kind)
        .unwrap_or_else(|| panic!("no schema registered for kind '{kind}'"))
}

/// Parses `text` against the schema for `kind` and runs the job, writing
/// output files into `out`. Returns the one-line summary.
pub fn run(kind: &str, text: &str, out: &Path, threads: usize) -> Result<String, CliError> {
    let config = parse_config(text, schema_for(kind))?;
    match kind {
        "simulate-filter" => simulate_filter(&config, out, threads),
        "taps-fbg" => taps_fbg(&config, out),
        "taps-hetero" => taps_hetero(&config, out),
        "validate-hetero" => validate_hetero(&config, out),
        "validate-inscription" => validate_inscription(&config, out),
        "design-spacing" => design_spacing(&config, out),
        "design-wavelength" => design_wavelength(&config, out),
        "design-profile" => design_profile(&config, out, threads),
        "solve-dispersion" => solve_dispersion(&config, out, threads),
        other => panic!("no runner registered for kind '{other}'"),
    }
}

fn write_out(out: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    let path = out.join(name);
    fs::write(&path, contents).map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))
}

fn simulate_filter(config: &Config, out: &Path, threads: usize) -> Result<String, CliError> {
    let filter = config.require("filter")?;
    let f_start = filter.f64("f_start_ghz")?;
    let f_stop = filter.f64("f_stop_ghz")?;
    let points = filter.usize("points")?;

    let mut taps = Vec::new();
    for section in config.sections_named("tap") {
        taps.push(Tap::labeled(
            section.f64("delay_ps")?,
            section.f64("amplitude")?,
            section.str_or("label", ""),
        ));
    }
    let taps = TapSet::new(taps)?;
    let resp = transfer_function_threaded(&taps, f_start, f_stop, points, threads)?;
    write_out(out, "response.csv", &response_csv("simulate-filter", &resp))?;

    let mut rec = Record::new("simulate-filter");
    rec.push("tap_count", taps.len());
    rec.push("amplitude_sum", taps.amplitude_sum());
    match fsr_estimate(&taps) {
        Ok(est) => {
            rec.push("fsr_ghz", est.fsr_ghz);
            rec.push(
                "fsr_method",
                match est.method {
                    FsrMethod::Analytic => "analytic",
                    FsrMethod::Spectral => "spectral",
                },
            );
        }
        Err(e) => {
            rec.push("fsr_ghz", "unavailable");
            rec.push("fsr_note", e);
        }
    }
    match response_metrics(&resp) {
        Ok(m) => {
            match m.sidelobe_level_db {
                Some(db) => rec.push("sidelobe_level_db", db),
                None => rec.push("sidelobe_level_db", "none"),
            };
            rec.push("bandwidth_3db_ghz", m.bandwidth_3db_ghz);
            rec.push("null_depth_db", m.null_depth_db);
        }
        Err(e) => {
            rec.push("metrics", "unavailable");
            rec.push("metrics_note", e);
        }
    }
    write_out(out, "metrics.txt", &rec.finish())?;
    Ok(format!(
        "ok taps={} points={points} -> response.csv metrics.txt",
        taps.len()
    ))
}

/// Shared by taps-fbg and validate-inscription: [device] overrides plus
/// the [grating] list, assembled on the 7-core layout.
fn device_from(config: &Config) -> Result<MulticavityDevice, CliError> {
    let mut group_index = DEFAULT_GROUP_INDEX;
    let mut guard_nm = DEFAULT_WAVELENGTH_GUARD_NM;
    let mut geometry = MCFGeometry::seven_core();
    if let Some(device) = config.section("device") {
        group_index = device.f64_or("group_index", group_index)?;
        guard_nm = device.f64_or("wavelength_guard_nm", guard_nm)?;
        geometry.core_pitch_um = device.f64_or("pitch_um", geometry.core_pitch_um)?;
    }
    let mut gratings = Vec::new();
    for section in config.sections_named("grating") {
        gratings.push(FBG::new(
            section.u32("core")?,
            section.f64("lambda_nm")?,
            section.f64("position_mm")?,
            section.f64("reflectivity")?,
            section.f64_or("grating_length_mm", 2.0)?,
        )?);
    }
    Ok(MulticavityDevice::new(geometry, gratings, group_index)?.with_wavelength_guard(guard_nm)?)
}

fn taps_fbg(config: &Config, out: &Path) -> Result<String, CliError> {
    let device = device_from(config)?;
    let select = config.require("select")?;
    let mode = select.str("mode")?;
    let (taps, detail) = match mode {
        "wavelength" => {
            let core = require_for_mode(select, "core", mode)?.u32("core")?;
            (
                tap_set_wavelength_diversity(&device, core)?,
                format!("mode=wavelength core={core}"),
            )
        }
        "spatial" => {
            let lambda = require_for_mode(select, "lambda_nm", mode)?.f64("lambda_nm")?;
            let tol = select.f64_or("matching_tolerance_nm", DEFAULT_MATCHING_TOLERANCE_NM)?;
            (
                tap_set_spatial_diversity(&device, lambda, tol)?,
                format!("mode=spatial lambda_nm={lambda}"),
            )
        }
        other => {
            return Err(CliError::Input(format!(
                "key 'mode' in [select] must be 'wavelength' or 'spatial', got '{other}'"
            )))
        }
    };
    write_out(out, "taps.csv", &taps_csv("taps-fbg", &taps))?;
    Ok(format!("ok taps={} {detail} -> taps.csv", taps.len()))
}

/// Mode-conditional requirement: schema marks the key optional, the mode
/// makes it mandatory.
fn require_for_mode<'a>(
    select: &'a ParsedSection,
    key: &str,
    mode: &str,
) -> Result<&'a ParsedSection, CliError> {
    if select.has(key) {
        Ok(select)
    } else {
        Err(CliError::Input(format!(
            "missing key '{key}' in [select]: required when mode = {mode}"
        )))
    }
}

/// Shared by taps-hetero and validate-hetero: the [cores] ramp on a
/// built-in geometry (core count 1 or 7).
fn hetero_spec_from(
    config: &Config,
    lambda0_nm: f64,
    length_km: f64,
) -> Result<HeteroMCFSpec, CliError> {
    let cores = config.require("cores")?;
    let count = cores.u32("count")?;
    let geometry = match count {
        1 => MCFGeometry::single_core(),
        7 => MCFGeometry::seven_core(),
        other => {
            return Err(CliError::Input(format!(
                "key 'count' in [cores] must be 1 or 7 (the built-in geometries), got {other}"
            )))
        }
    };
    let dispersions = assign_core_dispersions(
        count,
        cores.f64("d1_ps_km_nm")?,
        cores.f64("delta_d_ps_km_nm")?,
        cores.f64_or("tau0_ps_km", 0.0)?,
        cores.f64_or("s_ps_km_nm2", 0.0)?,
    )?;
    Ok(HeteroMCFSpec::new(
        geometry,
        lambda0_nm,
        dispersions,
        length_km,
    )?)
}

fn taps_hetero(config: &Config, out: &Path) -> Result<String, CliError> {
    let link = config.require("link")?;
    let lambda0 = link.f64("lambda0_nm")?;
    let length = link.f64("length_km")?;
    let lambda_m = link.f64("lambda_m_nm")?;
    let spec = hetero_spec_from(config, lambda0, length)?;

    let cores = config.require("cores")?;
    let weights = if cores.has("weights") {
        let w = cores.f64_list("weights")?;
        if w.len() != spec.geometry.core_count as usize {
            return Err(CliError::Input(format!(
                "key 'weights' in [cores] must list {} values (one per core), got {}",
                spec.geometry.core_count,
                w.len()
            )));
        }
        w
    } else {
        vec![1.0; spec.geometry.core_count as usize]
    };

    let taps = tap_set_spatial(&spec, lambda_m, &weights)?;
    write_out(out, "taps.csv", &taps_csv("taps-hetero", &taps))?;
    Ok(format!(
        "ok taps={} lambda_m_nm={lambda_m} -> taps.csv",
        taps.len()
    ))
}

fn validate_hetero(config: &Config, out: &Path) -> Result<String, CliError> {
    let link = config.require("link")?;
    let lambda0 = link.f64("lambda0_nm")?;
    let length = link.f64("length_km")?;
    let spec = hetero_spec_from(config, lambda0, length)?;

    let band_section = config.require("band")?;
    let band = (band_section.f64("min_nm")?, band_section.f64("max_nm")?);

    let mut tol = HeteroTolerances::default();
    if let Some(section) = config.section("tolerances") {
        tol.anchor_spread_max_ps =
            section.f64_or("anchor_spread_max_ps", tol.anchor_spread_max_ps)?;
        tol.delta_d_rel_max = section.f64_or("delta_d_rel_max", tol.delta_d_rel_max)?;
        tol.slope_variation_max_ps_km_nm2 = section.f64_or(
            "slope_variation_max_ps_km_nm2",
            tol.slope_variation_max_ps_km_nm2,
        )?;
        tol.quadratic_fraction_max =
            section.f64_or("quadratic_fraction_max", tol.quadratic_fraction_max)?;
    }

    let report = validate_hetero_spec(&spec, band, &tol)?;
    let mut rec = Record::new("validate-hetero");
    rec.push("pass", report.pass);
    rec.push("band_nm", format!("{},{}", band.0, band.1));
    rec.push("anchor_delay_spread_ps", report.anchor_delay_spread_ps);
    rec.push_list("delta_d_values_ps_km_nm", &report.delta_d_values_ps_km_nm);
    rec.push(
        "delta_d_max_deviation_ps_km_nm",
        report.delta_d_max_deviation_ps_km_nm,
    );
    rec.push(
        "slope_variation_max_ps_km_nm2",
        report.slope_variation_max_ps_km_nm2,
    );
    rec.push("quadratic_fraction_max", report.quadratic_fraction_max);
    rec.push("tol_anchor_spread_max_ps", tol.anchor_spread_max_ps);
    rec.push("tol_delta_d_rel_max", tol.delta_d_rel_max);
    rec.push(
        "tol_slope_variation_max_ps_km_nm2",
        tol.slope_variation_max_ps_km_nm2,
    );
    rec.push("tol_quadratic_fraction_max", tol.quadratic_fraction_max);
    write_out(out, "report.txt", &rec.finish())?;

    if report.pass {
        Ok("ok pass -> report.txt".into())
    } else {
        Err(CliError::Validation(
            "link is outside operability tolerances (report.txt written)".into(),
        ))
    }
}

fn validate_inscription(config: &Config, out: &Path) -> Result<String, CliError> {
    let device = device_from(config)?;
    let beam_section = config.require("beam")?;
    let beam = BeamSettings {
        width_um: beam_section.f64("width_um")?,
        height_um: beam_section.f64("height_um")?,
    };
    let mut constraints = InscriptionConstraints::default();
    if let Some(section) = config.section("constraints") {
        constraints.beam_width_max_um =
            section.f64_or("beam_width_max_um", constraints.beam_width_max_um)?;
        constraints.beam_height_min_um =
            section.f64_or("beam_height_min_um", constraints.beam_height_min_um)?;
        constraints.beam_height_max_um =
            section.f64_or("beam_height_max_um", constraints.beam_height_max_um)?;
        constraints.phase_mask_period_nm =
            section.f64_or("phase_mask_period_nm", constraints.phase_mask_period_nm)?;
    }

    let report = validate_inscription_plan(&device, &beam, &constraints);
    let mut rec = Record::new("validate-inscription");
    rec.push_rule_checks(&report);
    write_out(out, "report.txt", &rec.finish())?;

    if report.pass() {
        Ok("ok pass -> report.txt".into())
    } else {
        let first = report
            .violations()
            .next()
            .map(|c| c.rule.clone())
            .unwrap_or_default();
        Err(CliError::Validation(format!(
            "{first} violated (report.txt written)"
        )))
    }
}

fn design_spacing(config: &Config, out: &Path) -> Result<String, CliError> {
    let target = config.require("target")?;
    let fsr = target.f64("fsr_ghz")?;
    let group_index = target.f64_or("group_index", DEFAULT_GROUP_INDEX)?;
    let spacing = spacing_for_fsr(fsr, group_index)?;

    let mut rec = Record::new("design-spacing");
    rec.push("target_fsr_ghz", fsr);
    rec.push("group_index", group_index);
    rec.push("spacing_mm", spacing);
    write_out(out, "result.txt", &rec.finish())?;
    Ok(format!("ok spacing_mm={spacing} -> result.txt"))
}

fn design_wavelength(config: &Config, out: &Path) -> Result<String, CliError> {
    let fsr = config.require("target")?.f64("fsr_ghz")?;
    let link = config.require("link")?;
    let lambda0 = link.f64("lambda0_nm")?;
    let length = link.f64("length_km")?;
    let delta_d = link.f64("delta_d_ps_km_nm")?;
    let delta_s = link.f64_or("delta_s_ps_km_nm2", 0.0)?;
    let lambda_m = wavelength_for_fsr_hetero_with_slope(delta_d, delta_s, length, lambda0, fsr)?;

    let mut rec = Record::new("design-wavelength");
    rec.push("target_fsr_ghz", fsr);
    rec.push("lambda0_nm", lambda0);
    rec.push("length_km", length);
    rec.push("delta_d_ps_km_nm", delta_d);
    rec.push("delta_s_ps_km_nm2", delta_s);
    rec.push("lambda_m_nm", lambda_m);
    rec.push("detuning_nm", lambda_m - lambda0);
    write_out(out, "result.txt", &rec.finish())?;
    Ok(format!("ok lambda_m_nm={lambda_m} -> result.txt"))
}

fn numerics_from(config: &Config, threads: usize) -> Result<SolverNumerics, CliError> {
    let mut numerics = SolverNumerics::default();
    if let Some(section) = config.section("numerics") {
        numerics.dr_fine_um = section.f64_or("dr_fine_um", numerics.dr_fine_um)?;
        numerics.fine_margin_um = section.f64_or("fine_margin_um", numerics.fine_margin_um)?;
        numerics.dr_coarse_um = section.f64_or("dr_coarse_um", numerics.dr_coarse_um)?;
        numerics.domain_factor = section.f64_or("domain_factor", numerics.domain_factor)?;
        numerics.bc_refinements = section.u32_or("bc_refinements", numerics.bc_refinements)?;
    }
    numerics.threads = threads;
    Ok(numerics)
}

/// (λ0, band, δλ) of the dispersion stencil, with solve/fit defaults.
fn stencil_from(config: &Config) -> Result<(f64, (f64, f64), f64), CliError> {
    let mut lambda0 = 1550.0;
    let mut band = (1500.0, 1600.0);
    let mut delta = 2.0;
    if let Some(section) = config.section("stencil") {
        lambda0 = section.f64_or("lambda0_nm", lambda0)?;
        band.0 = section.f64_or("band_min_nm", band.0)?;
        band.1 = section.f64_or("band_max_nm", band.1)?;
        delta = section.f64_or("delta_lambda_nm", delta)?;
    }
    Ok((lambda0, band, delta))
}

fn design_profile(config: &Config, out: &Path, threads: usize) -> Result<String, CliError> {
    let target_section = config.require("target")?;
    let d = target_section.f64("d_ps_km_nm")?;
    let s = target_section.f64("s_ps_km_nm2")?;
    let tau0 = target_section.f64_or("tau0_ps_km", 0.0)?;
    let target = if tau0 == 0.0 {
        CoreDispersion::relative(d, s)
    } else {
        CoreDispersion::physical(tau0, d, s)?
    };

    let search = config.require("search")?;
    let boxed = ProfileSearchBox::new(
        search.f64_pair("a1_um")?,
        search.f64_pair("delta1_pct")?,
        search.f64_pair("a2_um")?,
        search.f64_pair("w_um")?,
        search.f64("delta2_pct")?,
    )?;
    let budget = search.usize("budget")?;

    let mut weights = FitWeights::default();
    if let Some(section) = config.section("weights") {
        weights.tau0 = section.f64_or("tau0", weights.tau0)?;
        weights.d = section.f64_or("d", weights.d)?;
        weights.s = section.f64_or("s", weights.s)?;
    }

    let defaults = FitOptions::default();
    let (lambda0, band, delta) = stencil_from(config)?;
    let options = FitOptions {
        lambda0_nm: lambda0,
        band,
        delta_lambda_nm: delta,
        numerics: numerics_from(config, threads)?,
        seed: search.u64_or("seed", defaults.seed)?,
        restarts: search.u32_or("restarts", defaults.restarts)?,
        tol: search.f64_or("tol", defaults.tol)?,
        patience: search.u32_or("patience", defaults.patience)?,
    };

    let fit = fit_profile_to_dispersion(&target, &boxed, &weights, budget, &options)?;
    let mut rec = Record::new("design-profile");
    rec.push("a1_um", fit.profile.a1_um);
    rec.push("delta1_pct", fit.profile.delta1_pct);
    rec.push("a2_um", fit.profile.a2_um);
    rec.push("w_um", fit.profile.w_um);
    rec.push("delta2_pct", fit.profile.delta2_pct);
    rec.push("tau0_ps_km", fit.achieved.tau0_ps_km);
    rec.push("d_ps_km_nm", fit.achieved.d_ps_km_nm);
    rec.push("s_ps_km_nm2", fit.achieved.s_ps_km_nm2);
    rec.push("relative_convention", fit.achieved.relative);
    rec.push("objective", fit.objective);
    rec.push("evaluations", fit.evaluations);
    rec.push("converged", fit.converged);
    rec.push("seed", fit.seed);
    write_out(out, "result.txt", &rec.finish())?;
    Ok(format!(
        "ok d_ps_km_nm={} evaluations={} -> result.txt",
        fit.achieved.d_ps_km_nm, fit.evaluations
    ))
}

fn solve_dispersion(config: &Config, out: &Path, threads: usize) -> Result<String, CliError> {
    let section = config.require("profile")?;
    let a1 = section.f64("a1_um")?;
    let delta1 = section.f64("delta1_pct")?;
    let kind = section.str("type")?;
    let model = fused_silica();
    let profile = match kind {
        "step" => RadialIndexProfile::step_index(a1, delta1, model)?,
        "trench" => {
            for key in ["a2_um", "w_um", "delta2_pct"] {
                if !section.has(key) {
                    return Err(CliError::Input(format!(
                        "missing key '{key}' in [profile]: required when type = trench"
                    )));
                }
            }
            let trench = TrenchProfile {
                a1_um: a1,
                delta1_pct: delta1,
                a2_um: section.f64("a2_um")?,
                w_um: section.f64("w_um")?,
                delta2_pct: section.f64("delta2_pct")?,
            };
            RadialIndexProfile::trench_assisted(&trench, model)?
        }
        other => {
            return Err(CliError::Input(format!(
                "key 'type' in [profile] must be 'step' or 'trench', got '{other}'"
            )))
        }
    };

    let numerics = numerics_from(config, threads)?;
    let (lambda0, band, delta) = stencil_from(config)?;
    let solution = solve_lp01(&profile, lambda0, &numerics)?;
    let disp = dispersion_from_profile(&profile, lambda0, band, delta, &numerics)?;

    let mut rec = Record::new("solve-dispersion");
    rec.push("profile_type", kind);
    rec.push("lambda0_nm", lambda0);
    rec.push("n_eff", solution.n_eff);
    rec.push("converged", solution.converged);
    rec.push("grid_points", solution.grid_points);
    rec.push("domain_radius_um", solution.domain_radius_um);
    rec.push("tau0_ps_km", disp.tau0_ps_km);
    rec.push("d_ps_km_nm", disp.d_ps_km_nm);
    rec.push("s_ps_km_nm2", disp.s_ps_km_nm2);
    write_out(out, "result.txt", &rec.finish())?;
    Ok(format!(
        "ok n_eff={} d_ps_km_nm={} -> result.txt",
        solution.n_eff, disp.d_ps_km_nm
    ))
}
