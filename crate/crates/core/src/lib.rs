//! Design and simulation engines for multicore-fiber (MCF) true time delay
//! lines (TTDL).
//!
//! An MCF TTDL produces replicas of an RF signal separated by a constant
//! basic differential delay Δτ; photodetecting the combined replicas yields
//! an N-tap FIR microwave filter whose free spectral range is FSR = 1/Δτ.
//! This crate models the two delay engines that realize such a device —
//! arrays of fiber Bragg gratings selectively inscribed in the cores of a
//! homogeneous MCF, and dispersion-engineered heterogeneous MCF links — plus
//! the filter synthesis, a scalar LP01 mode solver that maps refractive
//! index profiles to chromatic dispersion, and the inverse-design solvers
//! that close the loop.
//!
//! Module map:
//!
//! * [`mcf_model`] — fiber cross-section geometry, trench-assisted index
//!   profiles, per-core dispersion triples, heterogeneous link specs.
//! * [`hetero_delay`] — group-delay expansion and differential-delay algebra
//!   for heterogeneous links; operability validation; spatial tap sets.
//! * [`fbg_multicavity`] — grating arrays in homogeneous MCFs; wavelength-
//!   and spatial-diversity tap extraction; inscription feasibility.
//! * [`mode_solver`] — Sellmeier material model, radial finite-difference
//!   LP01 solver, dispersion extraction by spectral differentiation.
//! * [`rf_filter`] — complex FIR transfer function, FSR estimation,
//!   response metrics.
//! * [`design`] — closed-form inverse solvers and derivative-free profile
//!   fitting.
//!
//! ```
//! use mcf_ttdl_core::design::assign_core_dispersions;
//! use mcf_ttdl_core::hetero_delay::tap_set_spatial;
//! use mcf_ttdl_core::mcf_model::{HeteroMCFSpec, MCFGeometry};
//! use mcf_ttdl_core::rf_filter::{fsr_estimate, FsrMethod};
//!
//! // Seven cores whose dispersion climbs 1 ps/(km·nm) per core turn a
//! // 10 nm detuning from the anchor wavelength into 50 ps tap spacing.
//! let cores = assign_core_dispersions(7, 14.75, 1.0, 0.0, 0.0).unwrap();
//! let spec = HeteroMCFSpec::new(MCFGeometry::seven_core(), 1550.0, cores, 5.0).unwrap();
//! let taps = tap_set_spatial(&spec, 1560.0, &[1.0; 7]).unwrap();
//! let est = fsr_estimate(&taps).unwrap();
//! assert_eq!(est.method, FsrMethod::Analytic);
//! assert!((est.fsr_ghz - 20.0).abs() < 1e-9);
//! ```
//!
//! Units are fixed per field and never inferred: transverse lengths in µm,
//! wavelengths in nm, fiber lengths in km, grating positions in mm, delays
//! in ps, frequencies in GHz, dispersion in ps/(km·nm) and its slope in
//! ps/(km·nm²). All types are immutable after construction and all
//! operations are pure functions, so values may be shared freely across
//! threads.

pub mod design;
pub mod error;
pub mod fbg_multicavity;
pub mod hetero_delay;
pub mod mcf_model;
pub mod mode_solver;
mod parallel;
pub mod report;
pub mod rf_filter;
pub mod taps;

pub use error::Error;
pub use mcf_model::{CoreDispersion, CoreLayout, HeteroMCFSpec, MCFGeometry, TrenchProfile};
pub use report::{RuleCheck, ValidationReport};
pub use taps::{Tap, TapSet};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Vacuum speed of light in mm/ps; converts grating positions to delays.
pub const C_MM_PER_PS: f64 = 0.299792458;

/// Group delay per km of fiber per unit group index, in ps/km.
pub const PS_PER_KM_PER_GROUP_INDEX: f64 = 1.0e15 / 299_792_458.0;
