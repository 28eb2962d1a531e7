//! Scalar LP01 mode solver for radially layered step profiles, and the
//! chromatic-dispersion extraction built on top of it.
//!
//! The pipeline: a [`MaterialModel`] gives the cladding index, a
//! [`RadialIndexProfile`] layers relative index steps on top of it,
//! [`solve_lp01`] finds the fundamental-mode effective index at one
//! wavelength, and [`dispersion_from_profile`] turns a five-point
//! wavelength stencil of effective indices into τ₀/D/S coefficients.

mod dispersion;
mod material;
mod profile;
mod solve;

pub use dispersion::{dispersion_from_profile, MIN_STENCIL_NM};
pub use material::{
    fused_silica, material_dispersion, material_index, MaterialModel, SELLMEIER_VALID_NM,
};
pub use profile::RadialIndexProfile;
pub use solve::{solve_lp01, ModeSolution, SolverNumerics};
