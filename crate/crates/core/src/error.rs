//! Unified error type shared by every engine module.

use thiserror::Error;

/// Failure modes of the delay, filter, solver, and design engines.
///
/// Validation *reports* (geometry, inscription, heterogeneous operability)
/// are not errors: rule violations come back as report entries so callers
/// can inspect margins. `Error` is reserved for inputs an operation cannot
/// act on at all.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input failed a precondition (finiteness, sign, range, or length).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Geometry layout/core-count combination has no defined positions.
    #[error("unsupported layout: {0}")]
    UnsupportedLayout(String),

    /// A tap set collapsed onto coincident delays.
    #[error("degenerate tap set: {0}")]
    DegenerateTaps(String),

    /// Operation needs more taps than the set holds.
    #[error("need at least {needed} taps, got {got}")]
    TooFewTaps { needed: usize, got: usize },

    /// Operation needs more cores than the spec holds.
    #[error("need at least {needed} cores, got {got}")]
    TooFewCores { needed: usize, got: usize },

    /// Requested core index does not exist in the device geometry.
    #[error("unknown core id {0}")]
    UnknownCore(u32),

    /// Requested core exists but carries no gratings.
    #[error("core {0} holds no gratings")]
    EmptyCore(u32),

    /// No grating Bragg wavelength falls inside the matching window.
    #[error("no grating matches {wavelength_nm} nm within {tolerance_nm} nm")]
    NoMatchingGratings {
        wavelength_nm: f64,
        tolerance_nm: f64,
    },

    /// Wavelength band with non-positive width.
    #[error("empty wavelength band [{min_nm}, {max_nm}] nm")]
    EmptyBand { min_nm: f64, max_nm: f64 },

    /// Wavelength outside the material model's validity window.
    #[error("{lambda_nm} nm is outside the {min_nm}-{max_nm} nm validity window")]
    OutsideValidity {
        lambda_nm: f64,
        min_nm: f64,
        max_nm: f64,
    },

    /// The index profile guides no mode at this wavelength.
    #[error("no guided mode at {lambda_nm} nm: {reason}")]
    NoGuidedMode { lambda_nm: f64, reason: String },

    /// Eigenvalue iteration failed to settle at the configured resolution.
    #[error("mode solve at {lambda_nm} nm did not converge: {reason}")]
    NotConverged { lambda_nm: f64, reason: String },

    /// Differentiation stencil too narrow for the solver's noise floor.
    #[error("stencil spacing {delta_nm} nm is below the {min_nm} nm guard")]
    StencilTooFine { delta_nm: f64, min_nm: f64 },

    /// A response grid does not cover enough passband peaks to measure.
    #[error("response covers fewer than two passband peaks: {0}")]
    PeriodCoverage(String),

    /// Profile fitting could not evaluate most of its seed points.
    #[error("infeasible search box: {failed} of {attempted} seed evaluations failed")]
    InfeasibleBox { failed: usize, attempted: usize },
}
