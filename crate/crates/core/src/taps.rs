//! Delay/amplitude tap sets — the interchange between delay engines and the
//! filter core.
//!
//! A [`TapSet`] is an ordered list of `(delay, amplitude)` samples. Both the
//! grating-array and the heterogeneous-link engines emit tap sets, and the
//! RF filter consumes them without caring which engine produced them.
//! Uniformity (equal adjacent spacing, hence a well-defined basic
//! differential delay Δτ) is a computed predicate, not a stored flag.

use crate::{Error, Result};

/// Default relative tolerance on adjacent-spacing spread below which a tap
/// set counts as uniform: spread ≤ 0.1% of the mean spacing.
pub const UNIFORMITY_REL_TOL: f64 = 1e-3;

/// One delayed, weighted sample of the RF signal.
#[derive(Debug, Clone, PartialEq)]
pub struct Tap {
    pub delay_ps: f64,
    /// Dimensionless field amplitude, ≥ 0.
    pub amplitude: f64,
    /// Provenance of this tap (which core / wavelength produced it).
    pub label: String,
}

impl Tap {
    pub fn new(delay_ps: f64, amplitude: f64) -> Self {
        Self {
            delay_ps,
            amplitude,
            label: String::new(),
        }
    }

    pub fn labeled(delay_ps: f64, amplitude: f64, label: impl Into<String>) -> Self {
        Self {
            delay_ps,
            amplitude,
            label: label.into(),
        }
    }
}

/// Ordered, strictly-increasing list of taps.
#[derive(Debug, Clone, PartialEq)]
pub struct TapSet {
    taps: Vec<Tap>,
    label: String,
}

impl TapSet {
    /// Sorts the taps by delay and validates: at least one tap, finite
    /// values, amplitudes ≥ 0, no coincident delays.
    pub fn new(taps: Vec<Tap>) -> Result<Self> {
        Self::with_label(taps, "")
    }

    /// Like [`TapSet::new`] with a provenance label for the whole set.
    pub fn with_label(mut taps: Vec<Tap>, label: impl Into<String>) -> Result<Self> {
        if taps.is_empty() {
            return Err(Error::TooFewTaps { needed: 1, got: 0 });
        }
        for t in &taps {
            if !t.delay_ps.is_finite() || !t.amplitude.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "non-finite tap (delay {} ps, amplitude {})",
                    t.delay_ps, t.amplitude
                )));
            }
            if t.amplitude < 0.0 {
                return Err(Error::InvalidInput(format!(
                    "negative tap amplitude {}",
                    t.amplitude
                )));
            }
        }
        taps.sort_by(|a, b| a.delay_ps.total_cmp(&b.delay_ps));
        for pair in taps.windows(2) {
            if pair[0].delay_ps == pair[1].delay_ps {
                return Err(Error::DegenerateTaps(format!(
                    "coincident delays at {} ps ({:?} / {:?})",
                    pair[0].delay_ps, pair[0].label, pair[1].label
                )));
            }
        }
        Ok(Self {
            taps,
            label: label.into(),
        })
    }

    pub fn taps(&self) -> &[Tap] {
        &self.taps
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.taps.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty sets
    }

    pub fn delays_ps(&self) -> impl Iterator<Item = f64> + '_ {
        self.taps.iter().map(|t| t.delay_ps)
    }

    /// Sum of tap amplitudes in tap order (the DC value of the filter).
    pub fn amplitude_sum(&self) -> f64 {
        self.taps.iter().map(|t| t.amplitude).sum()
    }

    /// Differences between adjacent delays; empty for a single tap.
    pub fn adjacent_spacings_ps(&self) -> Vec<f64> {
        self.taps
            .windows(2)
            .map(|p| p[1].delay_ps - p[0].delay_ps)
            .collect()
    }

    /// Mean adjacent spacing if every spacing agrees with the mean within
    /// `rel_tol` (relative to the mean); `None` otherwise or for a single
    /// tap. A two-tap set is always uniform.
    pub fn uniform_spacing_ps(&self, rel_tol: f64) -> Option<f64> {
        let spacings = self.adjacent_spacings_ps();
        if spacings.is_empty() {
            return None;
        }
        let mean = spacings.iter().sum::<f64>() / spacings.len() as f64;
        let spread = spacings
            .iter()
            .map(|d| (d - mean).abs())
            .fold(0.0, f64::max);
        (spread <= rel_tol * mean).then_some(mean)
    }

    pub fn is_uniform(&self, rel_tol: f64) -> bool {
        self.uniform_spacing_ps(rel_tol).is_some()
    }

    /// Same taps with a constant added to every delay.
    pub fn shifted(&self, offset_ps: f64) -> TapSet {
        let taps = self
            .taps
            .iter()
            .map(|t| Tap {
                delay_ps: t.delay_ps + offset_ps,
                ..t.clone()
            })
            .collect();
        TapSet {
            taps,
            label: self.label.clone(),
        }
    }

    /// Same taps with every amplitude multiplied by `factor` (> 0).
    pub fn scaled(&self, factor: f64) -> Result<TapSet> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "amplitude scale factor must be positive and finite, got {factor}"
            )));
        }
        let taps = self
            .taps
            .iter()
            .map(|t| Tap {
                amplitude: t.amplitude * factor,
                ..t.clone()
            })
            .collect();
        Ok(TapSet {
            taps,
            label: self.label.clone(),
        })
    }
}

/// Builds a uniform tap set of `count` unit taps spaced `spacing_ps` apart.
pub fn uniform_taps(count: usize, spacing_ps: f64) -> Result<TapSet> {
    if count == 0 {
        return Err(Error::TooFewTaps { needed: 1, got: 0 });
    }
    if !(spacing_ps > 0.0 && spacing_ps.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "tap spacing must be positive and finite, got {spacing_ps} ps"
        )));
    }
    let taps = (0..count)
        .map(|k| Tap::new(k as f64 * spacing_ps, 1.0))
        .collect();
    TapSet::new(taps)
}
