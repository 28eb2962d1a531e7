//! Incoherent N-tap FIR synthesis of the microwave photonic filter
//! response, plus FSR estimation and response metrics.
//!
//! Photodetecting the combined delayed replicas yields
//!
//! ```text
//! H(f) = Σ_k a_k · exp(−i·2π·f·τ_k)
//! ```
//!
//! with real non-negative tap amplitudes a_k (optical carrier phase plays
//! no role in this regime). For a uniform tap set the magnitude is periodic
//! with the free spectral range FSR = 1/Δτ; with f in GHz and τ in ps,
//! FSR_GHz = 1000/Δτ_ps.

use num_complex::Complex64;

use crate::parallel::par_fill;
use crate::taps::{TapSet, UNIFORMITY_REL_TOL};
use crate::{Error, Result};

/// Floor applied to normalized magnitudes in dB so that nulls stay finite.
pub const DB_FLOOR: f64 = -120.0;

/// Fraction of the peak magnitude a local maximum must reach to count as a
/// passband peak (grating lobe) rather than a sidelobe.
const PASSBAND_PEAK_FRACTION: f64 = 0.5;

/// Complex frequency response on a uniform grid with inclusive endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterResponse {
    freq_ghz: Vec<f64>,
    h: Vec<Complex64>,
    peak_raw: f64,
}

impl FilterResponse {
    pub fn freq_ghz(&self) -> &[f64] {
        &self.freq_ghz
    }

    pub fn h(&self) -> &[Complex64] {
        &self.h
    }

    /// Raw peak magnitude; the 0 dB reference of [`Self::magnitude_db`].
    pub fn peak_raw(&self) -> f64 {
        self.peak_raw
    }

    /// Raw magnitude |H| per grid point.
    pub fn magnitude(&self) -> Vec<f64> {
        self.h.iter().map(|h| h.norm()).collect()
    }

    /// Peak-normalized magnitude in dB, floored at [`DB_FLOOR`].
    pub fn magnitude_db(&self) -> Vec<f64> {
        self.h
            .iter()
            .map(|h| {
                let db = 20.0 * (h.norm() / self.peak_raw).log10();
                db.max(DB_FLOOR)
            })
            .collect()
    }

    /// Phase per grid point, radians in (−π, π].
    pub fn phase_rad(&self) -> Vec<f64> {
        self.h.iter().map(|h| h.arg()).collect()
    }
}

/// Evaluates H at a single frequency; taps are summed in tap order, so a
/// given (taps, f) pair always produces the identical bits.
pub(crate) fn eval_point(taps: &TapSet, f_ghz: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for t in taps.taps() {
        // GHz·ps → 1e-3 cycles.
        let phase = -2.0 * std::f64::consts::PI * f_ghz * t.delay_ps * 1.0e-3;
        acc += t.amplitude * Complex64::new(phase.cos(), phase.sin());
    }
    acc
}

/// Synthesizes the response on `n_points` uniformly spaced frequencies from
/// `f_start_ghz` to `f_stop_ghz` inclusive.
pub fn transfer_function(
    taps: &TapSet,
    f_start_ghz: f64,
    f_stop_ghz: f64,
    n_points: usize,
) -> Result<FilterResponse> {
    transfer_function_threaded(taps, f_start_ghz, f_stop_ghz, n_points, 1)
}

/// [`transfer_function`] evaluated with up to `threads` worker threads
/// (0 = auto). Grid points are independent and the per-point tap summation
/// order is fixed, so the result is bit-identical for any thread count.
pub fn transfer_function_threaded(
    taps: &TapSet,
    f_start_ghz: f64,
    f_stop_ghz: f64,
    n_points: usize,
    threads: usize,
) -> Result<FilterResponse> {
    if n_points < 2 {
        return Err(Error::InvalidInput(format!(
            "frequency grid needs at least 2 points, got {n_points}"
        )));
    }
    if !(f_start_ghz >= 0.0 && f_stop_ghz > f_start_ghz && f_stop_ghz.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "frequency grid must satisfy 0 <= start < stop, got [{f_start_ghz}, {f_stop_ghz}] GHz"
        )));
    }
    let step = (f_stop_ghz - f_start_ghz) / (n_points - 1) as f64;
    let freq_ghz: Vec<f64> = (0..n_points)
        .map(|i| f_start_ghz + i as f64 * step)
        .collect();

    let mut h = vec![Complex64::new(0.0, 0.0); n_points];
    par_fill(&mut h, threads, |i| eval_point(taps, freq_ghz[i]));

    let peak_raw = h.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if peak_raw == 0.0 {
        return Err(Error::InvalidInput(
            "response is identically zero (all tap amplitudes zero)".into(),
        ));
    }
    Ok(FilterResponse {
        freq_ghz,
        h,
        peak_raw,
    })
}

/// How an FSR estimate was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FsrMethod {
    /// Inverse of the uniform tap spacing.
    Analytic,
    /// Peak spacing of a synthesized magnitude response.
    Spectral,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FsrEstimate {
    pub fsr_ghz: f64,
    pub method: FsrMethod,
}

/// Free spectral range of a tap set.
///
/// Uniform sets (spacing spread within [`UNIFORMITY_REL_TOL`]) use the
/// analytic inverse FSR = 1000/Δτ. Anything else synthesizes a response
/// spanning more than three putative periods and measures the passband
/// peak spacing.
pub fn fsr_estimate(taps: &TapSet) -> Result<FsrEstimate> {
    if taps.len() < 2 {
        return Err(Error::TooFewTaps {
            needed: 2,
            got: taps.len(),
        });
    }
    if let Some(spacing) = taps.uniform_spacing_ps(UNIFORMITY_REL_TOL) {
        return Ok(FsrEstimate {
            fsr_ghz: 1000.0 / spacing,
            method: FsrMethod::Analytic,
        });
    }
    let mean_spacing = taps.adjacent_spacings_ps().iter().sum::<f64>() / (taps.len() - 1) as f64;
    let putative_fsr = 1000.0 / mean_spacing;
    let resp = transfer_function(taps, 0.0, 3.3 * putative_fsr, 16384)?;
    Ok(FsrEstimate {
        fsr_ghz: fsr_from_response(&resp)?,
        method: FsrMethod::Spectral,
    })
}

/// Measures the FSR of a synthesized response as the mean spacing of its
/// interior passband peaks, each refined by parabolic interpolation.
///
/// The grid must contain at least two interior passband peaks (magnitude
/// within [`PASSBAND_PEAK_FRACTION`] of the global peak).
pub fn fsr_from_response(resp: &FilterResponse) -> Result<f64> {
    let mag = resp.magnitude();
    let f = resp.freq_ghz();
    let threshold = PASSBAND_PEAK_FRACTION * resp.peak_raw();
    let mut peaks = Vec::new();
    for i in 1..mag.len() - 1 {
        if mag[i] >= mag[i - 1] && mag[i] >= mag[i + 1] && mag[i] >= threshold {
            // Skip the right half of a flat-topped pair.
            if mag[i] == mag[i - 1] && peaks.last() == Some(&(i - 1)) {
                continue;
            }
            peaks.push(i);
        }
    }
    if peaks.len() < 2 {
        return Err(Error::PeriodCoverage(format!(
            "{} interior passband peaks on [{}, {}] GHz",
            peaks.len(),
            f[0],
            f[f.len() - 1]
        )));
    }
    let refined: Vec<f64> = peaks
        .iter()
        .map(|&i| {
            let (a, b, c) = (mag[i - 1], mag[i], mag[i + 1]);
            let denom = a - 2.0 * b + c;
            let offset = if denom == 0.0 {
                0.0
            } else {
                0.5 * (a - c) / denom
            };
            let step = f[i + 1] - f[i];
            f[i] + offset.clamp(-0.5, 0.5) * step
        })
        .collect();
    let first = refined[0];
    let last = refined[refined.len() - 1];
    Ok((last - first) / (refined.len() - 1) as f64)
}

/// Scalar metrics of a magnitude response.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseMetrics {
    /// Highest local maximum outside the passband peaks, dB relative to
    /// the peak; `None` when the response has no sidelobes (e.g. 2 taps).
    pub sidelobe_level_db: Option<f64>,
    /// −3 dB width of the main passband, GHz. When the main passband sits
    /// on a grid edge the visible half-width is doubled.
    pub bandwidth_3db_ghz: f64,
    /// Deepest null, dB relative to the peak, floored at [`DB_FLOOR`].
    pub null_depth_db: f64,
}

/// Extracts sidelobe level, 3-dB bandwidth, and null depth.
///
/// The response must span at least one full period — detected as two or
/// more passband peaks, counting grid endpoints that are local maxima.
pub fn response_metrics(resp: &FilterResponse) -> Result<ResponseMetrics> {
    let db = resp.magnitude_db();
    let f = resp.freq_ghz();
    let n = db.len();

    // Local maxima, including grid endpoints so a response spanning exactly
    // one period (passbands at both edges) counts as covered.
    let mut maxima = Vec::new();
    if db[0] >= db[1] {
        maxima.push(0);
    }
    for i in 1..n - 1 {
        if db[i] >= db[i - 1] && db[i] >= db[i + 1] {
            if db[i] == db[i - 1] && maxima.last() == Some(&(i - 1)) {
                continue;
            }
            maxima.push(i);
        }
    }
    if db[n - 1] >= db[n - 2] {
        maxima.push(n - 1);
    }

    let passband_db = -20.0 * PASSBAND_PEAK_FRACTION.log10(); // ≈ 6 dB window
    let (passbands, sidelobes): (Vec<usize>, Vec<usize>) =
        maxima.into_iter().partition(|&i| db[i] >= -passband_db);
    if passbands.len() < 2 {
        return Err(Error::PeriodCoverage(format!(
            "{} passband peaks on [{}, {}] GHz",
            passbands.len(),
            f[0],
            f[n - 1]
        )));
    }

    let sidelobe_level_db = sidelobes
        .iter()
        .map(|&i| db[i])
        .fold(None, |best: Option<f64>, v| {
            Some(best.map_or(v, |b| b.max(v)))
        });

    let null_depth_db = db.iter().copied().fold(f64::INFINITY, f64::min);

    // Main passband: the highest peak (first on ties).
    let &main = passbands
        .iter()
        .max_by(|&&a, &&b| db[a].total_cmp(&db[b]).then(b.cmp(&a)))
        .expect("at least two passbands");
    let crossing = |mut i: usize, dir: isize| -> Option<f64> {
        loop {
            let next = i as isize + dir;
            if next < 0 || next as usize >= n {
                return None;
            }
            let next = next as usize;
            if db[next] <= -3.0 {
                // Linear interpolation between grid neighbors in dB.
                let t = (-3.0 - db[i]) / (db[next] - db[i]);
                return Some(f[i] + t * (f[next] - f[i]));
            }
            i = next;
        }
    };
    let left = crossing(main, -1);
    let right = crossing(main, 1);
    let bandwidth_3db_ghz = match (left, right) {
        (Some(l), Some(r)) => r - l,
        (None, Some(r)) => 2.0 * (r - f[main]),
        (Some(l), None) => 2.0 * (f[main] - l),
        (None, None) => {
            return Err(Error::PeriodCoverage(
                "main passband never falls 3 dB below its peak".into(),
            ))
        }
    };

    Ok(ResponseMetrics {
        sidelobe_level_db,
        bandwidth_3db_ghz,
        null_depth_db,
    })
}
