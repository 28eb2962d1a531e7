//! Shared helpers for the integration suites.
//!
//! The centerpiece is an analytic LP01 oracle for step-index profiles:
//! series Bessel evaluations plus bisection of the weakly-guiding
//! characteristic equation u·J1(u)/J0(u) = w·K1(w)/K0(w). It shares no
//! code with the crate's finite-difference solver, so agreement between
//! the two is real evidence rather than a tautology.

#![allow(dead_code)]

use mcf_ttdl_core::mode_solver::{material_index, MaterialModel};
use mcf_ttdl_core::PS_PER_KM_PER_GROUP_INDEX;

const EULER_GAMMA: f64 = 0.5772156649015329;

/// First zero of J0; brackets the LP01 normalized-phase parameter u.
pub const J0_FIRST_ZERO: f64 = 2.4048255576957724;

/// Ascending-series term cutoff relative to the running sum.
const SERIES_EPS: f64 = 1.0e-18;
const SERIES_MAX_TERMS: usize = 200;

/// J0 by its ascending power series; fine for the |x| ≲ 3 this suite needs.
pub fn bessel_j0(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..SERIES_MAX_TERMS {
        term *= -q / ((k * k) as f64);
        sum += term;
        if term.abs() < SERIES_EPS * sum.abs().max(1.0) {
            break;
        }
    }
    sum
}

pub fn bessel_j1(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..SERIES_MAX_TERMS {
        term *= -q / ((k * (k + 1)) as f64);
        sum += term;
        if term.abs() < SERIES_EPS * sum.abs().max(1.0) {
            break;
        }
    }
    0.5 * x * sum
}

pub fn bessel_i0(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..SERIES_MAX_TERMS {
        term *= q / ((k * k) as f64);
        sum += term;
        if term < SERIES_EPS * sum {
            break;
        }
    }
    sum
}

pub fn bessel_i1(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..SERIES_MAX_TERMS {
        term *= q / ((k * (k + 1)) as f64);
        sum += term;
        if term < SERIES_EPS * sum {
            break;
        }
    }
    0.5 * x * sum
}

/// K0 by the standard log-series
/// K0(x) = −(ln(x/2)+γ)·I0(x) + Σ_{k≥1} (x²/4)^k/(k!)² · H_k.
pub fn bessel_k0(x: f64) -> f64 {
    assert!(x > 0.0, "K0 needs a positive argument, got {x}");
    let q = 0.25 * x * x;
    let mut term = 1.0; // q^k/(k!)²
    let mut harmonic = 0.0;
    let mut sum = 0.0;
    for k in 1..SERIES_MAX_TERMS {
        term *= q / ((k * k) as f64);
        harmonic += 1.0 / k as f64;
        let contrib = term * harmonic;
        sum += contrib;
        if contrib < SERIES_EPS * sum.max(1.0) {
            break;
        }
    }
    -((0.5 * x).ln() + EULER_GAMMA) * bessel_i0(x) + sum
}

/// K1 by the companion series, with ψ(k+1)+ψ(k+2) = −2γ + H_k + H_{k+1}:
/// K1(x) = 1/x + ln(x/2)·I1(x) − (x/4)·Σ_{k≥0} (ψ(k+1)+ψ(k+2))·(x²/4)^k/(k!(k+1)!).
pub fn bessel_k1(x: f64) -> f64 {
    assert!(x > 0.0, "K1 needs a positive argument, got {x}");
    let q = 0.25 * x * x;
    let mut term = 1.0; // q^k/(k!(k+1)!)
    let mut h_k = 0.0;
    let mut h_k1 = 1.0;
    let mut sum = term * (-2.0 * EULER_GAMMA + h_k + h_k1);
    for k in 1..SERIES_MAX_TERMS {
        term *= q / ((k * (k + 1)) as f64);
        h_k += 1.0 / k as f64;
        h_k1 += 1.0 / (k + 1) as f64;
        let contrib = term * (-2.0 * EULER_GAMMA + h_k + h_k1);
        sum += contrib;
        if contrib.abs() < SERIES_EPS * sum.abs().max(1.0) {
            break;
        }
    }
    1.0 / x + (0.5 * x).ln() * bessel_i1(x) - 0.25 * x * sum
}

/// Characteristic-equation residual at normalized propagation constant b.
fn chareq(v: f64, b: f64) -> f64 {
    let u = v * (1.0 - b).sqrt();
    let w = v * b.sqrt();
    u * bessel_j1(u) / bessel_j0(u) - w * bessel_k1(w) / bessel_k0(w)
}

/// Analytic LP01 effective index of a step-index core of radius `a_um`
/// and fractional index step `delta1_pct` (n_co = n_cl·(1+δ)), on the
/// same material model the crate uses for the cladding.
pub fn step_index_neff(a_um: f64, delta1_pct: f64, lambda_nm: f64, model: &MaterialModel) -> f64 {
    let n_cl = material_index(model, lambda_nm).expect("wavelength inside the material window");
    let n_co = n_cl * (1.0 + delta1_pct / 100.0);
    let na_sq = n_co * n_co - n_cl * n_cl;
    let k0 = 2.0 * std::f64::consts::PI * 1.0e3 / lambda_nm; // rad/µm
    let v = k0 * a_um * na_sq.sqrt();

    // LP01 exists for every V > 0; below the J0 cutoff the full b-interval
    // brackets the root, above it u must stay left of J0's first zero.
    let mut lo = if v > J0_FIRST_ZERO {
        1.0 - (J0_FIRST_ZERO / v).powi(2)
    } else {
        0.0
    } + 1.0e-12;
    let mut hi = 1.0 - 1.0e-12;
    assert!(
        chareq(v, lo) > 0.0 && chareq(v, hi) < 0.0,
        "characteristic equation must change sign over the b-bracket (V = {v})"
    );
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if chareq(v, mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let b = 0.5 * (lo + hi);
    (n_cl * n_cl + b * na_sq).sqrt()
}

/// Dispersion triple (τ0, D, S) from the analytic n_eff(λ) curve, using
/// five-point central stencils of half-width `delta_nm`. Matches the
/// crate's units — ps/km, ps/(km·nm), ps/(km·nm²) — without touching its
/// finite-difference machinery.
pub fn step_index_dispersion_oracle(
    a_um: f64,
    delta1_pct: f64,
    lambda0_nm: f64,
    delta_nm: f64,
    model: &MaterialModel,
) -> (f64, f64, f64) {
    let mut n = [0.0; 5];
    for (i, k) in (-2i32..=2).enumerate() {
        n[i] = step_index_neff(a_um, delta1_pct, lambda0_nm + k as f64 * delta_nm, model);
    }
    let d = delta_nm;
    let d1 = (n[0] - 8.0 * n[1] + 8.0 * n[3] - n[4]) / (12.0 * d);
    let d2 = (-n[0] + 16.0 * n[1] - 30.0 * n[2] + 16.0 * n[3] - n[4]) / (12.0 * d * d);
    let d3 = (-n[0] + 2.0 * n[1] - 2.0 * n[3] + n[4]) / (2.0 * d * d * d);
    let k = PS_PER_KM_PER_GROUP_INDEX;
    (
        k * (n[2] - lambda0_nm * d1),
        -k * lambda0_nm * d2,
        -k * (d2 + lambda0_nm * d3),
    )
}

/// Relative difference with a floor, so comparisons near zero stay sane.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0e-9)
}
