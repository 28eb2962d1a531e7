//! Eigensolver and dispersion-stencil timings.
//!
//! `solve` is one LP01 solve at 1550 nm; `dispersion` is the five-point
//! wavelength stencil on top of it (five solves plus finite differences).
//! The `coarse` variants use the grid the profile-fit objective runs on,
//! so `dispersion/coarse` is one fit evaluation.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use mcf_ttdl_core::mode_solver::{
    dispersion_from_profile, fused_silica, solve_lp01, RadialIndexProfile, SolverNumerics,
};
use mcf_ttdl_core::TrenchProfile;

fn trench() -> RadialIndexProfile {
    let profile = TrenchProfile {
        a1_um: 4.2,
        delta1_pct: 0.36,
        a2_um: 3.1,
        w_um: 4.0,
        delta2_pct: 1.0,
    };
    RadialIndexProfile::trench_assisted(&profile, fused_silica()).unwrap()
}

fn coarse_numerics() -> SolverNumerics {
    SolverNumerics {
        dr_fine_um: 0.05,
        dr_coarse_um: 0.25,
        ..SolverNumerics::default()
    }
}

fn bench_solve(c: &mut Criterion) {
    let profile = trench();
    let default = SolverNumerics::default();
    let coarse = coarse_numerics();

    let mut group = c.benchmark_group("solve");
    group.bench_function("default", |b| {
        b.iter(|| solve_lp01(black_box(&profile), 1550.0, &default).unwrap())
    });
    group.bench_function("coarse", |b| {
        b.iter(|| solve_lp01(black_box(&profile), 1550.0, &coarse).unwrap())
    });
    group.finish();
}

fn bench_dispersion(c: &mut Criterion) {
    let profile = trench();
    let band = (1500.0, 1600.0);
    let default = SolverNumerics::default();
    let coarse = coarse_numerics();

    let mut group = c.benchmark_group("dispersion");
    group.sample_size(20);
    group.bench_function("default", |b| {
        b.iter(|| {
            dispersion_from_profile(black_box(&profile), 1550.0, band, 2.0, &default).unwrap()
        })
    });
    group.bench_function("coarse", |b| {
        b.iter(|| dispersion_from_profile(black_box(&profile), 1550.0, band, 2.0, &coarse).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_solve, bench_dispersion);
criterion_main!(benches);
