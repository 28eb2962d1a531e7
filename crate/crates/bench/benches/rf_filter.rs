//! Frequency-response synthesis throughput.
//!
//! Grids are sized like real sweeps: 3k points covers a few FSRs for
//! plotting, 16k is what the spectral FSR estimator synthesizes. The
//! threaded variant shows the parallel-fill overhead/payoff boundary.

use criterion::{criterion_group, criterion_main, Criterion, Throughput};
use std::hint::black_box;

use mcf_ttdl_core::rf_filter::{fsr_estimate, transfer_function, transfer_function_threaded};
use mcf_ttdl_core::taps::uniform_taps;
use mcf_ttdl_core::{Tap, TapSet};

fn comb(count: usize) -> TapSet {
    uniform_taps(count, 100.0).unwrap()
}

/// Slightly uneven spacings force the estimator onto its spectral path.
fn uneven() -> TapSet {
    let taps = (0..9)
        .map(|k| Tap::new(103.0 * k as f64 + (k % 3) as f64, 1.0))
        .collect();
    TapSet::new(taps).unwrap()
}

fn bench_transfer(c: &mut Criterion) {
    let mut group = c.benchmark_group("transfer_function");
    for (taps, points) in [(3, 3001usize), (9, 3001), (9, 16384)] {
        let set = comb(taps);
        group.throughput(Throughput::Elements((taps * points) as u64));
        group.bench_function(format!("taps{taps}/points{points}"), |b| {
            b.iter(|| transfer_function(black_box(&set), 0.0, 30.0, points).unwrap())
        });
    }
    let set = comb(9);
    group.throughput(Throughput::Elements((9 * 16384) as u64));
    group.bench_function("taps9/points16384/threads0", |b| {
        b.iter(|| transfer_function_threaded(black_box(&set), 0.0, 30.0, 16384, 0).unwrap())
    });
    group.finish();
}

fn bench_fsr(c: &mut Criterion) {
    let uniform = comb(9);
    let spectral = uneven();
    let mut group = c.benchmark_group("fsr_estimate");
    group.bench_function("analytic", |b| {
        b.iter(|| fsr_estimate(black_box(&uniform)).unwrap())
    });
    group.sample_size(20);
    group.bench_function("spectral", |b| {
        b.iter(|| fsr_estimate(black_box(&spectral)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_transfer, bench_fsr);
criterion_main!(benches);
