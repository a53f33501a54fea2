//! Sequential against rayon-parallel execution of the batch operations.
//! Without the `parallel` feature both variants run sequentially.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ratdyn::chaos::{box_counting_dimension_with, chaos_report, default_scales, lyapunov_estimate, scan_params, ChaosSettings};
use ratdyn::criteria::{verify_criteria, CriteriaSettings};
use ratdyn::exec::Execution;
use ratdyn::presets;
use ratdyn::sampling::sample_params;
use ratdyn::{ExtComplex, C64};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn box_counting(c: &mut Criterion) {
    let cloud = lyapunov_estimate(&presets::chaotic_rows()[1], ExtComplex::Finite(C64::new(0.1, 0.2)), 1_000, 200_000)
        .expect("chaotic orbit")
        .cloud;
    let scales = default_scales();
    let mut g = c.benchmark_group("box_counting_200k");
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| box_counting_dimension_with(black_box(&cloud), &scales, exec).unwrap())
        });
    }
    g.finish();
}

fn chaos_over_starts(c: &mut Criterion) {
    let p = presets::chaotic_rows()[2];
    let mut g = c.benchmark_group("chaos_report_10_starts");
    g.sample_size(10);
    for (name, exec) in MODES {
        let settings = ChaosSettings {
            execution: exec,
            ..Default::default()
        };
        g.bench_function(name, |b| b.iter(|| chaos_report(black_box(&p), &settings)));
    }
    g.finish();
}

fn scan(c: &mut Criterion) {
    let params = sample_params(7, 24);
    let mut g = c.benchmark_group("scan_24_draws");
    g.sample_size(10);
    for (name, exec) in MODES {
        let settings = ChaosSettings {
            execution: exec,
            ..Default::default()
        };
        g.bench_function(name, |b| b.iter(|| scan_params(black_box(&params), &settings)));
    }
    g.finish();
}

fn multi_start(c: &mut Criterion) {
    let p = presets::slow_convergence();
    let mut g = c.benchmark_group("verify_criteria_16_starts");
    g.sample_size(10);
    for (name, exec) in MODES {
        let mut settings = CriteriaSettings {
            execution: exec,
            ..Default::default()
        };
        settings.orbit.max_iter = 200_000;
        g.bench_function(name, |b| b.iter(|| verify_criteria(black_box(&p), 16, 1, &settings).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, box_counting, chaos_over_starts, scan, multi_start);
criterion_main!(benches);
