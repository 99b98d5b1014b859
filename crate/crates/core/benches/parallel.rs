//! Sequential vs rayon-parallel execution of the two heavy paths: the
//! parameter sweep and Monte Carlo teleportation.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use entbroadcast::broadcast::{outputs, real_input, CloneParams, Scenario};
use entbroadcast::exec::Parallelism;
use entbroadcast::sweep::{run_sweep, SweepConfig};
use entbroadcast::teleport::{simulate_teleportation, Corrections};

const MODES: [(&str, Parallelism); 2] = [
    ("sequential", Parallelism::Sequential),
    ("parallel", Parallelism::Parallel),
];

fn sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    for steps in [51, 201] {
        let config = SweepConfig {
            alpha_steps: steps,
            p_steps: steps,
            ..SweepConfig::default()
        };
        for (name, mode) in MODES {
            group.bench_with_input(BenchmarkId::new(name, steps), &config, |b, cfg| {
                b.iter(|| run_sweep(black_box(cfg), mode).unwrap())
            });
        }
    }
    group.finish();
}

fn teleport(c: &mut Criterion) {
    let psi = real_input(0.6).unwrap();
    let rho = outputs(Scenario::Nonlocal, &psi, CloneParams::new(0.45).unwrap())
        .unwrap()
        .rho_a1b1;
    let corrections = Corrections::standard();
    let mut group = c.benchmark_group("monte_carlo");
    group.sample_size(10);
    for samples in [10_000usize, 100_000] {
        for (name, mode) in MODES {
            group.bench_with_input(BenchmarkId::new(name, samples), &samples, |b, &n| {
                b.iter(|| simulate_teleportation(&rho, &corrections, n, 7, mode).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, sweep, teleport);
criterion_main!(benches);
