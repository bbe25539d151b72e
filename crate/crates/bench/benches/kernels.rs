use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use exceedance_bench::{binomial_points, poisson_means, small_grid};
use exceedance_core::bounds::theorem1_bound;
use exceedance_core::interval::interval_exp;
use exceedance_core::poisson;
use exceedance_core::{run_claim_sweep, BinomialLaw, RunOptions};

fn binomial(c: &mut Criterion) {
    for params in binomial_points() {
        let label = format!("n={} p={}", params.n(), params.p());
        c.bench_function(&format!("law/{label}"), |b| {
            b.iter(|| BinomialLaw::new(black_box(&params)))
        });
        let law = BinomialLaw::new(&params);
        c.bench_function(&format!("mad/{label}"), |b| {
            b.iter(|| black_box(&law).mad())
        });
        c.bench_function(&format!("main_bound_128/{label}"), |b| {
            b.iter(|| theorem1_bound(black_box(&params), false, 128).unwrap())
        });
    }
}

fn poisson_kernels(c: &mut Criterion) {
    for lambda in poisson_means() {
        c.bench_function(&format!("exp_neg_256/{lambda}"), |b| {
            b.iter(|| interval_exp(&-black_box(lambda.clone()), 256))
        });
        c.bench_function(&format!("poisson_tce_128/{lambda}"), |b| {
            b.iter(|| poisson::tce_at(black_box(&lambda), 3, 128).unwrap())
        });
    }
}

fn sweeps(c: &mut Criterion) {
    let grid = small_grid();
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    for claim in ["THM1_RELAXED", "IDENTITY_4", "PROOF_CHAIN"] {
        group.bench_function(claim, |b| {
            b.iter(|| run_claim_sweep(&grid, claim, &RunOptions::default()).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, binomial, poisson_kernels, sweeps);
criterion_main!(benches);
