use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use certhom::newton::{condition_mu, newton_projective};
use certhom::sampling::stream_rng;
use certhom::start::random_system_on_sphere;
use certhom::tracker::{certified_step, LinearHomotopy};
use certhom::{bw_norm, TrackerOptions};
use certhom_bench::{degrees, path_fixture, random_point, SEED};

fn evaluation(c: &mut Criterion) {
    let mut group = c.benchmark_group("evaluate_with_jacobian");
    for d in [vec![2, 2], vec![2, 2, 2, 2], vec![3, 3, 3, 3, 3]] {
        let dv = degrees(&d);
        let h = random_system_on_sphere(&dv, &mut stream_rng(SEED, 0));
        let z = random_point(dv.nvars(), 1);
        group.bench_with_input(BenchmarkId::from_parameter(format!("{d:?}")), &d, |b, _| {
            b.iter(|| h.evaluate_with_jacobian(black_box(z.coords())).unwrap())
        });
    }
    group.finish();
}

fn conditioning(c: &mut Criterion) {
    let dv = degrees(&[2, 2, 2, 2]);
    let h = random_system_on_sphere(&dv, &mut stream_rng(SEED, 0));
    let z = random_point(dv.nvars(), 1);
    c.bench_function("bw_norm n=4", |b| b.iter(|| bw_norm(black_box(&h))));
    c.bench_function("condition_mu n=4", |b| b.iter(|| condition_mu(&h, black_box(&z))));
    c.bench_function("newton_projective n=4", |b| b.iter(|| newton_projective(&h, black_box(&z))));
}

fn step(c: &mut Criterion) {
    let (pair, f) = path_fixture(&[2, 2, 2, 2]);
    let homotopy = LinearHomotopy::new(&pair.g, &f).unwrap();
    let g = homotopy.value_at(0.0);
    let gdot = homotopy.tangent_at(0.0);
    let opts = TrackerOptions::default();
    c.bench_function("certified_step n=4", |b| {
        b.iter(|| certified_step(&g, &gdot, black_box(&pair.zeta0), &opts).unwrap())
    });
}

criterion_group!(benches, evaluation, conditioning, step);
criterion_main!(benches);
