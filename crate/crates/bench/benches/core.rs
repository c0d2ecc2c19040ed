use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use torelli_core::{
    census, check_certificate, decide_equal_genus1, enumerate_symplectic_2subspaces, lower_bound_h2,
    recover_genus1_subspace, sigma_coords, sigma_of_subspace, CycleSystem, GenusContext, Mode, Verdict,
};

fn planes(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_planes");
    for g in [3, 4] {
        let ctx = GenusContext::new(g).unwrap();
        group.bench_function(format!("g{g}"), |b| b.iter(|| enumerate_symplectic_2subspaces(black_box(ctx)).count()));
    }
    group.finish();
}

fn sigma(c: &mut Criterion) {
    let ctx = GenusContext::new(5).unwrap();
    let all: Vec<_> = enumerate_symplectic_2subspaces(ctx).take(256).collect();
    c.bench_function("sigma_coords_g5_x256", |b| {
        b.iter(|| all.iter().map(|v| sigma_coords(v, Mode::Closed).count_ones()).sum::<usize>())
    });
    let values: Vec<_> = all.iter().map(|v| sigma_of_subspace(v, Mode::Closed)).collect();
    c.bench_function("recover_g5_x256", |b| {
        b.iter(|| values.iter().filter(|s| recover_genus1_subspace(s).is_ok()).count())
    });
}

fn decide(c: &mut Criterion) {
    let ctx = GenusContext::new(4).unwrap();
    let p = CycleSystem::parse("a1, b1; a2, b2", ctx).unwrap();
    let q = CycleSystem::parse("a1 + 2a3, b1 + 2a4; a2 + 2a4, b2", ctx).unwrap();
    c.bench_function("decide_equal_g4", |b| b.iter(|| decide_equal_genus1(black_box(&p), black_box(&q)).unwrap()));
    let Verdict::Equal(cert) = decide_equal_genus1(&p, &q).unwrap() else { panic!("expected equal") };
    c.bench_function("check_certificate_g4", |b| b.iter(|| check_certificate(black_box(&cert)).passed()));
}

fn bounds(c: &mut Criterion) {
    let mut group = c.benchmark_group("bounds");
    group.sample_size(10);
    group.bench_function("lower_bound_g3", |b| b.iter(|| lower_bound_h2(black_box(3)).unwrap()));
    group.bench_function("census_g5_k3", |b| b.iter(|| census(black_box(5), 3).unwrap().len()));
    group.finish();
}

criterion_group!(benches, planes, sigma, decide, bounds);
criterion_main!(benches);
