use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, SamplingMode};
use prioshapes::harness::{Algorithm, GenKind};
use prioshapes::ShapeKind;
use prioshapes_bench::{instance, SIZES};

fn disks(c: &mut Criterion) {
    let mut group = c.benchmark_group("disks");
    group.sampling_mode(SamplingMode::Flat).sample_size(10);
    for n in SIZES {
        let inst = instance(GenKind::Uniform, ShapeKind::Disk, n, 1.0);
        for algo in [Algorithm::Naive, Algorithm::Quadtree, Algorithm::Cquadtree] {
            group.bench_with_input(BenchmarkId::new(algo.token(), n), &inst, |b, inst| {
                b.iter(|| algo.solve(inst).unwrap())
            });
        }
    }
    group.finish();
}

fn clustered_disks(c: &mut Criterion) {
    let mut group = c.benchmark_group("clustered_disks");
    group.sampling_mode(SamplingMode::Flat).sample_size(10);
    let inst = instance(GenKind::Cluster, ShapeKind::Disk, 8_000, 16.0);
    for algo in [Algorithm::Quadtree, Algorithm::Cquadtree] {
        group.bench_function(algo.token(), |b| b.iter(|| algo.solve(&inst).unwrap()));
    }
    group.finish();
}

fn squares(c: &mut Criterion) {
    let mut group = c.benchmark_group("squares");
    group.sampling_mode(SamplingMode::Flat).sample_size(10);
    for n in SIZES {
        let inst = instance(GenKind::Uniform, ShapeKind::Square, n, 100.0);
        for algo in [Algorithm::Naive, Algorithm::Squares] {
            group.bench_with_input(BenchmarkId::new(algo.token(), n), &inst, |b, inst| {
                b.iter(|| algo.solve(inst).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, disks, clustered_disks, squares);
criterion_main!(benches);
