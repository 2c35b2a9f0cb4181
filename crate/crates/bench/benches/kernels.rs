use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use menger_core::energy::{energy_brute, energy_mc, BRUTE_BUDGET};
use menger_core::flatness::{beta_number, flatness, FlatnessOptions};
use menger_core::generators::{generate, GeneratorSpec, Shape};
use menger_core::grassmann::grass_distance;
use menger_core::pointcloud::{ball_query, Closure, PointCloud};
use menger_core::rng::stream;
use menger_core::simplex::{curvature_k, Simplex};
use menger_core::Subspace;

fn cloud(shape: Shape, count: usize) -> PointCloud {
    generate(&GeneratorSpec { shape, count, seed: 1, jitter: 1.0 }).unwrap()
}

fn circle(count: usize) -> PointCloud {
    cloud(Shape::Sphere { m: 1, n: 2, radius: 1.0 }, count)
}

fn sphere(count: usize) -> PointCloud {
    cloud(Shape::Sphere { m: 2, n: 3, radius: 1.0 }, count)
}

fn grassmann(c: &mut Criterion) {
    let mut g = c.benchmark_group("grass_distance");
    for (n, k) in [(3, 1), (3, 2), (10, 4)] {
        let mut rng = stream(7, (n * 16 + k) as u64);
        let (u, v) = (Subspace::random(n, k, &mut rng), Subspace::random(n, k, &mut rng));
        g.bench_function(BenchmarkId::from_parameter(format!("n{n}_k{k}")), |b| {
            b.iter(|| grass_distance(black_box(&u), black_box(&v)).unwrap())
        });
    }
    g.finish();
}

fn curvature(c: &mut Criterion) {
    let t = Simplex::new(vec![vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.2, 1.0, 0.0], vec![0.3, 0.4, 1.0]]).unwrap();
    let pts: Vec<&[f64]> = t.vertices.iter().map(Vec::as_slice).collect();
    c.bench_function("curvature_k_tetrahedron", |b| b.iter(|| curvature_k(black_box(&pts))));
}

fn energy(c: &mut Criterion) {
    let small = circle(60);
    c.bench_function("energy_brute_circle_60", |b| b.iter(|| energy_brute(&small, 4.0, None, BRUTE_BUDGET).unwrap()));
    let big = circle(10_000);
    let mut g = c.benchmark_group("energy_mc_circle_10k");
    g.sample_size(10);
    g.bench_function("20k_samples", |b| b.iter(|| energy_mc(&big, 4.0, 20_000, 3, 1000).unwrap()));
    g.finish();
}

fn flat(c: &mut Criterion) {
    let s = sphere(10_000);
    let opts = FlatnessOptions { certify: false, ..FlatnessOptions::default() };
    let mut g = c.benchmark_group("flatness_sphere_10k");
    g.sample_size(10);
    g.bench_function("beta_number_r0.3", |b| b.iter(|| beta_number(&s, s.point(0), 0.3, &opts).unwrap()));
    g.bench_function("theta_r0.3", |b| b.iter(|| flatness(&s, s.point(0), 0.3, &opts).unwrap()));
    g.finish();
}

fn queries(c: &mut Criterion) {
    let s = sphere(100_000);
    let mut g = c.benchmark_group("ball_query_sphere_100k");
    for r in [0.02, 0.1] {
        g.bench_function(BenchmarkId::from_parameter(r), |b| {
            b.iter(|| ball_query(&s, black_box(s.point(17)), r, Closure::Closed).len())
        });
    }
    g.finish();
}

criterion_group!(benches, grassmann, curvature, energy, flat, queries);
criterion_main!(benches);
