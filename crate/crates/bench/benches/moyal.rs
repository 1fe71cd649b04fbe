use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use epistrict_core::moyal::{gaussian_test_set, moyal_star, moyal_star_fourier, weyl_kernel, PhaseGrid};
use std::hint::black_box;

fn bench_moyal(c: &mut Criterion) {
    let mut group = c.benchmark_group("moyal");
    group.sample_size(10);
    let set = gaussian_test_set();
    for n in [32usize, 64, 128] {
        let grid = PhaseGrid::symmetric(n, 0.5).unwrap();
        let (f, g) = (set[0].sample(grid), set[1].sample(grid));
        group.bench_with_input(BenchmarkId::new("weyl_kernel", n), &f, |b, f| b.iter(|| weyl_kernel(black_box(f))));
        group.bench_with_input(BenchmarkId::new("star_kernel", n), &(&f, &g), |b, (f, g)| {
            b.iter(|| moyal_star(black_box(f), black_box(g)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("star_fourier", n), &(&f, &g), |b, (f, g)| {
            b.iter(|| moyal_star_fourier(black_box(f), black_box(g)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_moyal);
criterion_main!(benches);
