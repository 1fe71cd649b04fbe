use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use epistrict_core::qudit::{affine_clifford, QuditSpace};
use epistrict_core::symplectic::{decompose_symplectic, random_symplectic};
use epistrict_core::{Kind, Prime};
use std::hint::black_box;

fn bench_clifford(c: &mut Criterion) {
    let mut group = c.benchmark_group("clifford");
    for (d, n) in [(3, 1), (5, 1), (3, 2), (5, 2), (3, 3)] {
        let kind = Kind::Zd(Prime::new(d).unwrap());
        let space = QuditSpace::new(d, n).unwrap();
        let t = random_symplectic(n, kind, 7);
        let label = format!("d{d}n{n}");
        group.bench_with_input(BenchmarkId::new("decompose", &label), &t, |b, t| {
            b.iter(|| decompose_symplectic(black_box(t.matrix())).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("unitary", &label), &t, |b, t| {
            b.iter(|| affine_clifford(black_box(&space), black_box(t)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_clifford);
criterion_main!(benches);
