use criterion::{criterion_group, criterion_main, Criterion};
use hforge_core::clifford::{symp_unitary_galois, zauner, SympGal};
use hforge_core::finitefield::FField;
use hforge_core::mubcycler::{cycler_canonical, cycler_eigenvector};

fn bench_reprs(c: &mut Criterion) {
    let f9 = FField::new(3, 2).unwrap();
    let s = SympGal::from_ints(&f9, [1, 1, 0, 1]).unwrap();
    c.bench_function("symp_unitary_exact_d9", |b| {
        b.iter(|| symp_unitary_galois(&s).unwrap())
    });
    c.bench_function("order3_spectrum_d12", |b| b.iter(|| zauner(12).unwrap().dims()));
    let f7 = FField::new(7, 1).unwrap();
    let g0 = cycler_canonical(&f7).unwrap().g0.unwrap();
    c.bench_function("cycler_eigenvector_d7", |b| {
        b.iter(|| cycler_eigenvector(&g0).unwrap().s1_dim)
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = bench_reprs
}
criterion_main!(benches);
