use criterion::{criterion_group, criterion_main, Criterion};
use linkforge_core::geomlink::{conway_gordon_invariant, gauss_linking_oracle, linking_number, random_general_position_embedding};
use linkforge_core::PolygonalCycle;
use std::hint::black_box;

fn linking(c: &mut Criterion) {
    let e = random_general_position_embedding(9, 7).expect("embedding");
    let c1 = PolygonalCycle::new(vec![0, 1, 2, 3]).unwrap();
    let c2 = PolygonalCycle::new(vec![4, 5, 6, 7, 8]).unwrap();
    c.bench_function("linking_number K9 4+5", |b| b.iter(|| linking_number(black_box(&e), &c1, &c2)));
    c.bench_function("gauss_linking_oracle K9 4+5", |b| b.iter(|| gauss_linking_oracle(black_box(&e), &c1, &c2)));

    let k6 = random_general_position_embedding(6, 3).expect("embedding");
    c.bench_function("conway_gordon_invariant K6", |b| b.iter(|| conway_gordon_invariant(black_box(&k6))));
}

criterion_group!(benches, linking);
criterion_main!(benches);
