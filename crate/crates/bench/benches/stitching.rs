use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use linkforge_core::pipelines::{stitch_links, two_component_pipeline, SupplierSpec};
use linkforge_core::simplicial::{build_path, build_prism_sphere};
use linkforge_core::{Int, StitchInput};
use std::hint::black_box;

fn stitching(c: &mut Criterion) {
    let mut group = c.benchmark_group("stitch_links");
    for (s, t, q) in [(1, 0, 2), (1, 1, 2), (1, 1, 3)] {
        let input = StitchInput::random_minimal(s, t, q, 5, 11).expect("input");
        group.bench_with_input(BenchmarkId::from_parameter(format!("S{s}T{t}q{q}")), &input, |b, input| {
            b.iter(|| stitch_links(black_box(input)))
        });
    }
    group.finish();

    let keys: Vec<Int> = [3, 1, 4, 1, 5].into_iter().map(Int::from).collect();
    let supplier = SupplierSpec::seeded(2, -20, 20);
    c.bench_function("two_component q=5", |b| {
        b.iter(|| two_component_pipeline(black_box(&keys), 5, &supplier))
    });
}

fn prism(c: &mut Criterion) {
    let disc = build_path(2, 8).expect("path");
    c.bench_function("build_prism_sphere n=2 l=8 m=40", |b| {
        b.iter(|| build_prism_sphere(black_box(disc.complex()), 40))
    });
}

criterion_group!(benches, stitching, prism);
criterion_main!(benches);
