use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};
use sullivan_core::engine::{minimal_model, EngineOptions};
use sullivan_core::free::{FreeAlgebra, Generator};
use sullivan_core::homotopy::{compare_models, CompareOptions};
use sullivan_core::operad::{builtin, tameness_index};
use sullivan_core::palgebra::Algebra;
use sullivan_core::samples::{s2_cohomology, truncated_polynomial};
use sullivan_core::Convention::Chain;

fn free_dims(c: &mut Criterion) {
    let ger = builtin("Ger", Chain, 5).unwrap();
    c.bench_function("free Ger<a2,b3> dims through 10", |b| {
        b.iter(|| {
            // fresh algebra so the basis cache starts empty
            let a = FreeAlgebra::new(ger.clone(), vec![Generator::new("a", 2, 0), Generator::new("b", 3, 0)])
                .unwrap()
                .with_arity_cap(Some(5));
            (0..=10).map(|k| a.dim(k).unwrap()).sum::<usize>()
        })
    });
    c.bench_function("tameness of Ger, bound 5", |b| b.iter(|| tameness_index(black_box(&ger), 16)));
}

fn models(c: &mut Criterion) {
    let s2: Arc<dyn Algebra> = Arc::new(s2_cohomology(9, 8).unwrap());
    let poly: Arc<dyn Algebra> = Arc::new(truncated_polynomial(2, 3, 13, 8).unwrap());
    let opts = EngineOptions::default();
    c.bench_function("S^2 model through 8", |b| b.iter(|| minimal_model(s2.clone(), 1, 8, &opts).unwrap()));
    c.bench_function("Q[x]/x^3 model through 12", |b| b.iter(|| minimal_model(poly.clone(), 1, 12, &opts).unwrap()));
    let m = minimal_model(poly.clone(), 1, 8, &opts).unwrap();
    let seeded = EngineOptions { section: sullivan_core::engine::SectionMode::Random { seed: 5 }, ..Default::default() };
    let m2 = minimal_model(poly, 1, 8, &seeded).unwrap();
    c.bench_function("compare two Q[x]/x^3 models", |b| {
        b.iter(|| compare_models(&m, &m2, &CompareOptions::default()).unwrap())
    });
}

criterion_group!(benches, free_dims, models);
criterion_main!(benches);
