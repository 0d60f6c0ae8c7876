use cfk_bench::{fig8, fig8_a0, fig8_double};
use cfk_cli::pipeline::{theorem_pipeline, Options};
use cfk_core::{
    connected_sum_surgery, double, extract_a0, find_local_map_to_trivial, homology_fu, standard_model, Convention,
};
use criterion::{black_box, criterion_group, criterion_main, Criterion};

fn stages(c: &mut Criterion) {
    let k = fig8().unwrap();
    let d = fig8_double().unwrap();
    let s = fig8_a0().unwrap();
    c.bench_function("double fig8", |b| b.iter(|| double(black_box(&k), Convention::Thm31).unwrap()));
    c.bench_function("a0 of the fig8 double", |b| b.iter(|| extract_a0(black_box(&d)).unwrap()));
    c.bench_function("homology of a0", |b| b.iter(|| homology_fu(black_box(&s)).unwrap()));
    c.bench_function("local map to trivial", |b| b.iter(|| find_local_map_to_trivial(black_box(&s)).unwrap()));
    let model = standard_model(&homology_fu(&s).unwrap(), &s).unwrap().surgery;
    c.bench_function("model sum with itself", |b| {
        b.iter(|| homology_fu(&connected_sum_surgery(black_box(&model), &model).unwrap()).unwrap())
    });
}

fn full(c: &mut Criterion) {
    c.bench_function("figure-eight pipeline", |b| b.iter(|| theorem_pipeline(Options::default()).unwrap()));
}

criterion_group!(benches, stages, full);
criterion_main!(benches);
