use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use reslab_core::airy::{airy_ai, build_zero_table};
use reslab_core::grushin::{random_data, trial_rng, GrushinModel, ModelParameters};
use reslab_core::sphere::{compute_resonances_with, roots_for_l, BoundaryCondition, SweepOptions};
use reslab_core::Complex64;

fn airy(c: &mut Criterion) {
    let zs: Vec<Complex64> = (0..64).map(|k| Complex64::from_polar(0.5 + 0.4 * k as f64, 0.1 * k as f64)).collect();
    c.bench_function("airy_ai/64 points", |b| {
        b.iter(|| zs.iter().map(|&z| airy_ai(black_box(z)).unwrap().0).sum::<Complex64>())
    });
    c.bench_function("zero_table/200", |b| b.iter(|| build_zero_table(black_box(200)).unwrap()));
}

fn sphere(c: &mut Criterion) {
    let mut g = c.benchmark_group("sphere_roots");
    g.sample_size(10);
    let unchecked = SweepOptions { verify_count: false, ..Default::default() };
    for l in [10usize, 16] {
        g.bench_function(format!("neumann l={l}"), |b| {
            b.iter(|| roots_for_l(black_box(l), BoundaryCondition::Neumann, 1.0, &unchecked, &[]).unwrap())
        });
    }
    // large l is seeded from the two previous angular momenta
    let table = build_zero_table(40).unwrap();
    let set = compute_resonances_with(BoundaryCondition::Neumann, 1.0, 119, &unchecked, &table).unwrap();
    let history: Vec<(usize, Vec<Complex64>)> =
        [118, 119].iter().map(|&l| (l, set.for_l(l).map(|r| r.lambda).collect())).collect();
    g.bench_function("neumann l=120 continued", |b| {
        b.iter(|| roots_for_l(black_box(120), BoundaryCondition::Neumann, 1.0, &unchecked, &history).unwrap())
    });
    let checked = SweepOptions::default();
    g.bench_function("neumann l=40 with count", |b| {
        b.iter(|| roots_for_l(black_box(40), BoundaryCondition::Neumann, 1.0, &checked, &[]).unwrap())
    });
    g.finish();
}

fn grushin(c: &mut Criterion) {
    let table = build_zero_table(200).unwrap();
    let p = ModelParameters::new(&table, 40.0, Complex64::new(0.0, 0.0), 1.0, 6.0).unwrap();
    let m = GrushinModel::new(p, &table, p.n + 60).unwrap();
    let (v, v0, vp) = random_data(&mut trial_rng(0, 0), &m);
    c.bench_function("grushin_solve/lambda=40", |b| b.iter(|| m.solve(black_box(&v), v0, &vp).unwrap()));
}

criterion_group!(benches, airy, sphere, grushin);
criterion_main!(benches);
