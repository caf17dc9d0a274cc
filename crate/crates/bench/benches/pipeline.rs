use criterion::{criterion_group, criterion_main, Criterion};

use ftpoly_core::facefill::{build_s1, s1_figure};
use ftpoly_core::honeypie::{honeypie_generators, named_points};
use ftpoly_core::verify::{symmetry_report, verify_axioms};
use ftpoly_core::{enumerate_elements, orbit_points, point_stabilizer, HoneypieConfig, Window};

fn enumeration(c: &mut Criterion) {
    let cfg = HoneypieConfig::default();
    let g = honeypie_generators(&cfg);
    let u = named_points(&cfg).u;
    let mut group = c.benchmark_group("enumeration");
    for r in [4, 6] {
        let w = Window::from_ints(r, 1).unwrap();
        group.bench_function(format!("elements_r{r}"), |b| b.iter(|| enumerate_elements(&g, &w).len()));
        group.bench_function(format!("orbit_r{r}"), |b| b.iter(|| orbit_points(&g, &u, &w).len()));
    }
    group.bench_function("stabilizer_u", |b| b.iter(|| point_stabilizer(&g, &u).unwrap().len()));
    group.finish();
}

fn pipeline(c: &mut Criterion) {
    let cfg = HoneypieConfig::default();
    let mut group = c.benchmark_group("pipeline");
    group.sample_size(10);
    group.bench_function("s1_figure", |b| b.iter(|| s1_figure(&cfg).unwrap().candidates));
    let w = Window::from_ints(6, 2).unwrap();
    group.bench_function("build_s1_r6", |b| b.iter(|| build_s1(&cfg, &w).unwrap().faces().len()));
    let c1 = ftpoly_core::facefill::s1_construction(&cfg, &w).unwrap();
    group.bench_function("verify_axioms_r6", |b| b.iter(|| verify_axioms(&c1.polyhedron).all_pass()));
    group.bench_function("symmetry_report_r6", |b| {
        b.iter(|| symmetry_report(&c1.group, &c1.polyhedron).unwrap().flags.count)
    });
    group.finish();
}

criterion_group!(benches, enumeration, pipeline);
criterion_main!(benches);
