use criterion::{black_box, criterion_group, criterion_main, Criterion};

use qal_core::coords::Geometry;
use qal_core::density::{axial_profile, classify_topology, Source, EPS_FLAT, EPS_REL};
use qal_core::gaussian::{variational_ground, BasisSpec, DEFAULT_TAU};
use qal_core::oracle::{assemble, lowest_eigenpair, GridSpec};
use qal_core::separated::{angular_converged, solve_ground};

fn separated(c: &mut Criterion) {
    c.bench_function("angular p^2=1", |b| b.iter(|| angular_converged(black_box(1.0)).unwrap()));
    for r in [0.01, 2.0, 20.0] {
        c.bench_function(&format!("solve_ground R={r}"), |b| b.iter(|| solve_ground(black_box(r), 1e-12).unwrap()));
    }
}

fn variational(c: &mut Criterion) {
    let basis = BasisSpec::reference();
    let g = Geometry::new(2.0).unwrap();
    c.bench_function("variational reference R=2", |b| {
        b.iter(|| variational_ground(black_box(&basis), &g, DEFAULT_TAU).unwrap())
    });
}

fn oracle(c: &mut Criterion) {
    let spec = GridSpec::for_separation(2.0, 40, 24).unwrap();
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    group.bench_function("40x24 R=2", |b| b.iter(|| lowest_eigenpair(&assemble(2.0, &spec).unwrap()).unwrap()));
    group.finish();
}

fn density(c: &mut Criterion) {
    let src = Source::Exact(Box::new(solve_ground(2.0, 1e-12).unwrap()));
    c.bench_function("axial profile + classify R=2", |b| {
        b.iter(|| {
            let p = axial_profile(&src, 3.0, 401).unwrap();
            classify_topology(&p, EPS_REL, EPS_FLAT).unwrap()
        })
    });
}

criterion_group!(benches, separated, variational, oracle, density);
criterion_main!(benches);
