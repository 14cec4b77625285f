use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gamma_torsion::gamma::gamma;
use gamma_torsion::groups::parse_group_spec;
use gamma_torsion::linalg::{smith_normal_form, IntMatrix};
use gamma_torsion::modules::{coinvariants, random_unimodular};
use gamma_torsion::pipeline::{compute, Options, Side};
use gamma_torsion::resolution::presentation_complex;

const GROUPS: &[&str] = &["C2xC2", "C4xC2", "D8", "C4xC2xC2", "C2xC2xC2xC2"];

fn smith(c: &mut Criterion) {
    let mut group = c.benchmark_group("smith_normal_form");
    for n in [8, 16, 32] {
        let (p, _) = random_unimodular(n, 1);
        let (q, _) = random_unimodular(n, 2);
        let mut d = IntMatrix::identity(n);
        for i in 0..n {
            d[(i, i)] = ((i % 4) + 1).into();
        }
        let a = p.mul(&d).mul(&q);
        group.bench_with_input(BenchmarkId::from_parameter(n), &a, |b, a| {
            b.iter(|| smith_normal_form(a))
        });
    }
    group.finish();
}

fn gamma_of_ker(c: &mut Criterion) {
    let mut group = c.benchmark_group("gamma_ker_d2");
    group.sample_size(10);
    for name in GROUPS {
        let g = Arc::new(parse_group_spec(name).unwrap());
        let k = presentation_complex(&g).unwrap().ker_d2().unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(name), &k, |b, k| {
            b.iter(|| gamma(k).unwrap())
        });
    }
    group.finish();
}

fn coinvariants_of_gamma(c: &mut Criterion) {
    let mut group = c.benchmark_group("coinvariants_gamma_ker_d2");
    group.sample_size(10);
    for name in GROUPS {
        let g = Arc::new(parse_group_spec(name).unwrap());
        let k = presentation_complex(&g).unwrap().ker_d2().unwrap();
        let gk = gamma(&k).unwrap().into_module();
        group.bench_with_input(BenchmarkId::from_parameter(name), &gk, |b, m| {
            b.iter(|| coinvariants(m))
        });
    }
    group.finish();
}

fn full_pipeline(c: &mut Criterion) {
    let mut group = c.benchmark_group("compute_both");
    group.sample_size(10);
    for name in ["C4xC2", "Q8", "C4xC2xC2"] {
        group.bench_with_input(BenchmarkId::from_parameter(name), name, |b, name| {
            b.iter(|| compute(name, Side::Both, &Options::default()).unwrap())
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    smith,
    gamma_of_ker,
    coinvariants_of_gamma,
    full_pipeline
);
criterion_main!(benches);
