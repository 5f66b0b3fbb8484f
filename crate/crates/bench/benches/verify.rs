use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use fpp_core::exact::smith_normal_form;
use fpp_core::lattice::enumerate_integral_overlattices;
use fpp_core::report::{run_claims, ConfigSet, Registry};
use fpp_core::surface::{build_config_x, with_branch_l, Case};
use fpp_core::verifier::{contracted_lattice, descent_search, feasible_triples};

fn lattice(c: &mut Criterion) {
    let x = build_config_x(Case::I);
    let l = contracted_lattice(&x).unwrap();
    c.bench_function("snf_contracted_lattice", |b| {
        b.iter(|| smith_normal_form(black_box(l.gram())))
    });
    c.bench_function("index7_overlattices", |b| {
        b.iter(|| enumerate_integral_overlattices(black_box(&l), 7).unwrap())
    });
}

fn verifier(c: &mut Criterion) {
    c.bench_function("feasibility_scan", |b| b.iter(|| feasible_triples().unwrap()));
    let x = with_branch_l(&build_config_x(Case::I), Case::I).unwrap();
    c.bench_function("descent_greedy_level6", |b| {
        b.iter(|| descent_search(black_box(&x), 6).unwrap())
    });
    let set = ConfigSet::embedded(&Case::ALL);
    let registry = Registry::embedded();
    c.bench_function("run_all_claims", |b| b.iter(|| run_claims(black_box(&set), &registry)));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = lattice, verifier
}
criterion_main!(benches);
