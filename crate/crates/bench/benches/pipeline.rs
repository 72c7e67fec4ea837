use criterion::{criterion_group, criterion_main, Criterion};

use entkit::criteria;
use entkit::fnf::{self, FnfOptions};
use entkit::states;

fn bench_criteria(c: &mut Criterion) {
    let rho = states::gentiles2_state(3, 4).unwrap();
    c.bench_function("ppt_report gentiles2 3x4", |b| {
        b.iter(|| criteria::ppt_report(&rho).unwrap())
    });
    c.bench_function("ccnr_report gentiles2 3x4", |b| {
        b.iter(|| criteria::ccnr_report(&rho).unwrap())
    });
    c.bench_function("cm_report gentiles2 3x4", |b| {
        b.iter(|| criteria::cm_report(&rho).unwrap())
    });
}

fn bench_fnf(c: &mut Criterion) {
    let rho = states::gentiles2_state(3, 4).unwrap();
    let opts = FnfOptions { eps: 1e-10, ..Default::default() };
    c.bench_function("filter_normal_form gentiles2 3x4", |b| {
        b.iter(|| fnf::filter_normal_form(&rho, opts).unwrap())
    });

    let random = states::random_mixed(4, 4, 16, 7).unwrap();
    c.bench_function("filter_normal_form random 4x4", |b| {
        b.iter(|| fnf::filter_normal_form(&random, FnfOptions::default()).unwrap())
    });
}

fn bench_decompose(c: &mut Criterion) {
    let rho = states::random_mixed(4, 4, 16, 11).unwrap();
    c.bench_function("bloch decompose 4x4", |b| {
        b.iter(|| entkit::bloch::decompose(&rho).unwrap())
    });
}

criterion_group!(benches, bench_criteria, bench_fnf, bench_decompose);
criterion_main!(benches);
