//! Benchmarks for the engine's hot paths: overlap-profile scans, global-max
//! certification, the threshold special function, the pair-moment formula,
//! and the graph solvers.

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use indset_core::bounds::lambert_w;
use indset_core::graph::{exact_mis, karp_sipser};
use indset_core::moments::expected_x2_formula;
use indset_core::stationary::{
    certify_global_max_with, schedule_c, suggested_margin, CertifyOptions, LemmaSchedule,
};
use indset_core::{ModelParams, MultiGraph};

fn overlap_scan(c: &mut Criterion) {
    let params = ModelParams::new(0.3, 1.0).expect("valid parameters");
    c.bench_function("scan_profile/4096", |b| {
        b.iter(|| params.scan_profile(black_box(4096)).expect("scan succeeds"))
    });
}

fn certification(c: &mut Criterion) {
    let alpha = 1e-6;
    let degree = schedule_c(LemmaSchedule::Lemma4 { x: 1.6 }, alpha);
    let params = ModelParams::new(alpha, degree).expect("valid parameters");
    let options = CertifyOptions {
        margin: suggested_margin(alpha),
        ..CertifyOptions::default()
    };
    c.bench_function("certify_global_max/alpha=1e-6", |b| {
        b.iter(|| certify_global_max_with(black_box(&params), options).expect("certify succeeds"))
    });
}

fn special_function(c: &mut Criterion) {
    c.bench_function("lambert_w/1e6", |b| b.iter(|| lambert_w(black_box(1e6))));
}

fn pair_moment(c: &mut Criterion) {
    c.bench_function("expected_x2_formula/n=400", |b| {
        b.iter(|| {
            expected_x2_formula(black_box(400), 200, 120, 0.5).expect("formula in range")
        })
    });
}

fn solvers(c: &mut Criterion) {
    let small = MultiGraph::sample(40, 60, 7).expect("sample succeeds");
    c.bench_function("exact_mis/n=40,m=60", |b| {
        b.iter(|| exact_mis(black_box(&small)).expect("within the exact cap"))
    });

    let large = MultiGraph::sample(10_000, 15_000, 11).expect("sample succeeds");
    c.bench_function("karp_sipser/n=10000,m=15000", |b| {
        b.iter(|| karp_sipser(black_box(&large), 3))
    });
}

criterion_group!(
    benches,
    overlap_scan,
    certification,
    special_function,
    pair_moment,
    solvers
);
criterion_main!(benches);
