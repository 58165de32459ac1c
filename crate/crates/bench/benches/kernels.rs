use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use num_rational::BigRational;

use radsum_core::lattice::{build_primal_basis, default_reduction_parameter, lll_reduce, ThetaVector};
use radsum_core::oracle::OracleConfig;
use radsum_core::taylor::{solve_cancellation, ExpansionParams};
use radsum_core::{certified_sum_dist, construct, dual_scan, inhom_min, ConstructOptions, EvalConfig, RadicandTuple};

fn third() -> BigRational {
    BigRational::new(1.into(), 3.into())
}

fn highprec(c: &mut Criterion) {
    let t = RadicandTuple::new(2, vec![99, 101]).unwrap();
    let zero = BigRational::from_integer(0.into());
    c.bench_function("certified_sum_dist (99, 101)", |b| {
        b.iter(|| certified_sum_dist(black_box(&t), &zero, &EvalConfig::default()).unwrap())
    });
}

fn lattice(c: &mut Criterion) {
    let theta = ThetaVector::from_primes(2, &[2, 3, 5], 256).unwrap();
    let delta = BigRational::new(1.into(), 1024.into());
    let basis = build_primal_basis(&theta, 1000, &delta, 96).unwrap();
    let param = default_reduction_parameter();
    c.bench_function("lll_reduce k=3", |b| b.iter(|| lll_reduce(black_box(&basis), &param).unwrap()));
}

fn end_to_end(c: &mut Criterion) {
    let mut g = c.benchmark_group("end_to_end");
    g.sample_size(10);
    g.bench_function("construct d=2 k=2 N=1e6", |b| {
        b.iter(|| construct(2, 2, 1_000_000, &third(), &ConstructOptions::default()).unwrap())
    });
    g.bench_function("inhom_min k=2 N=1000", |b| {
        b.iter(|| inhom_min(2, 2, 1000, &third(), &OracleConfig::default()).unwrap())
    });
    let theta = ThetaVector::from_primes(2, &[2, 3], 128).unwrap();
    let sigma = BigRational::new(1.into(), 2.into());
    g.bench_function("dual_scan H=1e4", |b| {
        b.iter(|| dual_scan(&theta, 10_000, &sigma, &EvalConfig::default()).unwrap())
    });
    let params: Vec<_> = [(1, 1), (-1, 1), (0, -2), (0, 9)]
        .iter()
        .map(|&(u, v)| ExpansionParams::integer(2, u, v).unwrap())
        .collect();
    g.bench_function("solve_cancellation k=4", |b| b.iter(|| solve_cancellation(2, black_box(&params)).unwrap()));
    g.finish();
}

criterion_group!(benches, highprec, lattice, end_to_end);
criterion_main!(benches);
