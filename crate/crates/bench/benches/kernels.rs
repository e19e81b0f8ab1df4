use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use twistlab::hopf::{cocycle_check, Witness};
use twistlab::sparse::{analytic_apply, kron};
use twistlab::states::{verify_state, StateId};
use twistlab::twist::{chain_twist, jordanian_factor};
use twistlab::{AnalyticFn, Rational, SparseMatrix, TwistSequence, WitnessKind};

fn upper(dim: usize) -> SparseMatrix {
    let trips = (1..=dim)
        .flat_map(|i| (i + 1..=dim).map(move |j| (i, j, Rational::new((i + j) as i64, j as i64))));
    SparseMatrix::from_triplets(dim, trips).unwrap()
}

fn sparse_kernels(c: &mut Criterion) {
    let mut g = c.benchmark_group("sparse");
    for dim in [6, 12, 36] {
        let a = upper(dim);
        let b = a.transpose().add(&SparseMatrix::identity(dim));
        g.bench_with_input(BenchmarkId::new("mul", dim), &dim, |bch, _| {
            bch.iter(|| black_box(&a).mul(&b))
        });
        g.bench_with_input(BenchmarkId::new("exp", dim), &dim, |bch, _| {
            bch.iter(|| analytic_apply(&AnalyticFn::Exp, black_box(&a)).unwrap())
        });
    }
    let (a, b) = (upper(6), upper(6).transpose());
    g.bench_function("kron/6x6", |bch| {
        bch.iter(|| kron(black_box(&a), black_box(&b)))
    });
    g.finish();
}

fn twist_kernels(c: &mut Criterion) {
    let mut g = c.benchmark_group("twist");
    g.sample_size(10);
    let w = Witness::fundamental(6).unwrap();
    let j = TwistSequence::single(jordanian_factor(6, 1).unwrap());
    let chain = chain_twist(6, 1).unwrap();
    let empty = TwistSequence::empty(6);
    g.bench_function("materialize/chain/N=6", |bch| {
        bch.iter(|| w.materialize(black_box(&chain)).unwrap())
    });
    g.bench_function("cocycle/jordanian/N=6", |bch| {
        bch.iter(|| cocycle_check("jordanian", black_box(&j), &empty, &w).unwrap())
    });
    g.bench_function("cocycle/chain/N=6", |bch| {
        bch.iter(|| cocycle_check("chain", black_box(&chain), &empty, &w).unwrap())
    });
    for n in [6, 7] {
        let w = Witness::fundamental(n).unwrap();
        g.bench_with_input(BenchmarkId::new("state/E1E0~E1", n), &n, |bch, &n| {
            bch.iter(|| verify_state(StateId::E1E0TildeE1, n, 3, &w).unwrap())
        });
    }
    let d = Witness::new(WitnessKind::Doubled, 4).unwrap();
    let j4 = TwistSequence::single(jordanian_factor(4, 1).unwrap());
    g.bench_function("materialize/jordanian/doubled/N=4", |bch| {
        bch.iter(|| d.materialize(black_box(&j4)).unwrap())
    });
    g.finish();
}

criterion_group!(benches, sparse_kernels, twist_kernels);
criterion_main!(benches);
