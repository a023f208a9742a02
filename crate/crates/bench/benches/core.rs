use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use sqfree_core::arith::DegreeCounter;
use sqfree_core::cover::{run_capped_greedy, run_greedy};
use sqfree_core::oracle::max_independent_set_exact;
use sqfree_core::sieve::{stream_squarefree, DEFAULT_SEGMENT};
use sqfree_core::FactorList;

fn stream(c: &mut Criterion) {
    let mut g = c.benchmark_group("stream");
    for hi in [1_000_000u64, 10_000_000] {
        g.throughput(Throughput::Elements(hi));
        g.bench_with_input(BenchmarkId::from_parameter(hi), &hi, |b, &hi| {
            b.iter(|| stream_squarefree(1, hi, DEFAULT_SEGMENT).count())
        });
    }
    g.finish();
}

fn degree(c: &mut Criterion) {
    let n = 10_000_000_000u64;
    let counter = DegreeCounter::new(n);
    let mut g = c.benchmark_group("degree");
    g.sample_size(20);
    for primes in [&[3u64][..], &[3, 5, 7, 11, 13], &[3, 5, 7, 11, 13, 17, 19, 23, 29]] {
        let ell = FactorList::from_primes(primes);
        g.bench_with_input(BenchmarkId::new("n=1e10", ell.value()), &ell, |b, ell| {
            b.iter(|| counter.count(black_box(ell), n))
        });
    }
    g.finish();
}

fn covers(c: &mut Criterion) {
    let mut g = c.benchmark_group("cover");
    g.sample_size(10);
    g.bench_function("capped-greedy n=1e5", |b| {
        b.iter(|| run_capped_greedy(black_box(100_000), 3).is_ok())
    });
    g.bench_function("greedy n=1e4", |b| {
        b.iter(|| run_greedy(black_box(10_000)).is_ok())
    });
    g.finish();
}

fn oracle(c: &mut Criterion) {
    let mut g = c.benchmark_group("oracle");
    g.sample_size(10);
    for n in [200u64, 1000] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| max_independent_set_exact(n).unwrap().size)
        });
    }
    g.finish();
}

criterion_group!(benches, stream, degree, covers, oracle);
criterion_main!(benches);
