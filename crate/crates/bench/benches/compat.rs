use alcove_bench::{cyclic_pairs, partition_pairs};
use alcove_core::compat::{
    check_pair, check_pair_small, check_pair_with, count_compatible_with_standard, CountMode,
    Strategy,
};
use alcove_core::osp::OrderedSetPartition;
use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

fn pairs(c: &mut Criterion) {
    let six = cyclic_pairs(6, 97);
    c.bench_function("check_pair/interlacing/n6", |b| {
        b.iter(|| {
            six.iter()
                .filter(|(s, t)| check_pair(s, t).unwrap().compatible)
                .count()
        })
    });
    c.bench_function("check_pair_small/violating_cycle/n6", |b| {
        b.iter(|| {
            six.iter()
                .filter(|(s, t)| check_pair_small(s, t).unwrap().compatible)
                .count()
        })
    });
    let degenerate = partition_pairs(5, 151);
    c.bench_function("check_pair/maximal_cones/n5", |b| {
        b.iter(|| {
            degenerate
                .iter()
                .filter(|(s, t)| check_pair(s, t).unwrap().compatible)
                .count()
        })
    });
    // the restriction memo is thread-local and outlives iterations, so this
    // measures the warm path
    let (s, t) = (
        OrderedSetPartition::standard(10),
        OrderedSetPartition::parse("1 2|3|4 5|6|7 8|9|10").unwrap(),
    );
    c.bench_function("check_pair/restriction/n10", |b| {
        b.iter_batched(
            || (s.clone(), t.clone()),
            |(s, t)| check_pair_with(black_box(&s), black_box(&t), Strategy::Restriction).unwrap(),
            BatchSize::SmallInput,
        )
    });
}

fn counting(c: &mut Criterion) {
    let mut g = c.benchmark_group("count");
    g.sample_size(10);
    g.bench_function("four_only/n8", |b| {
        b.iter(|| count_compatible_with_standard(8, CountMode::FourOnly).unwrap())
    });
    g.bench_function("full/n8", |b| {
        b.iter(|| count_compatible_with_standard(8, CountMode::Full).unwrap())
    });
    g.finish();
}

criterion_group!(benches, pairs, counting);
criterion_main!(benches);
