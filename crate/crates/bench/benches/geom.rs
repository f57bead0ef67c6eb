use alcove_bench::{cyclic_pairs, family_simplices, pair_sum};
use alcove_core::families::FamilyName;
use alcove_core::geom::{facets, facets_brute_force, is_alcoved, minkowski_sum_vertices};
use criterion::{criterion_group, criterion_main, Criterion};

fn pair_oracle(c: &mut Criterion) {
    let sums: Vec<_> = cyclic_pairs(6, 997)
        .iter()
        .map(|(s, t)| pair_sum(s, t))
        .collect();
    c.bench_function("facets/double_description/pair_n6", |b| {
        b.iter(|| sums.iter().map(|p| facets(p).unwrap().len()).sum::<usize>())
    });
    c.bench_function("is_alcoved/pair_n6", |b| {
        b.iter(|| {
            sums.iter()
                .filter(|p| is_alcoved(p).unwrap().alcoved)
                .count()
        })
    });
    let small: Vec<_> = cyclic_pairs(4, 5)
        .iter()
        .map(|(s, t)| pair_sum(s, t))
        .collect();
    c.bench_function("facets/brute_force/pair_n4", |b| {
        b.iter(|| {
            small
                .iter()
                .map(|p| facets_brute_force(p).unwrap().len())
                .sum::<usize>()
        })
    });
}

fn family_sums(c: &mut Criterion) {
    let mut g = c.benchmark_group("family_sum");
    g.sample_size(10);
    for (name, n) in [
        (FamilyName::Cyclohedron, 5),
        (FamilyName::Dhat, 5),
        (FamilyName::Associahedron, 6),
    ] {
        let simplices = family_simplices(name, n);
        g.bench_function(format!("{name}/n{n}"), |b| {
            b.iter(|| minkowski_sum_vertices(&simplices).unwrap().len())
        });
    }
    g.finish();
}

criterion_group!(benches, pair_oracle, family_sums);
criterion_main!(benches);
