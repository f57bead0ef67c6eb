//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line per
//! criterion and exits non-zero if any fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use alcove_core::compat::{
    check_collection, check_pair, check_pair_with, count_compatible_with_standard,
    oracle_collection, oracle_pair, orders_compatible_with_standard, CountMode, Strategy, Witness,
    DEFAULT_COUNT_BOUND,
};
use alcove_core::families::{verify_family_with, FamilyName, FamilySpec, VerifyMode};
use alcove_core::geom::is_root_subspace;
use alcove_core::osp::{all_cyclic_orders, all_normalized, OrderedSetPartition};
use alcove_core::pdgraph::{
    find_chordless_cycle_ge4, find_violating_cycle, intersect_root_cones, pair_graph, Edge, Layer,
    PartiallyDirectedGraph, RootCone,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn osp(s: &str) -> OrderedSetPartition {
    OrderedSetPartition::parse(s).unwrap()
}

fn order(seq: &[usize]) -> OrderedSetPartition {
    OrderedSetPartition::cyclic_order(seq).unwrap()
}

/// Verdicts of `check_pair` and the oracle on every ordered pair of `ps`.
fn oracle_agreement(ps: &[OrderedSetPartition]) -> Result<(usize, usize), String> {
    let pairs: Vec<(usize, usize)> = (0..ps.len())
        .flat_map(|i| (0..ps.len()).map(move |j| (i, j)))
        .collect();
    let results: Vec<Result<bool, String>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (s, t) = (&ps[i], &ps[j]);
            let a = check_pair(s, t).map_err(|e| e.to_string())?;
            let b = oracle_pair(s, t).map_err(|e| e.to_string())?;
            if a.compatible != b.compatible {
                return Err(format!(
                    "{s} vs {t}: criterion {} oracle {}",
                    a.compatible, b.compatible
                ));
            }
            if !a.compatible && !a.recheck(s, t) {
                return Err(format!("{s} vs {t}: witness does not recheck"));
            }
            Ok(a.compatible)
        })
        .collect();
    let mut compatible = 0;
    for r in results {
        compatible += usize::from(r?);
    }
    Ok((pairs.len(), compatible))
}

fn criterion_1() -> Outcome {
    let mut parts = Vec::new();
    for (n, want) in [(4, 36), (5, 576), (6, 14400)] {
        let (total, ok) = oracle_agreement(&all_cyclic_orders(n))?;
        if total != want {
            return Err(format!("n={n}: {total} pairs, expected {want}"));
        }
        parts.push(format!("n={n}: {total} pairs agree ({ok} compatible)"));
    }
    Ok(parts.join("; "))
}

fn criterion_2() -> Outcome {
    let mut parts = Vec::new();
    for (n, want) in [(4, 676), (5, 22500)] {
        let (total, ok) = oracle_agreement(&all_normalized(n))?;
        if total != want {
            return Err(format!("n={n}: {total} pairs, expected {want}"));
        }
        parts.push(format!("n={n}: {total} pairs agree ({ok} compatible)"));
    }
    Ok(parts.join("; "))
}

fn criterion_3() -> Outcome {
    let mut got = Vec::new();
    for n in 4..=10usize {
        let c =
            count_compatible_with_standard(n, CountMode::FourOnly).map_err(|e| e.to_string())?;
        let binom = n * (n - 1) * (n - 2) / 6;
        let want = (1usize << n) + 1 - 2 * n - binom;
        if c != want {
            return Err(format!("n={n}: {c}, formula {want}"));
        }
        got.push(c.to_string());
    }
    // at n = 5 no 6-interlacing fits, so the four-only count is the full
    // compatibility count and can be read off the oracle
    let standard = OrderedSetPartition::standard(5);
    let by_oracle = all_cyclic_orders(5)
        .iter()
        .filter(|o| oracle_pair(&standard, o).is_ok_and(|v| v.compatible))
        .count();
    if by_oracle.to_string() != got[1] {
        return Err(format!("n=5: count {} but oracle {by_oracle}", got[1]));
    }
    Ok(format!(
        "four-only counts n=4..10 match the closed form: {} (n=5 oracle {by_oracle})",
        got.join(", ")
    ))
}

/// Relabels `i -> i + k (mod n)` and rotates so `n` comes last.
fn shift_class(p: &OrderedSetPartition) -> BTreeSet<OrderedSetPartition> {
    let n = p.len();
    (0..n)
        .map(|k| {
            p.relabel(|x| (x - 1 + k) % n + 1)
                .unwrap()
                .normalize_cyclic()
        })
        .collect()
}

fn criterion_4() -> Outcome {
    let full = count_compatible_with_standard(6, CountMode::Full).map_err(|e| e.to_string())?;
    if full != 31 {
        return Err(format!("full count {full}"));
    }
    let four: BTreeSet<_> =
        orders_compatible_with_standard(6, CountMode::FourOnly, DEFAULT_COUNT_BOUND)
            .map_err(|e| e.to_string())?
            .into_iter()
            .collect();
    let all: BTreeSet<_> = orders_compatible_with_standard(6, CountMode::Full, DEFAULT_COUNT_BOUND)
        .map_err(|e| e.to_string())?
        .into_iter()
        .collect();
    let gap: BTreeSet<_> = four.difference(&all).cloned().collect();
    let mut want = shift_class(&order(&[3, 4, 1, 2, 5, 6]));
    want.extend(shift_class(&order(&[1, 4, 5, 2, 3, 6])));
    if gap != want {
        return Err(format!("gap {gap:?}"));
    }
    // the full census against the oracle as well
    let standard = OrderedSetPartition::standard(6);
    let by_oracle = all_cyclic_orders(6)
        .iter()
        .filter(|o| oracle_pair(&standard, o).is_ok_and(|v| v.compatible))
        .count();
    if by_oracle != 31 {
        return Err(format!("oracle census {by_oracle}"));
    }
    let shown: Vec<String> = gap.iter().map(ToString::to_string).collect();
    Ok(format!(
        "full=31 (oracle 31), 1432-avoiding but incompatible: {}",
        shown.join(", ")
    ))
}

/// Greedy collection: random partitions kept only if compatible with every
/// earlier pick.
fn random_collection(
    rng: &mut ChaCha8Rng,
    pool: &[OrderedSetPartition],
    k: usize,
) -> Vec<OrderedSetPartition> {
    let mut out: Vec<OrderedSetPartition> = Vec::new();
    for _ in 0..40 {
        if out.len() == k {
            break;
        }
        let p = pool.choose(rng).unwrap();
        if out.iter().all(|q| check_pair(q, p).unwrap().compatible) {
            out.push(p.clone());
        }
    }
    out
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_a1c0);
    let pools: Vec<Vec<OrderedSetPartition>> = (0..=6)
        .map(|n| if n >= 3 { all_normalized(n) } else { vec![] })
        .collect();
    let mut passing = 0;
    let mut failing_checked = 0;
    let mut sizes = [0usize; 6];
    while passing < 200 {
        let n = rng.gen_range(3..=6);
        let k = rng.gen_range(2..=5);
        // one in four collections is fully random, as a control
        let ps: Vec<OrderedSetPartition> = if rng.gen_bool(0.25) {
            (0..k)
                .map(|_| pools[n].choose(&mut rng).unwrap().clone())
                .collect()
        } else {
            random_collection(&mut rng, &pools[n], k)
        };
        let pairwise = check_collection(&ps).map_err(|e| e.to_string())?;
        let oracle = oracle_collection(&ps).map_err(|e| e.to_string())?;
        if pairwise.compatible != oracle.compatible {
            let shown: Vec<String> = ps.iter().map(ToString::to_string).collect();
            return Err(format!(
                "[{}]: pairwise {} oracle {}",
                shown.join(", "),
                pairwise.compatible,
                oracle.compatible
            ));
        }
        if pairwise.compatible {
            passing += 1;
            sizes[ps.len()] += 1;
        } else {
            failing_checked += 1;
        }
    }
    Ok(format!(
        "200 pairwise-compatible collections alcoved (sizes 1..5: {:?}), {failing_checked} incompatible controls agree",
        &sizes[1..]
    ))
}

fn criterion_6() -> Outcome {
    let names = [
        FamilyName::Associahedron,
        FamilyName::Cyclohedron,
        FamilyName::Dhat,
        FamilyName::Pellytope,
    ];
    let mut pairwise = 0;
    let mut oracle = 0;
    for name in names {
        let lo = if name == FamilyName::Pellytope { 1 } else { 2 };
        for n in lo..=9 {
            let spec = FamilySpec::new(name, n).map_err(|e| e.to_string())?;
            let r =
                verify_family_with(&spec, VerifyMode::Pairwise, 6).map_err(|e| e.to_string())?;
            if !r.is_alcoved() {
                return Err(format!("{name} n={n} pairwise fails"));
            }
            pairwise += 1;
            if n <= 6 {
                let o =
                    verify_family_with(&spec, VerifyMode::Oracle, 6).map_err(|e| e.to_string())?;
                if !o.is_alcoved() {
                    return Err(format!("{name} n={n} oracle fails"));
                }
                oracle += 1;
            }
        }
    }
    let control =
        FamilySpec::custom(vec![osp("1|2|3|4"), osp("3|2|1|4")]).map_err(|e| e.to_string())?;
    let p = verify_family_with(&control, VerifyMode::Pairwise, 6).map_err(|e| e.to_string())?;
    let o = verify_family_with(&control, VerifyMode::Oracle, 6).map_err(|e| e.to_string())?;
    if p.is_alcoved() || o.is_alcoved() {
        return Err("negative control passes".into());
    }
    let normal = match &o.witness {
        Some(Witness::Facet(f)) => f.normal_i64(),
        _ => None,
    };
    if normal != Some(vec![1, -1, 1, -1]) {
        return Err(format!("control normal {normal:?}"));
    }
    Ok(format!(
        "{pairwise} pairwise and {oracle} oracle family checks alcoved; control fails with normal (1,-1,1,-1)"
    ))
}

fn criterion_7() -> Outcome {
    let s = RootCone::parse(4, "1>2 2>3 3>4").map_err(|e| e.to_string())?;
    let t = RootCone::parse(4, "1>4 2>1 3>2").map_err(|e| e.to_string())?;
    let r = intersect_root_cones(&s, &t).map_err(|e| e.to_string())?;
    let got: BTreeSet<Vec<i64>> = r.rays.iter().cloned().collect();
    let want: BTreeSet<Vec<i64>> = [
        vec![1, 0, 0, -1],
        vec![0, 1, 0, -1],
        vec![0, 0, 1, -1],
        vec![1, -1, 1, -1],
    ]
    .into_iter()
    .collect();
    if got != want || r.rays.len() != 4 {
        return Err(format!("rays {:?}", r.rays));
    }
    if r.is_root_cone || r.witness.is_none() {
        return Err("intersection reported as a root cone".into());
    }
    Ok("rays e14, e24, e34, e12+e34; not a root cone".into())
}

/// `Γ_{L_1}` and `Γ_{L_2}` for `L_1 = <e12, e34, ...>`, `L_2 = <e23, ..., e_{2n,1}>`.
fn remark_graphs(m: usize) -> (PartiallyDirectedGraph, PartiallyDirectedGraph) {
    let mut a = PartiallyDirectedGraph::new(1..=m);
    let mut b = PartiallyDirectedGraph::new(1..=m);
    for i in (1..=m).step_by(2) {
        a.add_edge(Edge::undirected(i, i + 1, Layer::Plain));
        b.add_edge(Edge::undirected(i + 1, (i + 1) % m + 1, Layer::Plain));
    }
    (a, b)
}

fn criterion_8() -> Outcome {
    if is_root_subspace(&[vec![1, -1, 1, -1]], 4) {
        return Err("span{e12+e34} reported as a root subspace".into());
    }
    let mut parts = Vec::new();
    for m in [4usize, 6, 8] {
        let (a, b) = remark_graphs(m);
        let c = find_chordless_cycle_ge4(&a, &b)
            .map_err(|e| e.to_string())?
            .ok_or(format!("2n={m}: no cycle"))?;
        if c.len() != m {
            return Err(format!("2n={m}: cycle of length {}", c.len()));
        }
        let mut checked = 0;
        for size in 1..m {
            for keep in itertools::Itertools::combinations(1..=m, size) {
                let r = find_chordless_cycle_ge4(&a.induced(&keep), &b.induced(&keep))
                    .map_err(|e| e.to_string())?;
                if r.is_some() {
                    return Err(format!("2n={m}: cycle on restriction {keep:?}"));
                }
                checked += 1;
            }
        }
        parts.push(format!(
            "2n={m}: {m}-cycle, {checked} proper restrictions clean"
        ));
    }
    Ok(format!("e12+e34 not a root subspace; {}", parts.join("; ")))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7b);
    let pairs: Vec<(OrderedSetPartition, OrderedSetPartition)> = (0..20_000)
        .map(|_| {
            let mut draw = || {
                let mut v: Vec<usize> = (1..=6).collect();
                v.shuffle(&mut rng);
                v.push(7);
                order(&v)
            };
            (draw(), draw())
        })
        .collect();
    let bad = pairs
        .par_iter()
        .map(|(s, t)| -> Result<bool, String> {
            let a = check_pair_with(s, t, Strategy::Restriction).map_err(|e| e.to_string())?;
            let g = pair_graph(s, t).map_err(|e| e.to_string())?;
            let b = find_violating_cycle(&g).map_err(|e| e.to_string())?;
            Ok(a.compatible != b.is_none())
        })
        .collect::<Result<Vec<bool>, String>>()?;
    let compatible = pairs
        .iter()
        .filter(|(s, t)| check_pair(s, t).is_ok_and(|v| v.compatible))
        .count();
    match bad.iter().position(|&b| b) {
        Some(i) => Err(format!("{} vs {} disagree", pairs[i].0, pairs[i].1)),
        None => Ok(format!("20000 pairs agree ({compatible} compatible)")),
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("oracle equivalence, cyclic orders n=4,5,6", criterion_1),
        ("oracle equivalence, all partitions n=4,5", criterion_2),
        ("four-only counts n=4..10", criterion_3),
        ("n=6 full census", criterion_4),
        ("random collections, pairwise vs full sum", criterion_5),
        ("families", criterion_6),
        ("root-cone intersection example", criterion_7),
        ("chordless cycles of crossing root subspaces", criterion_8),
        (
            "restriction vs full violating-cycle search, n=7",
            criterion_9,
        ),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {}: PASS  {name} [{secs:.1}s] {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} [{secs:.1}s] {msg}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
