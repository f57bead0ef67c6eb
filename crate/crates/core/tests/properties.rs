use alcove_core::compat::{check_pair, check_pair_small, oracle_polytope};
use alcove_core::geom::{
    self, facets, facets_brute_force, is_alcoved, root_cone_intersection_is_root_cone, Sense,
};
use alcove_core::osp::OrderedSetPartition;
use alcove_core::pdgraph::{find_cone_obstruction, intersect_root_cones, RootCone};
use proptest::prelude::*;

/// A random ordered set partition of `[n]`: a permutation cut into blocks.
fn arb_osp(n: usize) -> impl Strategy<Value = OrderedSetPartition> {
    (
        Just((1..=n).collect::<Vec<_>>()).prop_shuffle(),
        prop::collection::vec(any::<bool>(), n - 1),
    )
        .prop_map(|(perm, cuts)| {
            let mut blocks = vec![vec![perm[0]]];
            for (x, cut) in perm[1..].iter().zip(cuts) {
                if cut {
                    blocks.push(vec![*x]);
                } else {
                    blocks.last_mut().unwrap().push(*x);
                }
            }
            OrderedSetPartition::on_range(blocks).unwrap()
        })
}

fn arb_pair(
    lo: usize,
    hi: usize,
) -> impl Strategy<Value = (OrderedSetPartition, OrderedSetPartition)> {
    (lo..=hi).prop_flat_map(|n| (arb_osp(n), arb_osp(n)))
}

fn arb_cyclic_pair(n: usize) -> impl Strategy<Value = (OrderedSetPartition, OrderedSetPartition)> {
    let order = || {
        Just((1..=n).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(|v| OrderedSetPartition::cyclic_order(&v).unwrap())
    };
    (order(), order())
}

fn arb_root_cone(n: usize) -> impl Strategy<Value = RootCone> {
    let root = (1..=n, 1..=n).prop_filter("distinct", |(i, j)| i != j);
    (
        prop::collection::vec(root.clone(), 0..5),
        prop::collection::vec(root, 0..2),
    )
        .prop_map(move |(g, l)| RootCone::new(n, g, l).unwrap())
}

fn facet_keys(fs: &[geom::FacetWitness]) -> Vec<(Vec<i64>, Sense, String)> {
    let mut keys: Vec<_> = fs
        .iter()
        .map(|f| (f.normal_i64().unwrap(), f.sense, f.offset.to_string()))
        .collect();
    keys.sort();
    keys
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn compatibility_is_symmetric((s, t) in arb_pair(2, 7)) {
        let a = check_pair(&s, &t).unwrap();
        let b = check_pair(&t, &s).unwrap();
        prop_assert_eq!(a.compatible, b.compatible);
        prop_assert!(a.recheck(&s, &t));
    }

    #[test]
    fn compatibility_ignores_block_rotation((s, t) in arb_pair(2, 7), k in 0usize..7) {
        let a = check_pair(&s, &t).unwrap().compatible;
        let b = check_pair(&s.rotate(k), &t).unwrap().compatible;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn compatibility_commutes_with_relabeling((s, t) in arb_pair(2, 7), k in 0usize..7) {
        let n = s.len();
        let f = |x: usize| (x - 1 + k) % n + 1;
        let a = check_pair(&s, &t).unwrap().compatible;
        let b = check_pair(&s.relabel(f).unwrap(), &t.relabel(f).unwrap()).unwrap().compatible;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn criterion_matches_oracle((s, t) in arb_pair(2, 5)) {
        let a = check_pair(&s, &t).unwrap().compatible;
        let p = oracle_polytope(&s, &t).unwrap();
        prop_assert_eq!(a, is_alcoved(&p).unwrap().alcoved);
    }

    #[test]
    fn facets_ignore_point_order((s, t) in arb_pair(2, 5), seed in any::<u64>()) {
        let p = oracle_polytope(&s, &t).unwrap();
        let mut pts = p.points().to_vec();
        let len = pts.len();
        for i in 0..len {
            let j = (seed.wrapping_mul(i as u64 + 7) % len as u64) as usize;
            pts.swap(i, j);
        }
        let q = geom::VPolytope::new(p.n(), pts).unwrap();
        prop_assert_eq!(facet_keys(&facets(&p).unwrap()), facet_keys(&facets(&q).unwrap()));
    }

    #[test]
    fn double_description_matches_brute_force((s, t) in arb_pair(2, 4)) {
        let p = oracle_polytope(&s, &t).unwrap();
        prop_assert_eq!(facets(&p).unwrap(), facets_brute_force(&p).unwrap());
    }

    #[test]
    fn hrep_reproduces_facets((s, t) in arb_pair(3, 5)) {
        let p = oracle_polytope(&s, &t).unwrap();
        let v = is_alcoved(&p).unwrap();
        let Some(h) = v.hrep else { return Ok(()); };
        prop_assert!(p.points().iter().all(|x| h.contains(x)));
        prop_assert!(h.satisfies_triangle_inequalities());
        let n = p.n();
        for f in facets(&p).unwrap() {
            let normal = f.normal_i64().unwrap();
            // only full-dimensional sums have facet normals equal to roots
            if normal.iter().filter(|&&x| x != 0).count() != 2 || normal.iter().sum::<i64>() != 0 {
                continue;
            }
            let i = normal.iter().position(|&x| x == 1).unwrap() + 1;
            let j = normal.iter().position(|&x| x == -1).unwrap() + 1;
            let (a, b, off) = match f.sense {
                Sense::AtMost => (i, j, f.offset.clone()),
                Sense::AtLeast => (j, i, -f.offset.clone()),
            };
            prop_assert!(a <= n && b <= n);
            prop_assert_eq!(h.bound(a, b).unwrap(), &off);
        }
    }

    #[test]
    fn root_cone_graphs_match_geometry((s, t) in (2usize..=5).prop_flat_map(|n| (arb_root_cone(n), arb_root_cone(n)))) {
        let graph = intersect_root_cones(&s, &t).unwrap();
        let geometry = root_cone_intersection_is_root_cone(&s, &t).unwrap();
        prop_assert_eq!(graph.is_root_cone, geometry, "{} / {}", s, t);
    }

    #[test]
    fn nondegenerate_seven_restriction_matches_small_search((s, t) in arb_cyclic_pair(7)) {
        let a = check_pair(&s, &t).unwrap().compatible;
        let b = check_pair_small(&s, &t).unwrap().compatible;
        prop_assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn degenerate_seven_restriction_matches_full_cones((s, t) in (arb_osp(7), arb_osp(7))) {
        let a = check_pair(&s, &t).unwrap();
        let b = find_cone_obstruction(&s, &t).unwrap();
        prop_assert_eq!(a.compatible, b.is_none(), "{} / {}", s, t);
    }
}
