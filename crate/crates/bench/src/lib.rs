//! Deterministic fixtures shared by the benches.

use alcove_core::families::{FamilyName, FamilySpec};
use alcove_core::geom::{self, VPolytope};
use alcove_core::osp::{all_cyclic_orders, all_normalized, OrderedSetPartition};

pub type Pair = (OrderedSetPartition, OrderedSetPartition);

/// Every `stride`-th ordered pair of cyclic orders on `[n]`.
pub fn cyclic_pairs(n: usize, stride: usize) -> Vec<Pair> {
    strided(&all_cyclic_orders(n), stride)
}

/// Every `stride`-th ordered pair of normalized partitions of `[n]`.
pub fn partition_pairs(n: usize, stride: usize) -> Vec<Pair> {
    strided(&all_normalized(n), stride)
}

fn strided(ps: &[OrderedSetPartition], stride: usize) -> Vec<Pair> {
    let m = ps.len();
    (0..m * m)
        .step_by(stride.max(1))
        .map(|k| (ps[k / m].clone(), ps[k % m].clone()))
        .collect()
}

/// `Δ_S + Δ_T` as a point set, before vertex pruning.
pub fn pair_sum(s: &OrderedSetPartition, t: &OrderedSetPartition) -> VPolytope {
    geom::minkowski_sum(&[geom::simplex_vertices(s), geom::simplex_vertices(t)])
        .expect("same ground set")
}

/// Vertex sets of the summands of a named family.
pub fn family_simplices(name: FamilyName, n: usize) -> Vec<VPolytope> {
    FamilySpec::new(name, n)
        .expect("valid family size")
        .summands
        .iter()
        .map(geom::simplex_vertices)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_sizes() {
        assert_eq!(cyclic_pairs(4, 1).len(), 36);
        assert_eq!(cyclic_pairs(6, 100).len(), 144);
        assert_eq!(
            pair_sum(
                &OrderedSetPartition::standard(3),
                &OrderedSetPartition::standard(3)
            )
            .len(),
            6
        );
        assert_eq!(family_simplices(FamilyName::Cyclohedron, 4).len(), 9);
    }
}
