//! Maximal cones of the normal fan of `Δ_S` as cone graphs.
//!
//! The normal cone at the `k`-th vertex of `Δ_S` is generated by every
//! directed edge of `G_S` except the `k`-th, plus the lineality space of the
//! block cliques. Two simplices are compatible exactly when every pair of
//! maximal cones meets in a root cone, which is decided on the intersection
//! graphs by primitive alternating cycles.

use serde::Serialize;

use super::cycles::{find_long_primitive_cycle, CycleWitness};
use super::{
    graph_of_osp, transitive_closure, union_upper_lower, Edge, GraphError, PartiallyDirectedGraph,
};
use crate::osp::OrderedSetPartition;

/// The cone graph `Γ_σ` of a maximal cone, with the arc it leaves out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximalCone {
    /// The directed edge of `G_S` not among the generators; `None` for a
    /// single block, whose fan is one cone.
    pub omitted: Option<(usize, usize)>,
    pub graph: PartiallyDirectedGraph,
}

/// One cone graph per vertex of `Δ_S`, in block order.
pub fn maximal_cones(p: &OrderedSetPartition) -> Vec<MaximalCone> {
    let g = graph_of_osp(p);
    let arcs: Vec<Edge> = g.edges().filter(|e| e.directed).copied().collect();
    if arcs.is_empty() {
        return vec![MaximalCone {
            omitted: None,
            graph: transitive_closure(&g).expect("single layer"),
        }];
    }
    let blocks = p.blocks();
    let l = blocks.len();
    (0..l)
        .map(|k| {
            let drop = (blocks[k][0], blocks[(k + 1) % l][0]);
            let mut h = PartiallyDirectedGraph::new(g.vertices().iter().copied());
            for e in g.edges() {
                if !(e.directed && (e.tail, e.head) == drop) {
                    h.add_edge(*e);
                }
            }
            MaximalCone {
                omitted: Some(drop),
                graph: transitive_closure(&h).expect("single layer"),
            }
        })
        .collect()
}

/// A pair of maximal cones whose intersection is not a root cone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConeObstruction {
    pub upper_omitted: Option<(usize, usize)>,
    pub lower_omitted: Option<(usize, usize)>,
    /// Primitive alternating cycle of length at least four in `Γ_{σ,τ}`.
    pub cycle: CycleWitness,
}

impl ConeObstruction {
    pub fn map_labels(&self, f: impl Fn(usize) -> usize) -> Self {
        let pair = |p: Option<(usize, usize)>| p.map(|(a, b)| (f(a), f(b)));
        Self {
            upper_omitted: pair(self.upper_omitted),
            lower_omitted: pair(self.lower_omitted),
            cycle: self.cycle.map_labels(&f),
        }
    }

    /// Rebuilds the two cones from the partitions and re-checks the cycle.
    pub fn verify(&self, s: &OrderedSetPartition, t: &OrderedSetPartition) -> bool {
        let pick = |p: &OrderedSetPartition, omitted| {
            maximal_cones(p).into_iter().find(|c| c.omitted == omitted)
        };
        let (Some(a), Some(b)) = (pick(s, self.upper_omitted), pick(t, self.lower_omitted)) else {
            return false;
        };
        let Ok(g) = union_upper_lower(&a.graph, &b.graph) else {
            return false;
        };
        self.cycle.len() >= 4
            && self.cycle.is_alternating()
            && self.cycle.is_simple()
            && self.cycle.is_cycle_of(&g)
            && super::cycles::is_primitive(&g, &self.cycle)
    }
}

/// Searches all pairs of maximal cones for a non-root intersection.
pub fn find_cone_obstruction(
    s: &OrderedSetPartition,
    t: &OrderedSetPartition,
) -> Result<Option<ConeObstruction>, GraphError> {
    if s.ground_set() != t.ground_set() {
        return Err(GraphError::VertexMismatch);
    }
    let lower = maximal_cones(t);
    for a in maximal_cones(s) {
        for b in &lower {
            let g = union_upper_lower(&a.graph, &b.graph)?;
            if let Some(cycle) = find_long_primitive_cycle(&g)? {
                return Ok(Some(ConeObstruction {
                    upper_omitted: a.omitted,
                    lower_omitted: b.omitted,
                    cycle,
                }));
            }
        }
    }
    Ok(None)
}
