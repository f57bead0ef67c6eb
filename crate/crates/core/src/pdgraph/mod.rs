//! Partially directed graphs with layered edges.
//!
//! One type carries every graph the criteria need: the graph `G_S` of an
//! ordered set partition, the two-layer union `G_{S,T}`, the root-cone graphs
//! `Γ_σ` and their intersection graphs `Γ_{σ,τ}`, and the undirected graphs
//! `Γ_L` of root subspaces. Edges of the first operand of a union are tagged
//! [`Layer::Upper`], those of the reversed second operand [`Layer::Lower`].
//! An edge present in both layers is kept twice.

mod cones;
mod cycles;
mod fans;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::osp::OrderedSetPartition;

pub use cones::{intersect_root_cones, ConeIntersection, RootCone};
pub use cycles::{
    cycle_point, find_chordless_cycle_ge4, find_long_primitive_cycle, find_violating_cycle,
    find_violating_cycle_bounded, primitive_alternating_cycles, CycleStep, CycleWitness,
    DEFAULT_VIOLATING_BOUND,
};
pub use fans::{find_cone_obstruction, maximal_cones, ConeObstruction, MaximalCone};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex sets differ")]
    VertexMismatch,
    #[error("expected a single-layer graph")]
    MultiLayer,
    #[error("expected an undirected graph")]
    NotUndirected,
    #[error("component {0:?} is not a clique")]
    NotClique(Vec<usize>),
    #[error("{0} layer is not transitively closed")]
    NotClosed(Layer),
    #[error("graph has {0} vertices, above the exhaustive search bound {1}")]
    TooLarge(usize, usize),
    #[error("cycle is inconsistent: upper and lower sums differ")]
    InconsistentCycle,
    #[error("root index out of range or degenerate pair ({0}, {1})")]
    BadRoot(usize, usize),
    #[error("malformed root cone description {0:?}")]
    Syntax(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layer {
    Upper,
    Lower,
    Plain,
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Layer::Upper => "upper",
            Layer::Lower => "lower",
            Layer::Plain => "plain",
        })
    }
}

/// An edge record. Undirected edges are stored with `tail < head`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub directed: bool,
    pub layer: Layer,
}

impl Edge {
    pub fn directed(tail: usize, head: usize, layer: Layer) -> Self {
        Self {
            tail,
            head,
            directed: true,
            layer,
        }
    }

    pub fn undirected(a: usize, b: usize, layer: Layer) -> Self {
        Self {
            tail: a.min(b),
            head: a.max(b),
            directed: false,
            layer,
        }
    }

    /// Whether the edge can be walked from `from` to `to`.
    pub fn traversable(&self, from: usize, to: usize) -> bool {
        (self.tail == from && self.head == to)
            || (!self.directed && self.tail == to && self.head == from)
    }

    fn reversed(self) -> Self {
        if self.directed {
            Self {
                tail: self.head,
                head: self.tail,
                ..self
            }
        } else {
            self
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PartiallyDirectedGraph {
    vertices: Vec<usize>,
    edges: BTreeSet<Edge>,
}

impl PartiallyDirectedGraph {
    pub fn new(vertices: impl IntoIterator<Item = usize>) -> Self {
        let mut vertices: Vec<usize> = vertices.into_iter().collect();
        vertices.sort_unstable();
        vertices.dedup();
        Self {
            vertices,
            edges: BTreeSet::new(),
        }
    }

    /// Adds an edge; self-loops and exact duplicates are ignored.
    pub fn add_edge(&mut self, edge: Edge) {
        debug_assert!(self.has_vertex(edge.tail) && self.has_vertex(edge.head));
        if edge.tail != edge.head {
            let e = if edge.directed {
                edge
            } else {
                Edge::undirected(edge.tail, edge.head, edge.layer)
            };
            self.edges.insert(e);
        }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn has_vertex(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    /// Edges in the stable dump order.
    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn contains(&self, edge: &Edge) -> bool {
        let e = if edge.directed {
            *edge
        } else {
            Edge::undirected(edge.tail, edge.head, edge.layer)
        };
        self.edges.contains(&e)
    }

    pub fn layers(&self) -> BTreeSet<Layer> {
        self.edges.iter().map(|e| e.layer).collect()
    }

    /// Edges of one layer.
    pub fn layer(&self, layer: Layer) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.layer == layer)
    }

    /// Copy of the graph keeping only the given vertices.
    pub fn induced(&self, keep: &[usize]) -> Self {
        let mut g = Self::new(keep.iter().copied().filter(|v| self.has_vertex(*v)));
        for e in &self.edges {
            if g.has_vertex(e.tail) && g.has_vertex(e.head) {
                g.edges.insert(*e);
            }
        }
        g
    }

    /// Retags every edge with `layer`.
    pub fn with_layer(&self, layer: Layer) -> Self {
        let mut g = Self::new(self.vertices.iter().copied());
        for e in &self.edges {
            g.add_edge(Edge { layer, ..*e });
        }
        g
    }

    /// Reachability matrix over the vertex indices, treating undirected
    /// edges as two arcs.
    fn reachability(&self, layer: Option<Layer>) -> Vec<Vec<bool>> {
        let k = self.vertices.len();
        let idx = |v: usize| self.vertices.binary_search(&v).unwrap();
        let mut r = vec![vec![false; k]; k];
        for e in &self.edges {
            if layer.is_some_and(|l| l != e.layer) {
                continue;
            }
            let (a, b) = (idx(e.tail), idx(e.head));
            r[a][b] = true;
            if !e.directed {
                r[b][a] = true;
            }
        }
        for m in 0..k {
            for i in 0..k {
                if r[i][m] {
                    for j in 0..k {
                        if r[m][j] {
                            r[i][j] = true;
                        }
                    }
                }
            }
        }
        r
    }

    /// Whether every directed path `i ~> j` within each layer is witnessed
    /// by an edge `i -> j` (or `{i, j}`) of that layer.
    pub fn is_transitively_closed(&self, layer: Layer) -> bool {
        let r = self.reachability(Some(layer));
        let v = &self.vertices;
        for i in 0..v.len() {
            for j in 0..v.len() {
                if i != j && r[i][j] {
                    let d = Edge::directed(v[i], v[j], layer);
                    let u = Edge::undirected(v[i], v[j], layer);
                    let ok = if r[j][i] {
                        self.contains(&u)
                    } else {
                        self.contains(&d) || self.contains(&u)
                    };
                    if !ok {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Human-readable dump, one edge per line: `u->v [layer]` or `u--v [layer]`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for e in &self.edges {
            let arrow = if e.directed { "->" } else { "--" };
            out.push_str(&format!("{}{}{} [{}]\n", e.tail, arrow, e.head, e.layer));
        }
        out
    }
}

/// The graph `G_S`: an undirected clique on each block and a directed edge
/// from the minimum of each block to the minimum of the next one, cyclically.
///
/// A single block yields no directed edge (the simplex is a point). Two blocks
/// yield two antiparallel directed edges, which are kept directed.
pub fn graph_of_osp(p: &OrderedSetPartition) -> PartiallyDirectedGraph {
    let mut g = PartiallyDirectedGraph::new(p.ground_set());
    let blocks = p.blocks();
    for b in blocks {
        for (i, &x) in b.iter().enumerate() {
            for &y in &b[i + 1..] {
                g.add_edge(Edge::undirected(x, y, Layer::Plain));
            }
        }
    }
    let l = blocks.len();
    if l > 1 {
        for i in 0..l {
            g.add_edge(Edge::directed(
                blocks[i][0],
                blocks[(i + 1) % l][0],
                Layer::Plain,
            ));
        }
    }
    g
}

/// `G_S ∪ G_T^op`: edges of `upper` tagged upper, edges of `lower` reversed
/// and tagged lower.
pub fn union_upper_lower(
    upper: &PartiallyDirectedGraph,
    lower: &PartiallyDirectedGraph,
) -> Result<PartiallyDirectedGraph, GraphError> {
    if upper.vertices != lower.vertices {
        return Err(GraphError::VertexMismatch);
    }
    let mut g = PartiallyDirectedGraph::new(upper.vertices.iter().copied());
    for e in upper.edges() {
        g.add_edge(Edge {
            layer: Layer::Upper,
            ..*e
        });
    }
    for e in lower.edges() {
        g.add_edge(Edge {
            layer: Layer::Lower,
            ..e.reversed()
        });
    }
    Ok(g)
}

/// `G_{S,T}` for a pair of partitions on the same ground set.
pub fn pair_graph(
    s: &OrderedSetPartition,
    t: &OrderedSetPartition,
) -> Result<PartiallyDirectedGraph, GraphError> {
    union_upper_lower(&graph_of_osp(s), &graph_of_osp(t))
}

/// Smallest transitively closed supergraph of a single-layer graph.
/// Antiparallel reachability becomes an undirected edge.
pub fn transitive_closure(
    g: &PartiallyDirectedGraph,
) -> Result<PartiallyDirectedGraph, GraphError> {
    let layers = g.layers();
    if layers.len() > 1 {
        return Err(GraphError::MultiLayer);
    }
    let layer = layers.into_iter().next().unwrap_or(Layer::Plain);
    let r = g.reachability(None);
    let v = &g.vertices;
    let mut out = PartiallyDirectedGraph::new(v.iter().copied());
    for i in 0..v.len() {
        for j in 0..v.len() {
            if i == j || !r[i][j] {
                continue;
            }
            if r[j][i] {
                out.add_edge(Edge::undirected(v[i], v[j], layer));
            } else {
                out.add_edge(Edge::directed(v[i], v[j], layer));
            }
        }
    }
    Ok(out)
}
