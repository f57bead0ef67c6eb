use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::cycles::{cycle_point, primitive_alternating_cycles, CycleWitness};
use super::{
    transitive_closure, union_upper_lower, Edge, GraphError, Layer, PartiallyDirectedGraph,
};

/// A cone in `H_n` generated by roots `e_i - e_j`, plus pairs `{i, j}` for
/// which both `e_i - e_j` and `e_j - e_i` lie in the cone.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RootCone {
    n: usize,
    generators: BTreeSet<(usize, usize)>,
    lineality_pairs: BTreeSet<(usize, usize)>,
}

impl RootCone {
    pub fn new(
        n: usize,
        generators: impl IntoIterator<Item = (usize, usize)>,
        lineality_pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let check = |(i, j): (usize, usize)| {
            if i == 0 || j == 0 || i > n || j > n || i == j {
                Err(GraphError::BadRoot(i, j))
            } else {
                Ok((i, j))
            }
        };
        let generators = generators
            .into_iter()
            .map(check)
            .collect::<Result<_, _>>()?;
        let lineality_pairs = lineality_pairs
            .into_iter()
            .map(|p| check(p).map(|(i, j)| (i.min(j), i.max(j))))
            .collect::<Result<_, _>>()?;
        Ok(Self {
            n,
            generators,
            lineality_pairs,
        })
    }

    /// Parses whitespace-separated tokens `i>j` (the root `e_i - e_j`) and
    /// `i~j` (a lineality pair).
    pub fn parse(n: usize, text: &str) -> Result<Self, GraphError> {
        let mut gens = Vec::new();
        let mut lin = Vec::new();
        for tok in text.split_whitespace() {
            let (sep, target) = if tok.contains('>') {
                ('>', &mut gens)
            } else if tok.contains('~') {
                ('~', &mut lin)
            } else {
                return Err(GraphError::Syntax(tok.to_string()));
            };
            let (a, b) = tok.split_once(sep).unwrap();
            let parse = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| GraphError::Syntax(tok.to_string()))
            };
            target.push((parse(a)?, parse(b)?));
        }
        Self::new(n, gens, lin)
    }

    /// Largest label mentioned in a description, for sizing the ambient space.
    pub fn max_label(text: &str) -> usize {
        text.split(|c: char| !c.is_ascii_digit())
            .filter_map(|s| s.parse::<usize>().ok())
            .max()
            .unwrap_or(0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &BTreeSet<(usize, usize)> {
        &self.generators
    }

    pub fn lineality_pairs(&self) -> &BTreeSet<(usize, usize)> {
        &self.lineality_pairs
    }

    /// The transitively closed graph `Γ_σ` on `[n]`.
    pub fn graph(&self) -> PartiallyDirectedGraph {
        let mut g = PartiallyDirectedGraph::new(1..=self.n);
        for &(i, j) in &self.generators {
            g.add_edge(Edge::directed(i, j, Layer::Plain));
        }
        for &(i, j) in &self.lineality_pairs {
            g.add_edge(Edge::undirected(i, j, Layer::Plain));
        }
        transitive_closure(&g).expect("single layer")
    }

    /// Whether `e_i - e_j` lies in the cone.
    pub fn contains_root(&self, i: usize, j: usize) -> bool {
        let g = self.graph();
        g.contains(&Edge::directed(i, j, Layer::Plain))
            || g.contains(&Edge::undirected(i, j, Layer::Plain))
    }

    /// Spanning vectors: every generator and both signs of every lineality root.
    pub fn spanning_vectors(&self) -> Vec<Vec<i64>> {
        let root = |i: usize, j: usize| {
            let mut v = vec![0i64; self.n];
            v[i - 1] = 1;
            v[j - 1] = -1;
            v
        };
        let mut out: Vec<Vec<i64>> = self.generators.iter().map(|&(i, j)| root(i, j)).collect();
        for &(i, j) in &self.lineality_pairs {
            out.push(root(i, j));
            out.push(root(j, i));
        }
        out
    }
}

impl fmt::Display for RootCone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let toks: Vec<String> = self
            .generators
            .iter()
            .map(|(i, j)| format!("{i}>{j}"))
            .chain(self.lineality_pairs.iter().map(|(i, j)| format!("{i}~{j}")))
            .collect();
        f.write_str(&toks.join(" "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConeIntersection {
    pub is_root_cone: bool,
    /// `x_C` for every primitive alternating cycle, sorted and deduplicated.
    /// Only a ray description when the intersection is pointed; 2-cycles
    /// contribute every common root, extreme or not.
    pub rays: Vec<Vec<i64>>,
    /// A primitive alternating cycle of length at least four, if any.
    pub witness: Option<CycleWitness>,
}

/// Intersects two root cones on the same `[n]` through their graphs.
pub fn intersect_root_cones(s: &RootCone, t: &RootCone) -> Result<ConeIntersection, GraphError> {
    if s.n != t.n {
        return Err(GraphError::VertexMismatch);
    }
    let g = union_upper_lower(&s.graph(), &t.graph())?;
    let cycles = primitive_alternating_cycles(&g)?;
    let witness = cycles.iter().find(|c| c.len() >= 4).cloned();
    let mut rays = cycles
        .iter()
        .map(|c| cycle_point(c, s.n))
        .collect::<Result<Vec<_>, _>>()?;
    rays.sort();
    rays.dedup();
    Ok(ConeIntersection {
        is_root_cone: witness.is_none(),
        rays,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn root(n: usize, terms: &[(usize, usize)]) -> Vec<i64> {
        let mut v = vec![0; n];
        for &(i, j) in terms {
            v[i - 1] += 1;
            v[j - 1] -= 1;
        }
        v
    }

    fn sorted(mut v: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
        v.sort();
        v
    }

    #[test]
    fn four_cycle_example() {
        let s = RootCone::parse(4, "1>2 2>3 3>4").unwrap();
        let t = RootCone::parse(4, "1>4 2>1 3>2").unwrap();
        let g = union_upper_lower(&s.graph(), &t.graph()).unwrap();
        let cycles = primitive_alternating_cycles(&g).unwrap();
        let seqs: Vec<_> = cycles.iter().map(|c| c.vertex_sequence()).collect();
        assert_eq!(
            seqs,
            vec![vec![1, 4], vec![2, 4], vec![3, 4], vec![1, 2, 3, 4]]
        );

        let r = intersect_root_cones(&s, &t).unwrap();
        assert!(!r.is_root_cone);
        assert_eq!(
            r.rays,
            sorted(vec![
                root(4, &[(1, 4)]),
                root(4, &[(2, 4)]),
                root(4, &[(3, 4)]),
                root(4, &[(1, 2), (3, 4)]),
            ])
        );
        assert_eq!(r.witness.unwrap().vertex_sequence(), vec![1, 2, 3, 4]);
    }

    #[test]
    fn self_intersection_returns_common_roots() {
        let s = RootCone::parse(3, "1>2 2>3").unwrap();
        let r = intersect_root_cones(&s, &s).unwrap();
        assert!(r.is_root_cone);
        assert_eq!(
            r.rays,
            sorted(vec![
                root(3, &[(1, 2)]),
                root(3, &[(1, 3)]),
                root(3, &[(2, 3)])
            ])
        );
    }

    #[test]
    fn trivial_intersection() {
        let s = RootCone::parse(4, "1>2").unwrap();
        let t = RootCone::parse(4, "3>4").unwrap();
        let r = intersect_root_cones(&s, &t).unwrap();
        assert!(r.is_root_cone);
        assert!(r.rays.is_empty());
    }

    #[test]
    fn lineality_pairs() {
        let s = RootCone::parse(3, "1~2 2>3").unwrap();
        assert!(s.contains_root(2, 1) && s.contains_root(1, 3) && !s.contains_root(3, 1));
        assert_eq!(s.to_string(), "2>3 1~2");
        let r = intersect_root_cones(&s, &s).unwrap();
        assert!(r.rays.contains(&root(3, &[(2, 1)])));
    }

    #[test]
    fn parse_errors() {
        assert_eq!(RootCone::parse(3, "1>4"), Err(GraphError::BadRoot(1, 4)));
        assert_eq!(RootCone::parse(3, "2>2"), Err(GraphError::BadRoot(2, 2)));
        assert!(matches!(
            RootCone::parse(3, "1-2"),
            Err(GraphError::Syntax(_))
        ));
        assert_eq!(RootCone::max_label("1>2 7~3"), 7);
    }
}
