use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Edge, GraphError, Layer, PartiallyDirectedGraph};

/// Exhaustive violating-cycle search is only run on graphs this small unless
/// the caller raises the bound.
pub const DEFAULT_VIOLATING_BOUND: usize = 7;

/// One traversed edge of a cycle, oriented in traversal direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CycleStep {
    pub from: usize,
    pub to: usize,
    pub layer: Layer,
    /// Whether the underlying edge record is directed.
    pub directed: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CycleWitness {
    pub edges: Vec<CycleStep>,
}

impl CycleWitness {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Start vertex of every step.
    pub fn vertex_sequence(&self) -> Vec<usize> {
        self.edges.iter().map(|e| e.from).collect()
    }

    pub fn closes(&self) -> bool {
        let k = self.edges.len();
        (0..k).all(|i| self.edges[i].to == self.edges[(i + 1) % k].from)
    }

    pub fn is_simple(&self) -> bool {
        let mut v = self.vertex_sequence();
        v.sort_unstable();
        v.windows(2).all(|w| w[0] != w[1])
    }

    pub fn is_alternating(&self) -> bool {
        let k = self.edges.len();
        k % 2 == 0 && (0..k).all(|i| self.edges[i].layer != self.edges[(i + 1) % k].layer)
    }

    /// Number of maximal runs of consecutive upper steps, read cyclically.
    pub fn upper_segments(&self) -> usize {
        let k = self.edges.len();
        let up = |i: usize| self.edges[i % k].layer == Layer::Upper;
        if k == 0 {
            return 0;
        }
        if (0..k).all(up) {
            return 1;
        }
        (0..k).filter(|&i| up(i) && !up(i + k - 1)).count()
    }

    /// Simple, closed, and with at least two disjoint upper segments.
    pub fn is_violating(&self) -> bool {
        self.closes() && self.is_simple() && self.upper_segments() >= 2
    }

    /// Every step is an edge of `g` walked in an allowed direction.
    pub fn is_cycle_of(&self, g: &PartiallyDirectedGraph) -> bool {
        self.closes()
            && self.edges.iter().all(|s| {
                let e = if s.directed {
                    Edge::directed(s.from, s.to, s.layer)
                } else {
                    Edge::undirected(s.from, s.to, s.layer)
                };
                g.contains(&e)
            })
    }

    pub fn map_labels(&self, f: impl Fn(usize) -> usize) -> Self {
        Self {
            edges: self
                .edges
                .iter()
                .map(|s| CycleStep {
                    from: f(s.from),
                    to: f(s.to),
                    ..*s
                })
                .collect(),
        }
    }

    /// Rotates so the smallest vertex starts the cycle.
    fn canonical(mut self) -> Self {
        if let Some(k) = (0..self.edges.len()).min_by_key(|&i| self.edges[i].from) {
            self.edges.rotate_left(k);
        }
        self
    }
}

/// Outgoing steps per vertex, sorted by (target, layer).
fn adjacency(g: &PartiallyDirectedGraph) -> BTreeMap<usize, Vec<CycleStep>> {
    let mut adj: BTreeMap<usize, Vec<CycleStep>> =
        g.vertices().iter().map(|&v| (v, Vec::new())).collect();
    for e in g.edges() {
        if e.layer == Layer::Plain {
            continue;
        }
        adj.get_mut(&e.tail).unwrap().push(CycleStep {
            from: e.tail,
            to: e.head,
            layer: e.layer,
            directed: e.directed,
        });
        if !e.directed {
            adj.get_mut(&e.head).unwrap().push(CycleStep {
                from: e.head,
                to: e.tail,
                layer: e.layer,
                directed: false,
            });
        }
    }
    for steps in adj.values_mut() {
        steps.sort_by_key(|s| (s.to, s.layer, s.directed));
    }
    adj
}

/// Searches `G_{S,T}` for a violating cycle with the default vertex bound.
pub fn find_violating_cycle(
    g: &PartiallyDirectedGraph,
) -> Result<Option<CycleWitness>, GraphError> {
    find_violating_cycle_bounded(g, DEFAULT_VIOLATING_BOUND)
}

/// Exhaustive search over simple cycles honoring edge directions and layers.
/// The first cycle found (smallest start vertex, then sorted adjacency)
/// is returned.
pub fn find_violating_cycle_bounded(
    g: &PartiallyDirectedGraph,
    bound: usize,
) -> Result<Option<CycleWitness>, GraphError> {
    let n = g.vertices().len();
    if n > bound {
        return Err(GraphError::TooLarge(n, bound));
    }
    if n < 4 {
        return Ok(None);
    }
    let adj = adjacency(g);
    let mut path = Vec::new();
    let mut on_path = BTreeMap::new();
    for &start in g.vertices() {
        on_path.insert(start, true);
        if violating_dfs(&adj, start, start, &mut path, &mut on_path) {
            return Ok(Some(CycleWitness { edges: path }));
        }
        on_path.clear();
    }
    Ok(None)
}

fn violating_dfs(
    adj: &BTreeMap<usize, Vec<CycleStep>>,
    start: usize,
    at: usize,
    path: &mut Vec<CycleStep>,
    on_path: &mut BTreeMap<usize, bool>,
) -> bool {
    for step in &adj[&at] {
        if step.to == start {
            if path.len() >= 3 {
                path.push(*step);
                if (CycleWitness {
                    edges: path.clone(),
                })
                .upper_segments()
                    >= 2
                {
                    return true;
                }
                path.pop();
            }
            continue;
        }
        if step.to < start || on_path.get(&step.to).copied().unwrap_or(false) {
            continue;
        }
        path.push(*step);
        on_path.insert(step.to, true);
        if violating_dfs(adj, start, step.to, path, on_path) {
            return true;
        }
        on_path.insert(step.to, false);
        path.pop();
    }
    false
}

/// Looks for a chordless cycle of length at least four in the union of two
/// undirected graphs whose components are cliques. Steps from `gl` are
/// tagged upper, steps only in `gm` lower.
pub fn find_chordless_cycle_ge4(
    gl: &PartiallyDirectedGraph,
    gm: &PartiallyDirectedGraph,
) -> Result<Option<CycleWitness>, GraphError> {
    if gl.vertices() != gm.vertices() {
        return Err(GraphError::VertexMismatch);
    }
    for g in [gl, gm] {
        if g.edges().any(|e| e.directed) {
            return Err(GraphError::NotUndirected);
        }
        check_cliques(g)?;
    }
    let verts = gl.vertices();
    let idx = |v: usize| verts.binary_search(&v).unwrap();
    let k = verts.len();
    let mut adj = vec![vec![None; k]; k];
    for (g, layer) in [(gm, Layer::Lower), (gl, Layer::Upper)] {
        for e in g.edges() {
            let (a, b) = (idx(e.tail), idx(e.head));
            adj[a][b] = Some(layer);
            adj[b][a] = Some(layer);
        }
    }
    for start in 0..k {
        let mut path = vec![start];
        if let Some(found) = induced_dfs(&adj, &mut path) {
            let edges = (0..found.len())
                .map(|i| {
                    let (a, b) = (found[i], found[(i + 1) % found.len()]);
                    CycleStep {
                        from: verts[a],
                        to: verts[b],
                        layer: adj[a][b].unwrap(),
                        directed: false,
                    }
                })
                .collect();
            return Ok(Some(CycleWitness { edges }));
        }
    }
    Ok(None)
}

fn induced_dfs(adj: &[Vec<Option<Layer>>], path: &mut Vec<usize>) -> Option<Vec<usize>> {
    let start = path[0];
    let last = *path.last().unwrap();
    for w in (start + 1)..adj.len() {
        if adj[last][w].is_none() || path.contains(&w) {
            continue;
        }
        // w may touch only the endpoints of the path
        if path.len() > 2 && path[1..path.len() - 1].iter().any(|&p| adj[p][w].is_some()) {
            continue;
        }
        if path.len() > 1 && adj[start][w].is_some() {
            if path.len() >= 3 {
                let mut c = path.clone();
                c.push(w);
                return Some(c);
            }
            continue;
        }
        path.push(w);
        if let Some(c) = induced_dfs(adj, path) {
            return Some(c);
        }
        path.pop();
    }
    None
}

fn check_cliques(g: &PartiallyDirectedGraph) -> Result<(), GraphError> {
    let verts = g.vertices();
    let mut seen = vec![false; verts.len()];
    let adjacent = |a: usize, b: usize| g.edges().any(|e| (e.tail, e.head) == (a.min(b), a.max(b)));
    for i in 0..verts.len() {
        if seen[i] {
            continue;
        }
        let mut comp = vec![i];
        seen[i] = true;
        let mut head = 0;
        while head < comp.len() {
            let a = comp[head];
            head += 1;
            for b in 0..verts.len() {
                if !seen[b] && adjacent(verts[a], verts[b]) {
                    seen[b] = true;
                    comp.push(b);
                }
            }
        }
        for (x, &a) in comp.iter().enumerate() {
            for &b in &comp[x + 1..] {
                if !adjacent(verts[a], verts[b]) {
                    let mut labels: Vec<usize> = comp.iter().map(|&c| verts[c]).collect();
                    labels.sort_unstable();
                    return Err(GraphError::NotClique(labels));
                }
            }
        }
    }
    Ok(())
}

/// All primitive alternating cycles of an intersection graph `Γ_{σ,τ}`.
///
/// Simple alternating cycles are enumerated from their smallest vertex; a
/// cycle is dropped when its upper tails and heads can be re-matched into
/// two or more alternating cycles on the same vertices. Output is sorted by
/// length, then vertex sequence.
pub fn primitive_alternating_cycles(
    g: &PartiallyDirectedGraph,
) -> Result<Vec<CycleWitness>, GraphError> {
    let mut out = Vec::new();
    walk_alternating(g, &mut |c| {
        out.push(c);
        false
    })?;
    let mut out: Vec<CycleWitness> = out
        .into_iter()
        .map(CycleWitness::canonical)
        .filter(|c| is_primitive(g, c))
        .collect();
    out.sort_by(|a, b| {
        (a.len(), a.vertex_sequence(), &a.edges).cmp(&(b.len(), b.vertex_sequence(), &b.edges))
    });
    out.dedup();
    Ok(out)
}

/// First primitive alternating cycle of length at least four, in search
/// order (smallest start vertex, upper layer first).
pub fn find_long_primitive_cycle(
    g: &PartiallyDirectedGraph,
) -> Result<Option<CycleWitness>, GraphError> {
    let mut found = None;
    walk_alternating(g, &mut |c| {
        if c.len() >= 4 && is_primitive(g, &c) {
            found = Some(c);
            true
        } else {
            false
        }
    })?;
    Ok(found)
}

/// Feeds every simple alternating cycle, started at its smallest vertex, to
/// `visit` until it returns true.
fn walk_alternating(
    g: &PartiallyDirectedGraph,
    visit: &mut dyn FnMut(CycleWitness) -> bool,
) -> Result<(), GraphError> {
    for layer in [Layer::Upper, Layer::Lower] {
        if !g.is_transitively_closed(layer) {
            return Err(GraphError::NotClosed(layer));
        }
    }
    let adj = adjacency(g);
    for &start in g.vertices() {
        for first in [Layer::Upper, Layer::Lower] {
            let mut path = Vec::new();
            let mut used = vec![start];
            if alternating_dfs(&adj, start, start, first, &mut path, &mut used, visit) {
                return Ok(());
            }
        }
    }
    Ok(())
}

fn alternating_dfs(
    adj: &BTreeMap<usize, Vec<CycleStep>>,
    start: usize,
    at: usize,
    first: Layer,
    path: &mut Vec<CycleStep>,
    used: &mut Vec<usize>,
    visit: &mut dyn FnMut(CycleWitness) -> bool,
) -> bool {
    let want = if path.len() % 2 == 0 {
        first
    } else {
        other(first)
    };
    for step in adj[&at].iter().filter(|s| s.layer == want) {
        if step.to == start {
            if path.len() % 2 == 1 {
                let mut edges = path.clone();
                edges.push(*step);
                if visit(CycleWitness { edges }) {
                    return true;
                }
            }
            continue;
        }
        if step.to < start || used.contains(&step.to) {
            continue;
        }
        path.push(*step);
        used.push(step.to);
        if alternating_dfs(adj, start, step.to, first, path, used, visit) {
            return true;
        }
        used.pop();
        path.pop();
    }
    false
}

fn other(layer: Layer) -> Layer {
    match layer {
        Layer::Upper => Layer::Lower,
        _ => Layer::Upper,
    }
}

fn can_step(g: &PartiallyDirectedGraph, from: usize, to: usize, layer: Layer) -> bool {
    g.contains(&Edge::directed(from, to, layer)) || g.contains(&Edge::undirected(from, to, layer))
}

/// A simple alternating cycle is primitive unless some other pairing of its
/// upper tails with upper heads (via upper edges) and of heads back to tails
/// (via lower edges) splits into at least two cycles.
pub(crate) fn is_primitive(g: &PartiallyDirectedGraph, c: &CycleWitness) -> bool {
    let tails: Vec<usize> = c
        .edges
        .iter()
        .filter(|s| s.layer == Layer::Upper)
        .map(|s| s.from)
        .collect();
    let heads: Vec<usize> = c
        .edges
        .iter()
        .filter(|s| s.layer == Layer::Upper)
        .map(|s| s.to)
        .collect();
    let k = tails.len();
    if k <= 1 {
        return true;
    }
    // upper[i][j]: tails[i] -> heads[j]; lower[j][i]: heads[j] -> tails[i]
    let upper: Vec<Vec<bool>> = tails
        .iter()
        .map(|&t| {
            heads
                .iter()
                .map(|&h| can_step(g, t, h, Layer::Upper))
                .collect()
        })
        .collect();
    let lower: Vec<Vec<bool>> = heads
        .iter()
        .map(|&h| {
            tails
                .iter()
                .map(|&t| can_step(g, h, t, Layer::Lower))
                .collect()
        })
        .collect();
    let ups = matchings(&upper);
    let lows = matchings(&lower);
    for mu in &ups {
        for ml in &lows {
            // permutation of tails: i -> ml[mu[i]]
            if cycle_count(|i| ml[mu[i]], k) >= 2 {
                return false;
            }
        }
    }
    true
}

/// All perfect matchings of a square bipartite relation, as row -> column maps.
fn matchings(rel: &[Vec<bool>]) -> Vec<Vec<usize>> {
    fn go(
        rel: &[Vec<bool>],
        row: usize,
        taken: &mut Vec<bool>,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if row == rel.len() {
            out.push(cur.clone());
            return;
        }
        for col in 0..rel.len() {
            if rel[row][col] && !taken[col] {
                taken[col] = true;
                cur.push(col);
                go(rel, row + 1, taken, cur, out);
                cur.pop();
                taken[col] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(
        rel,
        0,
        &mut vec![false; rel.len()],
        &mut Vec::new(),
        &mut out,
    );
    out
}

fn cycle_count(perm: impl Fn(usize) -> usize, k: usize) -> usize {
    let mut seen = vec![false; k];
    let mut count = 0;
    for i in 0..k {
        if !seen[i] {
            count += 1;
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                j = perm(j);
            }
        }
    }
    count
}

/// `x_C`: the sum of `e_i - e_j` over the upper steps `i -> j`, checked
/// against minus the same sum over the lower steps. Coordinates are indexed
/// by label `1..=n`.
pub fn cycle_point(c: &CycleWitness, n: usize) -> Result<Vec<i64>, GraphError> {
    let mut up = vec![0i64; n];
    let mut low = vec![0i64; n];
    for s in &c.edges {
        if s.from == 0 || s.to == 0 || s.from > n || s.to > n {
            return Err(GraphError::BadRoot(s.from, s.to));
        }
        let acc = match s.layer {
            Layer::Upper => &mut up,
            _ => &mut low,
        };
        acc[s.from - 1] += 1;
        acc[s.to - 1] -= 1;
    }
    if !c.is_empty() && !c.closes() {
        return Err(GraphError::InconsistentCycle);
    }
    if up.iter().zip(&low).any(|(u, l)| *u != -*l) {
        return Err(GraphError::InconsistentCycle);
    }
    Ok(up)
}
