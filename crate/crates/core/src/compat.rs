//! Compatibility checks for alcoved simplices.
//!
//! A pair of ordered set partitions is compatible when the Minkowski sum of
//! their simplices is alcoved. Pairs are decided combinatorially: cyclic
//! orders by interlacing patterns, everything else by checking all
//! restrictions to at most six elements, each with an exhaustive graph
//! search. The geometric oracle in [`crate::geom`] is exposed here as an
//! independent method.

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;
use rayon::prelude::*;
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::geom::{self, FacetWitness, GeomError};
use crate::osp::{
    all_cyclic_orders, find_four_interlacing, find_interlacing, InterlacingWitness,
    OrderedSetPartition, OspError,
};
use crate::pdgraph::{
    find_cone_obstruction, find_violating_cycle_bounded, pair_graph, ConeObstruction, CycleWitness,
    GraphError,
};

/// Largest ground set `check_pair_small` accepts.
pub const SMALL_PAIR_BOUND: usize = 7;
/// Largest restriction that can matter for a pair.
pub const MAX_RESTRICTION: usize = 6;
/// Default upper limit for `count_compatible_with_standard`.
pub const DEFAULT_COUNT_BOUND: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompatError {
    #[error(transparent)]
    Osp(#[from] OspError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("ground sets differ: {0:?} vs {1:?}")]
    GroundMismatch(Vec<usize>, Vec<usize>),
    #[error("ground set of size {0} exceeds the bound {1}")]
    TooLarge(usize, usize),
    #[error("n = {0} is outside the supported range 3..={1}")]
    OutOfRange(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Interlacing,
    Restriction,
    ViolatingCycle,
    MaximalCones,
    Oracle,
}

/// How `check_pair` decides a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Interlacing patterns for two cyclic orders, restrictions otherwise.
    #[default]
    Auto,
    /// Always go through the restrictions.
    Restriction,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Interlacing(InterlacingWitness),
    Cycle(CycleWitness),
    Cones(ConeObstruction),
    Facet(FacetWitness),
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        match self {
            Witness::Interlacing(w) => {
                m.serialize_entry("kind", "interlacing")?;
                m.serialize_entry("elements", &w.elements)?;
                m.serialize_entry("pattern", &w.kind)?;
            }
            Witness::Cycle(c) => {
                m.serialize_entry("kind", "cycle")?;
                m.serialize_entry("edges", &CycleEdges(c))?;
            }
            Witness::Cones(o) => {
                m.serialize_entry("kind", "cones")?;
                m.serialize_entry("upper_omitted", &o.upper_omitted)?;
                m.serialize_entry("lower_omitted", &o.lower_omitted)?;
                m.serialize_entry("edges", &CycleEdges(&o.cycle))?;
            }
            Witness::Facet(f) => {
                m.serialize_entry("kind", "facet")?;
                match f.normal_i64() {
                    Some(v) => m.serialize_entry("normal", &v)?,
                    None => m.serialize_entry(
                        "normal",
                        &f.normal.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    )?,
                }
                m.serialize_entry("sense", &f.sense)?;
                m.serialize_entry("offset", &geom::fmt_q(&f.offset))?;
            }
        }
        m.end()
    }
}

struct CycleEdges<'a>(&'a CycleWitness);

impl Serialize for CycleEdges<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for e in &self.0.edges {
            seq.serialize_element(&(e.from.to_string(), e.to.to_string(), e.layer.to_string()))?;
        }
        seq.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub compatible: bool,
    pub method: Method,
    pub witness: Option<Witness>,
    /// Ground set of the restriction a cycle witness lives in.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restriction: Option<Vec<usize>>,
    /// Offending pair (1-based positions in the input list) for collection
    /// checks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair: Option<(usize, usize)>,
}

impl Verdict {
    pub fn compatible(method: Method) -> Self {
        Self {
            compatible: true,
            method,
            witness: None,
            restriction: None,
            pair: None,
        }
    }

    pub fn incompatible(method: Method, witness: Witness) -> Self {
        Self {
            compatible: false,
            method,
            witness: Some(witness),
            restriction: None,
            pair: None,
        }
    }

    /// Independently re-checks the witness of a negative verdict against
    /// the pair it was produced for.
    pub fn recheck(&self, s: &OrderedSetPartition, t: &OrderedSetPartition) -> bool {
        match &self.witness {
            None => self.compatible,
            Some(Witness::Interlacing(w)) => w.verify(s, t),
            Some(Witness::Cycle(c)) => {
                let Some((rs, rt)) = self.restricted(s, t) else {
                    return false;
                };
                pair_graph(&rs, &rt).is_ok_and(|g| c.is_violating() && c.is_cycle_of(&g))
            }
            Some(Witness::Cones(o)) => {
                let Some((rs, rt)) = self.restricted(s, t) else {
                    return false;
                };
                o.verify(&rs, &rt)
            }
            Some(Witness::Facet(f)) => {
                oracle_polytope(s, t).is_ok_and(|p| !f.is_root && f.verify(&p))
            }
        }
    }

    fn restricted(
        &self,
        s: &OrderedSetPartition,
        t: &OrderedSetPartition,
    ) -> Option<(OrderedSetPartition, OrderedSetPartition)> {
        match &self.restriction {
            Some(i) => Some((s.restrict(i).ok()?, t.restrict(i).ok()?)),
            None => Some((s.clone(), t.clone())),
        }
    }
}

fn same_ground(
    s: &OrderedSetPartition,
    t: &OrderedSetPartition,
) -> Result<Vec<usize>, CompatError> {
    let (a, b) = (s.ground_set(), t.ground_set());
    if a != b {
        return Err(CompatError::GroundMismatch(a, b));
    }
    Ok(a)
}

/// Exhaustive search on ground sets of at most seven elements.
///
/// Two cyclic orders are decided by a violating cycle in `G_{S,T}`. As soon
/// as a block has two elements a simple cycle may run through the block's
/// clique although that clique only ever enters a cone as a whole, so such
/// pairs are decided on all pairs of maximal normal cones instead.
pub fn check_pair_small(
    s: &OrderedSetPartition,
    t: &OrderedSetPartition,
) -> Result<Verdict, CompatError> {
    let ground = same_ground(s, t)?;
    if ground.len() > SMALL_PAIR_BOUND {
        return Err(CompatError::TooLarge(ground.len(), SMALL_PAIR_BOUND));
    }
    Ok(match small_obstruction(s, t)? {
        Some(w @ Witness::Cycle(_)) => Verdict::incompatible(Method::ViolatingCycle, w),
        Some(w) => Verdict::incompatible(Method::MaximalCones, w),
        None if s.is_nondegenerate() && t.is_nondegenerate() => {
            Verdict::compatible(Method::ViolatingCycle)
        }
        None => Verdict::compatible(Method::MaximalCones),
    })
}

fn small_obstruction(
    s: &OrderedSetPartition,
    t: &OrderedSetPartition,
) -> Result<Option<Witness>, CompatError> {
    if s.is_nondegenerate() && t.is_nondegenerate() {
        let g = pair_graph(s, t)?;
        Ok(find_violating_cycle_bounded(&g, SMALL_PAIR_BOUND)?.map(Witness::Cycle))
    } else {
        Ok(find_cone_obstruction(s, t)?.map(Witness::Cones))
    }
}

impl Witness {
    fn map_labels(&self, f: impl Fn(usize) -> usize) -> Self {
        match self {
            Witness::Interlacing(w) => Witness::Interlacing(InterlacingWitness {
                kind: w.kind,
                elements: w.elements.iter().map(|&x| f(x)).collect(),
            }),
            Witness::Cycle(c) => Witness::Cycle(c.map_labels(f)),
            Witness::Cones(o) => Witness::Cones(o.map_labels(f)),
            Witness::Facet(_) => self.clone(),
        }
    }
}

pub fn check_pair(
    s: &OrderedSetPartition,
    t: &OrderedSetPartition,
) -> Result<Verdict, CompatError> {
    check_pair_with(s, t, Strategy::Auto)
}

type MemoKey = (OrderedSetPartition, OrderedSetPartition);

thread_local! {
    // Verdicts of restricted pairs on [k], keyed by their normalized form.
    static MEMO: RefCell<HashMap<MemoKey, Option<Witness>>> = RefCell::new(HashMap::new());
}

/// Small check of a restricted pair through the memo. Witnesses are stored
/// on `[k]` and lifted back to the restriction's labels.
fn memo_obstruction(
    rs: &OrderedSetPartition,
    rt: &OrderedSetPartition,
) -> Result<Option<Witness>, CompatError> {
    let (cs, labels) = rs.compress();
    let (ct, _) = rt.compress();
    let key = (cs.normalize_cyclic(), ct.normalize_cyclic());
    let lift = |w: &Witness| w.map_labels(|x| labels[x - 1]);
    if let Some(hit) = MEMO.with(|m| m.borrow().get(&key).cloned()) {
        return Ok(hit.as_ref().map(lift));
    }
    let found = small_obstruction(&key.0, &key.1)?;
    let lifted = found.as_ref().map(lift);
    MEMO.with(|m| m.borrow_mut().insert(key, found));
    Ok(lifted)
}

/// Decides a pair on any common ground set.
pub fn check_pair_with(
    s: &OrderedSetPartition,
    t: &OrderedSetPartition,
    strategy: Strategy,
) -> Result<Verdict, CompatError> {
    let ground = same_ground(s, t)?;
    if strategy == Strategy::Auto && s.is_nondegenerate() && t.is_nondegenerate() {
        return Ok(match find_interlacing(s, t)? {
            Some(w) => Verdict::incompatible(Method::Interlacing, Witness::Interlacing(w)),
            None => Verdict::compatible(Method::Interlacing),
        });
    }
    for size in 4..=ground.len().min(MAX_RESTRICTION) {
        for subset in ground.iter().copied().combinations(size) {
            let keep: BTreeSet<usize> = subset.iter().copied().collect();
            let rs = s.restrict_unchecked(&keep);
            let rt = t.restrict_unchecked(&keep);
            if let Some(w) = memo_obstruction(&rs, &rt)? {
                let mut v = Verdict::incompatible(Method::Restriction, w);
                v.restriction = Some(subset);
                return Ok(v);
            }
        }
    }
    Ok(Verdict::compatible(Method::Restriction))
}

fn common_ground(ps: &[OrderedSetPartition]) -> Result<(), CompatError> {
    if let Some(first) = ps.first() {
        for p in &ps[1..] {
            same_ground(first, p)?;
        }
    }
    Ok(())
}

/// Checks every unordered pair; a collection is compatible iff all pairs
/// are. On failure the first offending pair in lexicographic order is
/// reported.
pub fn check_collection(ps: &[OrderedSetPartition]) -> Result<Verdict, CompatError> {
    common_ground(ps)?;
    let pairs: Vec<(usize, usize)> = (0..ps.len()).tuple_combinations().collect();
    let first_bad = pairs
        .par_iter()
        .map(|&(i, j)| check_pair(&ps[i], &ps[j]).map(|v| (i, j, v)))
        .find_map_first(|r| match r {
            Ok((_, _, ref v)) if v.compatible => None,
            other => Some(other),
        });
    match first_bad {
        None => {
            let method = if ps.iter().all(OrderedSetPartition::is_nondegenerate) {
                Method::Interlacing
            } else {
                Method::Restriction
            };
            Ok(Verdict::compatible(method))
        }
        Some(r) => {
            let (i, j, mut v) = r?;
            v.pair = Some((i + 1, j + 1));
            Ok(v)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountMode {
    /// Only 4-interlacings count as obstructions.
    FourOnly,
    /// Full compatibility.
    Full,
}

/// Cyclic orders on `[n]` (with `n` last) compatible with `(1, ..., n)`.
pub fn orders_compatible_with_standard(
    n: usize,
    mode: CountMode,
    bound: usize,
) -> Result<Vec<OrderedSetPartition>, CompatError> {
    if n < 3 || n > bound {
        return Err(CompatError::OutOfRange(n, bound));
    }
    let standard = OrderedSetPartition::standard(n);
    let orders = all_cyclic_orders(n);
    let keep = orders
        .par_iter()
        .map(|o| match mode {
            CountMode::FourOnly => find_four_interlacing(&standard, o).map(|w| w.is_none()),
            CountMode::Full => find_interlacing(&standard, o).map(|w| w.is_none()),
        })
        .collect::<Result<Vec<bool>, _>>()?;
    Ok(orders
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(o, _)| o)
        .collect())
}

pub fn count_compatible_with_standard(n: usize, mode: CountMode) -> Result<usize, CompatError> {
    Ok(orders_compatible_with_standard(n, mode, DEFAULT_COUNT_BOUND)?.len())
}

/// `Δ_S + Δ_T` as a point set.
pub fn oracle_polytope(
    s: &OrderedSetPartition,
    t: &OrderedSetPartition,
) -> Result<geom::VPolytope, CompatError> {
    same_ground(s, t)?;
    Ok(geom::minkowski_sum(&[
        geom::simplex_vertices(s),
        geom::simplex_vertices(t),
    ])?)
}

/// Decides a pair geometrically: is the Minkowski sum of the simplices alcoved?
pub fn oracle_pair(
    s: &OrderedSetPartition,
    t: &OrderedSetPartition,
) -> Result<Verdict, CompatError> {
    verdict_from_geometry(&oracle_polytope(s, t)?)
}

/// Decides a whole collection geometrically from the vertices of the full sum.
pub fn oracle_collection(ps: &[OrderedSetPartition]) -> Result<Verdict, CompatError> {
    common_ground(ps)?;
    if ps.is_empty() {
        return Ok(Verdict::compatible(Method::Oracle));
    }
    let simplices: Vec<_> = ps.iter().map(geom::simplex_vertices).collect();
    verdict_from_geometry(&geom::minkowski_sum_vertices(&simplices)?)
}

fn verdict_from_geometry(p: &geom::VPolytope) -> Result<Verdict, CompatError> {
    let a = geom::is_alcoved(p)?;
    Ok(match a.witness {
        Some(f) if !a.alcoved => Verdict::incompatible(Method::Oracle, Witness::Facet(f)),
        _ => Verdict::compatible(Method::Oracle),
    })
}
