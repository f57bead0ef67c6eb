//! Exact-rational polytope oracle.
//!
//! Polytopes are given by finite point sets. Facets come from a double
//! description run on the polar cone inside the affine span; every number is
//! an exact rational or a checked integer, so verdicts never depend on a
//! tolerance.

mod cones;
pub mod dd;
mod facets;
pub mod linalg;

use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::osp::OrderedSetPartition;
use linalg::{q, Q};

pub use cones::root_cone_intersection_is_root_cone;
pub use facets::{
    facets, facets_brute_force, is_alcoved, is_root_subspace, vertices, AlcovedHRep,
    AlcovedVerdict, FacetWitness, Sense,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeomError {
    #[error("empty point set")]
    Empty,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("point is not in the hyperplane of coordinate sum zero")]
    NotInHn,
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("cone is not pointed")]
    NotPointed,
    #[error("empty index set")]
    EmptyIndexSet,
    #[error("index {0} out of range 1..={1}")]
    BadIndex(usize, usize),
    #[error("malformed polytope dump: {0}")]
    Parse(String),
}

/// A point with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalPoint {
    coords: Vec<Q>,
}

impl RationalPoint {
    pub fn new(coords: Vec<Q>) -> Self {
        Self { coords }
    }

    pub fn zero(n: usize) -> Self {
        Self {
            coords: vec![Q::zero(); n],
        }
    }

    pub fn from_ints(v: &[i64]) -> Self {
        Self::new(v.iter().map(|&x| q(x)).collect())
    }

    pub fn coords(&self) -> &[Q] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn in_hn(&self) -> bool {
        self.coords
            .iter()
            .fold(Q::zero(), |acc, x| acc + x)
            .is_zero()
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl Add for &RationalPoint {
    type Output = RationalPoint;

    fn add(self, other: &RationalPoint) -> RationalPoint {
        RationalPoint::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(fmt_q).collect();
        f.write_str(&parts.join(" "))
    }
}

impl Serialize for RationalPoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.coords.iter().map(fmt_q))
    }
}

/// `p/q`, or just `p` for integers.
pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn parse_q(tok: &str) -> Result<Q, GeomError> {
    let bad = || GeomError::Parse(format!("bad rational {tok:?}"));
    let (n, d) = match tok.split_once('/') {
        Some((n, d)) => (n, d),
        None => (tok, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Q::new(n, d))
}

/// A polytope given as the convex hull of finitely many points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VPolytope {
    n: usize,
    points: Vec<RationalPoint>,
}

impl VPolytope {
    pub fn new(n: usize, points: Vec<RationalPoint>) -> Result<Self, GeomError> {
        if points.is_empty() {
            return Err(GeomError::Empty);
        }
        if let Some(p) = points.iter().find(|p| p.dim() != n) {
            return Err(GeomError::DimensionMismatch(n, p.dim()));
        }
        Ok(Self { n, points })
    }

    pub fn from_ints(n: usize, points: &[Vec<i64>]) -> Result<Self, GeomError> {
        Self::new(
            n,
            points.iter().map(|p| RationalPoint::from_ints(p)).collect(),
        )
    }

    /// Ambient dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> &[RationalPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Sorted, without duplicates.
    pub fn normalized(&self) -> Self {
        let mut points = self.points.clone();
        points.sort();
        points.dedup();
        Self { n: self.n, points }
    }

    pub fn in_hn(&self) -> bool {
        self.points.iter().all(RationalPoint::in_hn)
    }

    pub fn translate(&self, by: &RationalPoint) -> Self {
        Self {
            n: self.n,
            points: self.points.iter().map(|p| p + by).collect(),
        }
    }

    /// Text dump: a header `n=<ambient>` and one point per line.
    pub fn dump(&self) -> String {
        let mut out = format!("n={}\n", self.n);
        for p in &self.points {
            out.push_str(&p.to_string());
            out.push('\n');
        }
        out
    }

    pub fn parse_dump(text: &str) -> Result<Self, GeomError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or(GeomError::Empty)?;
        let n: usize = header
            .strip_prefix("n=")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| GeomError::Parse(format!("bad header {header:?}")))?;
        let points = lines
            .map(|l| {
                l.split_whitespace()
                    .map(parse_q)
                    .collect::<Result<Vec<_>, _>>()
                    .map(RationalPoint::new)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(n, points)
    }
}

impl Serialize for VPolytope {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("VPolytope", 2)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("points", &self.points)?;
        st.end()
    }
}

/// Checks the defining system of `Δ_S` on a point, with coordinates indexed
/// by position in the ground set. Returns the number of tight inequality
/// classes among the `l` cyclic ones, or `None` if the point violates it.
fn simplex_system_tight_classes(blocks: &[Vec<usize>], x: &[Q]) -> Option<usize> {
    if !x.iter().fold(Q::zero(), |acc, v| acc + v).is_zero() {
        return None;
    }
    for b in blocks {
        if b.iter().any(|&i| x[i] != x[b[0]]) {
            return None;
        }
    }
    let l = blocks.len();
    if l == 1 {
        return Some(0);
    }
    let mut tight = 0;
    for k in 0..l {
        let (u, v) = (&x[blocks[k][0]], &x[blocks[(k + 1) % l][0]]);
        // x_i >= x_j between consecutive blocks, x_i >= x_j - 1 across the wrap
        let slack = if k + 1 < l { u - v } else { u - v + Q::one() };
        if slack < Q::zero() {
            return None;
        }
        if slack.is_zero() {
            tight += 1;
        }
    }
    Some(tight)
}

/// Vertices of the alcoved simplex `Δ_S` in `H_n`:
/// `v_0 = 0` and `v_k = 1_{B_1 ∪ … ∪ B_k} - (|B_1 ∪ … ∪ B_k| / n) 1`.
///
/// Coordinates are indexed by position in the ground set, so a partition
/// of `{2, 5, 7}` lives in `H_3`. Every vertex is checked against the
/// inequality description of the simplex.
pub fn simplex_vertices(p: &OrderedSetPartition) -> VPolytope {
    let (c, _) = p.compress();
    let n = c.len();
    let blocks: Vec<Vec<usize>> = c
        .blocks()
        .iter()
        .map(|b| b.iter().map(|x| x - 1).collect())
        .collect();
    let l = blocks.len();
    let mut points = Vec::with_capacity(l);
    let mut prefix = vec![false; n];
    let mut size = 0usize;
    for k in 0..l {
        let shift = Q::new(BigInt::from(size), BigInt::from(n));
        let x: Vec<Q> = prefix
            .iter()
            .map(|&inside| {
                if inside {
                    Q::one() - &shift
                } else {
                    -shift.clone()
                }
            })
            .collect();
        let tight = simplex_system_tight_classes(&blocks, &x);
        assert_eq!(
            tight,
            Some(l.saturating_sub(1)),
            "vertex {k} of {p} violates the simplex inequalities"
        );
        points.push(RationalPoint::new(x));
        for &i in &blocks[k] {
            prefix[i] = true;
        }
        size += blocks[k].len();
    }
    VPolytope { n, points }
}

/// The Newton simplex `N_S` in `Z^{n-1}`: vertices `0, e_{B_1}, e_{B_1 B_2}, …`.
/// The partition is normalized first so that `n` sits in the last block.
pub fn newton_simplex(p: &OrderedSetPartition) -> VPolytope {
    let (c, _) = p.compress();
    let c = c.normalize_cyclic();
    let n = c.len();
    let mut prefix = vec![0i64; n - 1];
    let mut points = Vec::with_capacity(c.num_blocks());
    for b in c.blocks() {
        points.push(RationalPoint::from_ints(&prefix));
        for &x in b {
            if x < n {
                prefix[x - 1] = 1;
            }
        }
    }
    VPolytope { n: n - 1, points }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoordinateSimplexImage {
    pub vertices: VPolytope,
    pub osp: OrderedSetPartition,
    pub shift: Vec<i64>,
}

/// Image of the coordinate simplex `conv{e_i : i ∈ I}` under
/// `φ(e_i) = Σ_{j<i} e_j`, which is a shifted Newton simplex.
pub fn coordinate_simplex_image(
    indices: &[usize],
    n: usize,
) -> Result<CoordinateSimplexImage, GeomError> {
    let mut idx = indices.to_vec();
    idx.sort_unstable();
    idx.dedup();
    let (&first, _) = idx.split_first().ok_or(GeomError::EmptyIndexSet)?;
    if let Some(&bad) = idx.iter().find(|&&i| i == 0 || i > n) {
        return Err(GeomError::BadIndex(bad, n));
    }
    let phi = |i: usize| -> Vec<i64> { (1..n).map(|j| i64::from(j < i)).collect() };
    let vertices = VPolytope::from_ints(n - 1, &idx.iter().map(|&i| phi(i)).collect::<Vec<_>>())?;

    let k = idx.len();
    let blocks: Vec<Vec<usize>> = (0..k)
        .map(|m| {
            let (start, end) = (idx[m], if m + 1 < k { idx[m + 1] } else { idx[0] + n });
            (start..end).map(|x| (x - 1) % n + 1).collect()
        })
        .collect();
    let osp = OrderedSetPartition::on_range(blocks).expect("cyclic intervals partition [n]");
    let shift = phi(first);

    let mut expected = newton_simplex(&osp).translate(&RationalPoint::from_ints(&shift));
    expected.points.sort();
    let mut got = vertices.normalized();
    got.points.sort();
    assert_eq!(
        got, expected,
        "image of the coordinate simplex is not the shifted Newton simplex"
    );
    Ok(CoordinateSimplexImage {
        vertices,
        osp,
        shift,
    })
}

fn check_dims(ps: &[VPolytope]) -> Result<usize, GeomError> {
    let n = ps.first().ok_or(GeomError::Empty)?.n;
    if let Some(p) = ps.iter().find(|p| p.n != n) {
        return Err(GeomError::DimensionMismatch(n, p.n));
    }
    Ok(n)
}

/// All sums of one point per polytope, deduplicated. No hull pruning.
pub fn minkowski_sum(ps: &[VPolytope]) -> Result<VPolytope, GeomError> {
    let n = check_dims(ps)?;
    let mut acc = VPolytope::new(n, vec![RationalPoint::zero(n)])?;
    for p in ps {
        acc = sum_two(&acc, p);
    }
    Ok(acc)
}

fn sum_two(a: &VPolytope, b: &VPolytope) -> VPolytope {
    let mut points: Vec<RationalPoint> = a
        .points
        .iter()
        .flat_map(|x| b.points.iter().map(move |y| x + y))
        .collect();
    points.sort();
    points.dedup();
    VPolytope { n: a.n, points }
}

/// Minkowski sum that keeps only vertices after each step; meant for sums
/// with many summands.
pub fn minkowski_sum_vertices(ps: &[VPolytope]) -> Result<VPolytope, GeomError> {
    let n = check_dims(ps)?;
    let mut acc = VPolytope::new(n, vec![RationalPoint::zero(n)])?;
    for p in ps {
        acc = vertices(&sum_two(&acc, &vertices(p)?))?;
    }
    Ok(acc)
}
