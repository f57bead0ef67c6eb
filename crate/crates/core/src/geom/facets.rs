use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use super::dd::{extreme_rays, to_i128};
use super::linalg::{canonical_sign, dot, inverse, primitive, q, q_int, Rref, Q};
use super::{fmt_q, GeomError, RationalPoint, VPolytope};

/// Which side of the hyperplane `normal · x = offset` the polytope is on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sense {
    AtLeast,
    AtMost,
}

/// A facet of a point set, relative to its affine span.
///
/// `normal` lies in the direction space of the span, is primitive integral
/// and has its first nonzero entry positive. The two facets of a segment
/// share a normal and differ in `sense`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FacetWitness {
    pub normal: Vec<BigInt>,
    pub sense: Sense,
    pub offset: Q,
    /// Whether the normal is the projection of some root `e_i - e_j` onto
    /// the direction space of the span.
    pub is_root: bool,
    /// Indices of the input points lying on the facet.
    pub incident_points: Vec<usize>,
}

impl FacetWitness {
    /// Normal pointing into the polytope.
    pub fn inner_normal(&self) -> Vec<BigInt> {
        match self.sense {
            Sense::AtLeast => self.normal.clone(),
            Sense::AtMost => self.normal.iter().map(|x| -x).collect(),
        }
    }

    pub fn normal_i64(&self) -> Option<Vec<i64>> {
        super::linalg::to_i64(&self.normal)
    }

    /// Re-checks the facet against a point set: every point on the right
    /// side, exactly the listed points on the hyperplane.
    pub fn verify(&self, p: &VPolytope) -> bool {
        let nq: Vec<Q> = self.normal.iter().map(q_int).collect();
        let mut tight = Vec::new();
        for (i, x) in p.points().iter().enumerate() {
            let v = dot(&nq, x.coords());
            let ok = match self.sense {
                Sense::AtLeast => v >= self.offset,
                Sense::AtMost => v <= self.offset,
            };
            if !ok {
                return false;
            }
            if v == self.offset {
                tight.push(i);
            }
        }
        tight == self.incident_points
    }
}

impl Serialize for FacetWitness {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("FacetWitness", 5)?;
        // plain integers whenever they fit, decimal strings otherwise
        match self.normal_i64() {
            Some(v) => st.serialize_field("normal", &v)?,
            None => {
                let v: Vec<String> = self.normal.iter().map(BigInt::to_string).collect();
                st.serialize_field("normal", &v)?
            }
        }
        st.serialize_field("sense", &self.sense)?;
        st.serialize_field("offset", &fmt_q(&self.offset))?;
        st.serialize_field("is_root", &self.is_root)?;
        st.serialize_field("incident_points", &self.incident_points)?;
        st.end()
    }
}

/// Affine frame of a point set: origin, echelon basis of the direction
/// space, and integer coordinates of every distinct point.
struct Frame {
    distinct: Vec<RationalPoint>,
    span: Rref,
    /// Scaled coordinates of `distinct[k] - distinct[0]` in the echelon basis.
    coords: Vec<Vec<i128>>,
    /// Common denominator of the input points, and the points scaled by it.
    scale: BigInt,
    scaled_points: Vec<Vec<i128>>,
    /// Echelon basis rows scaled to primitive integers.
    int_basis: Vec<Vec<i128>>,
    /// Values of every root `e_i - e_j` on `int_basis` that are not all zero.
    root_values: Vec<Vec<i128>>,
}

fn parallel_i128(a: &[i128], b: &[i128]) -> bool {
    let Some(i) = a.iter().position(|&x| x != 0) else {
        return false;
    };
    if b[i] == 0 {
        return false;
    }
    a.iter()
        .zip(b)
        .all(|(&x, &y)| x.checked_mul(b[i]) == y.checked_mul(a[i]))
}

impl Frame {
    fn new(p: &VPolytope) -> Result<Self, GeomError> {
        let distinct = p.normalized().points().to_vec();
        let origin = distinct[0].clone();
        let diffs: Vec<Vec<Q>> = distinct[1..]
            .iter()
            .map(|x| x.sub(&origin).coords().to_vec())
            .collect();
        let span = Rref::new(&diffs, p.n());
        let rational: Vec<Vec<Q>> = distinct
            .iter()
            .map(|x| span.coords(x.sub(&origin).coords()))
            .collect();
        let coords = scale_to_ints(&rational)?.1;
        let all: Vec<Vec<Q>> = p.points().iter().map(|x| x.coords().to_vec()).collect();
        let (scale, scaled_points) = scale_to_ints(&all)?;
        let int_basis = span
            .rows()
            .iter()
            .map(|r| to_i128(&primitive(r)))
            .collect::<Result<Vec<_>, _>>()?;
        let root_values = (0..p.n())
            .tuple_combinations()
            .map(|(i, j)| int_basis.iter().map(|r| r[i] - r[j]).collect::<Vec<i128>>())
            .filter(|f| f.iter().any(|&x| x != 0))
            .collect();
        Ok(Self {
            distinct,
            span,
            coords,
            scale,
            scaled_points,
            int_basis,
            root_values,
        })
    }

    fn dim(&self) -> usize {
        self.span.rank()
    }

    /// Turns a functional `a` on frame coordinates into a facet record.
    fn facet(
        &self,
        a: &[Q],
        gram_inv: &[Vec<Q>],
        input: &VPolytope,
    ) -> Result<FacetWitness, GeomError> {
        let z: Vec<Q> = gram_inv.iter().map(|row| dot(row, a)).collect();
        let n = input.n();
        let mut u = vec![Q::zero(); n];
        for (zk, row) in z.iter().zip(self.span.rows()) {
            for (ui, ri) in u.iter_mut().zip(row) {
                *ui += zk * ri;
            }
        }
        let mut normal = primitive(&u);
        let flipped = canonical_sign(&mut normal);
        let un = to_i128(&normal)?;
        let dot128 = |x: &[i128]| -> Result<i128, GeomError> {
            un.iter().zip(x).try_fold(0i128, |acc, (a, b)| {
                a.checked_mul(*b)
                    .and_then(|p| acc.checked_add(p))
                    .ok_or(GeomError::Overflow)
            })
        };
        let values = self
            .scaled_points
            .iter()
            .map(|x| dot128(x))
            .collect::<Result<Vec<_>, _>>()?;
        let (sense, extreme) = if flipped {
            (Sense::AtMost, *values.iter().max().unwrap())
        } else {
            (Sense::AtLeast, *values.iter().min().unwrap())
        };
        let incident_points = (0..values.len())
            .filter(|&i| values[i] == extreme)
            .collect();
        let offset = Q::new(BigInt::from(extreme), self.scale.clone());
        let on_basis = self
            .int_basis
            .iter()
            .map(|r| dot128(r))
            .collect::<Result<Vec<_>, _>>()?;
        let is_root = self.root_values.iter().any(|f| parallel_i128(&on_basis, f));
        Ok(FacetWitness {
            normal,
            sense,
            offset,
            is_root,
            incident_points,
        })
    }

    fn gram_inverse(&self) -> Vec<Vec<Q>> {
        let rows = self.span.rows();
        let g: Vec<Vec<Q>> = rows
            .iter()
            .map(|a| rows.iter().map(|b| dot(a, b)).collect())
            .collect();
        inverse(&g).expect("echelon rows are independent")
    }

    /// Facet functionals from the polar cone, with their tight distinct points.
    fn facet_functionals(&self) -> Result<Vec<(Vec<Q>, FixedBitSet)>, GeomError> {
        let rows: Vec<Vec<i128>> = self
            .coords
            .iter()
            .map(|y| std::iter::once(1).chain(y.iter().copied()).collect())
            .collect();
        Ok(extreme_rays(&rows)?
            .into_iter()
            .map(|r| {
                (
                    r.v[1..].iter().map(|&x| q_int(&BigInt::from(x))).collect(),
                    r.zeros,
                )
            })
            .collect())
    }
}

/// Scales rational rows by the least common denominator.
fn scale_to_ints(rows: &[Vec<Q>]) -> Result<(BigInt, Vec<Vec<i128>>), GeomError> {
    let mut lcm = BigInt::from(1);
    for x in rows.iter().flatten() {
        lcm = num_integer::Integer::lcm(&lcm, x.denom());
    }
    let ints = rows
        .iter()
        .map(|r| {
            to_i128(
                &r.iter()
                    .map(|x| (x * q_int(&lcm)).to_integer())
                    .collect::<Vec<_>>(),
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((lcm, ints))
}

fn finish(mut out: Vec<FacetWitness>) -> Vec<FacetWitness> {
    out.sort();
    out.dedup();
    out
}

/// Facets of the convex hull of `p` within its affine span.
pub fn facets(p: &VPolytope) -> Result<Vec<FacetWitness>, GeomError> {
    let frame = Frame::new(p)?;
    if frame.dim() == 0 {
        return Ok(Vec::new());
    }
    let ginv = frame.gram_inverse();
    let out = frame
        .facet_functionals()?
        .iter()
        .map(|(a, _)| frame.facet(a, &ginv, p))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(finish(out))
}

/// Reference enumeration: tries every hyperplane through `d` affinely
/// independent points of the span. Exponential; for cross-checks only.
pub fn facets_brute_force(p: &VPolytope) -> Result<Vec<FacetWitness>, GeomError> {
    let frame = Frame::new(p)?;
    let d = frame.dim();
    if d == 0 {
        return Ok(Vec::new());
    }
    let ginv = frame.gram_inverse();
    let lifted: Vec<Vec<Q>> = frame
        .coords
        .iter()
        .map(|y| {
            std::iter::once(q(1))
                .chain(y.iter().map(|&v| q_int(&BigInt::from(v))))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for subset in (0..lifted.len()).combinations(d) {
        let rows: Vec<Vec<Q>> = subset.iter().map(|&k| lifted[k].clone()).collect();
        let r = Rref::new(&rows, d + 1);
        if r.rank() != d {
            continue;
        }
        let h = r.nullspace().remove(0);
        let vals: Vec<Q> = lifted.iter().map(|y| dot(&h, y)).collect();
        let sign = if vals.iter().all(|v| !v.is_negative()) {
            1
        } else if vals.iter().all(|v| !v.is_positive()) {
            -1
        } else {
            continue;
        };
        let a: Vec<Q> = h[1..].iter().map(|x| x * q(sign)).collect();
        out.push(frame.facet(&a, &ginv, p)?);
    }
    Ok(finish(out))
}

/// The vertices of `conv(p)`, sorted.
pub fn vertices(p: &VPolytope) -> Result<VPolytope, GeomError> {
    let frame = Frame::new(p)?;
    let d = frame.dim();
    if d == 0 {
        return VPolytope::new(p.n(), frame.distinct);
    }
    let fs = frame.facet_functionals()?;
    let mut keep = Vec::new();
    for (k, x) in frame.distinct.iter().enumerate() {
        let normals: Vec<Vec<Q>> = fs
            .iter()
            .filter(|(_, z)| z.contains(k))
            .map(|(a, _)| a.clone())
            .collect();
        if Rref::new(&normals, d).rank() == d {
            keep.push(x.clone());
        }
    }
    VPolytope::new(p.n(), keep)
}

/// Whether the span of `vs` is spanned by the roots `e_i - e_j` it contains.
pub fn is_root_subspace(vs: &[Vec<i64>], n: usize) -> bool {
    let span = Rref::from_ints(vs, n);
    let roots: Vec<Vec<Q>> = (0..n)
        .tuple_combinations()
        .map(|(i, j)| {
            let mut r = vec![Q::zero(); n];
            r[i] = q(1);
            r[j] = q(-1);
            r
        })
        .filter(|r| span.contains(r))
        .collect();
    Rref::new(&roots, n).rank() == span.rank()
}

/// Alcoved H-description `x_i - x_j <= a_{i,j}`. Missing pairs are unbounded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlcovedHRep {
    pub n: usize,
    pub bounds: BTreeMap<(usize, usize), Q>,
}

impl AlcovedHRep {
    /// The tight bounds `a_{i,j} = max (x_i - x_j)` over the points; pairs
    /// are 1-based.
    pub fn from_points(p: &VPolytope) -> Self {
        let n = p.n();
        let mut bounds = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let m = p
                        .points()
                        .iter()
                        .map(|x| &x.coords()[i] - &x.coords()[j])
                        .max()
                        .unwrap();
                    bounds.insert((i + 1, j + 1), m);
                }
            }
        }
        Self { n, bounds }
    }

    /// Bounds of a Minkowski sum. The support function is additive, so the
    /// tight bounds of `P + Q` are the sums of the tight bounds.
    pub fn minkowski_sum(parts: &[AlcovedHRep]) -> Option<Self> {
        let first = parts.first()?;
        let mut out = first.clone();
        for p in &parts[1..] {
            if p.n != out.n {
                return None;
            }
            for (k, a) in out.bounds.iter_mut() {
                *a += &p.bounds[k];
            }
        }
        Some(out)
    }

    pub fn bound(&self, i: usize, j: usize) -> Option<&Q> {
        self.bounds.get(&(i, j))
    }

    pub fn contains(&self, x: &RationalPoint) -> bool {
        self.bounds
            .iter()
            .all(|(&(i, j), a)| &x.coords()[i - 1] - &x.coords()[j - 1] <= *a)
    }

    /// `a_{i,j} + a_{j,k} >= a_{i,k}` wherever all three are finite.
    pub fn satisfies_triangle_inequalities(&self) -> bool {
        self.bounds.iter().all(|(&(i, j), a)| {
            (1..=self.n).all(|k| match (self.bound(j, k), self.bound(i, k)) {
                (Some(b), Some(c)) if k != i && k != j => a + b >= *c,
                _ => true,
            })
        })
    }
}

impl Serialize for AlcovedHRep {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_map(
            self.bounds
                .iter()
                .map(|((i, j), a)| (format!("{i},{j}"), fmt_q(a))),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlcovedVerdict {
    pub alcoved: bool,
    /// A facet whose normal is not a root. When the orthogonal complement
    /// of the span fails to be a root subspace, this records an implicit
    /// equation of the polytope instead, with `is_root = false` and every
    /// point incident.
    pub witness: Option<FacetWitness>,
    pub hrep: Option<AlcovedHRep>,
}

/// Decides whether `conv(p) ⊂ H_n` is alcoved: the orthogonal complement of
/// its span must be a root subspace and every facet normal within the span
/// must be the projection of a root.
pub fn is_alcoved(p: &VPolytope) -> Result<AlcovedVerdict, GeomError> {
    if !p.in_hn() {
        return Err(GeomError::NotInHn);
    }
    let n = p.n();
    let frame = Frame::new(p)?;
    let mut rows = frame.span.rows().to_vec();
    rows.push(vec![q(1); n]);
    let complement: Vec<Vec<BigInt>> = Rref::new(&rows, n)
        .nullspace()
        .iter()
        .map(|v| primitive(v))
        .collect();
    let small: Option<Vec<Vec<i64>>> = complement
        .iter()
        .map(|v| super::linalg::to_i64(v))
        .collect();
    let small = small.ok_or(GeomError::Overflow)?;
    if !is_root_subspace(&small, n) {
        let mut normal = complement[0].clone();
        let flipped = canonical_sign(&mut normal);
        let nq: Vec<Q> = normal.iter().map(q_int).collect();
        let offset = dot(&nq, p.points()[0].coords());
        let witness = FacetWitness {
            normal,
            sense: if flipped {
                Sense::AtMost
            } else {
                Sense::AtLeast
            },
            offset,
            is_root: false,
            incident_points: (0..p.len()).collect(),
        };
        return Ok(AlcovedVerdict {
            alcoved: false,
            witness: Some(witness),
            hrep: None,
        });
    }
    let fs = facets(p)?;
    if let Some(bad) = fs.into_iter().find(|f| !f.is_root) {
        return Ok(AlcovedVerdict {
            alcoved: false,
            witness: Some(bad),
            hrep: None,
        });
    }
    Ok(AlcovedVerdict {
        alcoved: true,
        witness: None,
        hrep: Some(AlcovedHRep::from_points(p)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{minkowski_sum, simplex_vertices};
    use crate::osp::OrderedSetPartition;

    fn osp(s: &str) -> OrderedSetPartition {
        OrderedSetPartition::parse(s).unwrap()
    }

    fn normals(fs: &[FacetWitness]) -> Vec<(Vec<i64>, Sense)> {
        fs.iter()
            .map(|f| (f.normal_i64().unwrap(), f.sense))
            .collect()
    }

    #[test]
    fn triangle_facets() {
        let p = simplex_vertices(&osp("1|2|3"));
        let fs = facets(&p).unwrap();
        assert_eq!(fs.len(), 3);
        assert!(fs.iter().all(|f| f.is_root && f.verify(&p)));
        let got = normals(&fs);
        for (v, s) in [
            (vec![1, -1, 0], Sense::AtLeast),
            (vec![0, 1, -1], Sense::AtLeast),
            (vec![1, 0, -1], Sense::AtMost),
        ] {
            assert!(got.contains(&(v.clone(), s)), "{v:?} {got:?}");
        }
        assert_eq!(fs, facets_brute_force(&p).unwrap());
    }

    #[test]
    fn segment_facets() {
        let p = VPolytope::from_ints(2, &[vec![0, 0], vec![1, -1]]).unwrap();
        let fs = facets(&p).unwrap();
        assert_eq!(
            normals(&fs),
            vec![(vec![1, -1], Sense::AtLeast), (vec![1, -1], Sense::AtMost)]
        );
        assert_eq!(fs[0].incident_points, vec![0]);
        assert_eq!(fs[1].incident_points, vec![1]);
    }

    #[test]
    fn point_has_no_facets() {
        let p = VPolytope::from_ints(3, &[vec![0, 0, 0], vec![0, 0, 0]]).unwrap();
        assert!(facets(&p).unwrap().is_empty());
        assert_eq!(vertices(&p).unwrap().len(), 1);
    }

    #[test]
    fn interlaced_sum_is_not_alcoved() {
        let p = minkowski_sum(&[
            simplex_vertices(&osp("1|2|3|4")),
            simplex_vertices(&osp("3|2|1|4")),
        ])
        .unwrap();
        let fs = facets(&p).unwrap();
        assert_eq!(fs, facets_brute_force(&p).unwrap());
        let bad: Vec<_> = fs.iter().filter(|f| !f.is_root).collect();
        assert_eq!(bad.len(), 2);
        assert!(bad
            .iter()
            .all(|f| f.normal_i64().unwrap() == vec![1, -1, 1, -1]));
        let v = is_alcoved(&p).unwrap();
        assert!(!v.alcoved);
        assert_eq!(v.witness.unwrap().normal_i64().unwrap(), vec![1, -1, 1, -1]);
    }

    #[test]
    fn simplices_are_alcoved() {
        for p in crate::osp::all_normalized(4) {
            let v = simplex_vertices(&p);
            let verdict = is_alcoved(&v).unwrap();
            assert!(verdict.alcoved, "{p}");
            let h = verdict.hrep.unwrap();
            assert!(v.points().iter().all(|x| h.contains(x)));
            assert!(h.satisfies_triangle_inequalities());
        }
    }

    #[test]
    fn lower_dimensional_projection() {
        // a segment along e_1 + e_2 - 2 e_3: its complement in H_3 is spanned
        // by e_1 - e_2, a root, and its two facet normals project roots
        let p = VPolytope::from_ints(3, &[vec![0, 0, 0], vec![1, 1, -2]]).unwrap();
        assert!(is_alcoved(&p).unwrap().alcoved);
        // along e_1 - 2 e_2 + e_3 the complement is spanned by e_1 - e_3
        let p = VPolytope::from_ints(3, &[vec![0, 0, 0], vec![1, -2, 1]]).unwrap();
        assert!(is_alcoved(&p).unwrap().alcoved);
        // along e_1 + e_3 - e_2 - e_4 the complement is spanned by e_1 - e_3, e_2 - e_4
        let p = VPolytope::from_ints(4, &[vec![0, 0, 0, 0], vec![1, -1, 1, -1]]).unwrap();
        assert!(is_alcoved(&p).unwrap().alcoved);
        // the complement of 2 e_1 - e_2 - e_3 in H_4 contains only the root e_2 - e_3
        let p = VPolytope::from_ints(4, &[vec![0, 0, 0, 0], vec![2, -1, -1, 0]]).unwrap();
        let v = is_alcoved(&p).unwrap();
        assert!(!v.alcoved);
        assert!(v.witness.unwrap().verify(&p));
    }

    #[test]
    fn not_in_hn() {
        let p = VPolytope::from_ints(2, &[vec![1, 0]]).unwrap();
        assert_eq!(is_alcoved(&p), Err(GeomError::NotInHn));
    }

    #[test]
    fn root_subspaces() {
        assert!(!is_root_subspace(&[vec![1, -1, 1, -1]], 4));
        assert!(is_root_subspace(&[vec![1, -1, 0], vec![0, 1, -1]], 3));
        assert!(is_root_subspace(&[vec![0, 0, 0]], 3));
        assert!(is_root_subspace(&[], 3));
    }

    #[test]
    fn vertex_pruning() {
        let p = minkowski_sum(&[
            simplex_vertices(&osp("1|2|3")),
            simplex_vertices(&osp("1|2|3")),
        ])
        .unwrap();
        // 2Δ has 6 distinct sums but only 3 vertices
        assert_eq!(p.len(), 6);
        assert_eq!(vertices(&p).unwrap().len(), 3);
    }
}
