//! Double description for polyhedral cones `{x : A x >= 0}` over the integers.
//!
//! Rays are kept as primitive `i128` vectors. Adjacency is decided
//! combinatorially from zero sets, so no rational arithmetic is needed after
//! the initial basis. Any intermediate overflow is reported, never wrapped.

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::linalg::{inverse, primitive, q_int, Rref, Q};
use super::GeomError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ray {
    pub v: Vec<i128>,
    /// Constraint rows the ray is tight on.
    pub zeros: FixedBitSet,
}

fn checked_dot(a: &[i128], b: &[i128]) -> Result<i128, GeomError> {
    a.iter().zip(b).try_fold(0i128, |acc, (x, y)| {
        x.checked_mul(*y)
            .and_then(|p| acc.checked_add(p))
            .ok_or(GeomError::Overflow)
    })
}

fn normalize(v: &mut [i128]) {
    let g = v.iter().fold(0i128, |acc, x| acc.gcd(x));
    if g > 1 {
        for x in v.iter_mut() {
            *x /= g;
        }
    }
}

pub(crate) fn to_i128(v: &[BigInt]) -> Result<Vec<i128>, GeomError> {
    v.iter()
        .map(|x| x.to_i128().ok_or(GeomError::Overflow))
        .collect()
}

fn rational_rows(a: &[Vec<i128>]) -> Vec<Vec<Q>> {
    a.iter()
        .map(|r| r.iter().map(|&x| q_int(&BigInt::from(x))).collect())
        .collect()
}

/// Extreme rays of the pointed cone `{x : A x >= 0}`. `A` must have full
/// column rank.
pub fn extreme_rays(a: &[Vec<i128>]) -> Result<Vec<Ray>, GeomError> {
    let m = a.len();
    let dim = a.first().map_or(0, Vec::len);
    if dim == 0 {
        return Ok(Vec::new());
    }

    // Greedy independent starting rows.
    let mut basis: Vec<usize> = Vec::new();
    let rows = rational_rows(a);
    for i in 0..m {
        let mut trial: Vec<Vec<Q>> = basis.iter().map(|&b| rows[b].clone()).collect();
        trial.push(rows[i].clone());
        if Rref::new(&trial, dim).rank() == trial.len() {
            basis.push(i);
            if basis.len() == dim {
                break;
            }
        }
    }
    if basis.len() < dim {
        return Err(GeomError::NotPointed);
    }
    let sq: Vec<Vec<Q>> = basis.iter().map(|&b| rows[b].clone()).collect();
    let inv = inverse(&sq).expect("independent rows");
    let mut processed = FixedBitSet::with_capacity(m);
    for &b in &basis {
        processed.insert(b);
    }
    let mut rays = Vec::with_capacity(dim);
    for k in 0..dim {
        let col: Vec<Q> = inv.iter().map(|row| row[k].clone()).collect();
        let v = to_i128(&primitive(&col))?;
        let mut zeros = FixedBitSet::with_capacity(m);
        for (j, &b) in basis.iter().enumerate() {
            if j != k {
                zeros.insert(b);
            }
        }
        rays.push(Ray { v, zeros });
    }

    for i in 0..m {
        if processed.contains(i) {
            continue;
        }
        let row = &a[i];
        let vals = rays
            .iter()
            .map(|r| checked_dot(row, &r.v))
            .collect::<Result<Vec<_>, _>>()?;
        if vals.iter().all(|&s| s >= 0) {
            for (r, &s) in rays.iter_mut().zip(&vals) {
                if s == 0 {
                    r.zeros.insert(i);
                }
            }
            processed.insert(i);
            continue;
        }
        let plus: Vec<usize> = (0..rays.len()).filter(|&k| vals[k] > 0).collect();
        let minus: Vec<usize> = (0..rays.len()).filter(|&k| vals[k] < 0).collect();
        let mut fresh = Vec::new();
        for &p in &plus {
            for &q in &minus {
                let mut common = rays[p].zeros.clone();
                common.intersect_with(&rays[q].zeros);
                if common.count_ones(..) + 2 < dim {
                    continue;
                }
                let blocked = rays
                    .iter()
                    .enumerate()
                    .any(|(k, r)| k != p && k != q && common.is_subset(&r.zeros));
                if blocked {
                    continue;
                }
                let (sp, sq) = (vals[p], vals[q]);
                let mut v = Vec::with_capacity(dim);
                for (x, y) in rays[q].v.iter().zip(&rays[p].v) {
                    let t = sp
                        .checked_mul(*x)
                        .zip(sq.checked_mul(*y))
                        .and_then(|(l, r)| l.checked_sub(r))
                        .ok_or(GeomError::Overflow)?;
                    v.push(t);
                }
                normalize(&mut v);
                common.insert(i);
                fresh.push(Ray { v, zeros: common });
            }
        }
        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + fresh.len());
        for (mut r, s) in rays.into_iter().zip(vals) {
            if s >= 0 {
                if s == 0 {
                    r.zeros.insert(i);
                }
                next.push(r);
            }
        }
        next.extend(fresh);
        rays = next;
        processed.insert(i);
    }
    Ok(rays)
}

/// A cone `{x : A x >= 0}` split into lineality space and the extreme rays
/// of its pointed part (taken in the row space of `A`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeRays {
    pub rays: Vec<Vec<i128>>,
    pub lineality: Vec<Vec<i128>>,
}

pub fn cone_rays(a: &[Vec<i128>], dim: usize) -> Result<ConeRays, GeomError> {
    let rref = Rref::new(&rational_rows(a), dim);
    let lineality = rref
        .nullspace()
        .iter()
        .map(|v| to_i128(&primitive(v)))
        .collect::<Result<Vec<_>, _>>()?;
    if rref.rank() == 0 {
        return Ok(ConeRays {
            rays: Vec::new(),
            lineality,
        });
    }
    let basis = rref
        .rows()
        .iter()
        .map(|r| to_i128(&primitive(r)))
        .collect::<Result<Vec<_>, _>>()?;
    // constraints in basis coordinates: A B^T
    let reduced = a
        .iter()
        .map(|row| {
            basis
                .iter()
                .map(|b| checked_dot(row, b))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let rays = extreme_rays(&reduced)?
        .into_iter()
        .map(|r| {
            let mut x = vec![0i128; dim];
            for (coef, b) in r.v.iter().zip(&basis) {
                for (xi, bi) in x.iter_mut().zip(b) {
                    *xi = coef
                        .checked_mul(*bi)
                        .and_then(|p| xi.checked_add(p))
                        .ok_or(GeomError::Overflow)?;
                }
            }
            normalize(&mut x);
            Ok(x)
        })
        .collect::<Result<Vec<_>, GeomError>>()?;
    Ok(ConeRays { rays, lineality })
}

/// Whether `x` satisfies every row of `A x >= 0`.
pub fn satisfies(a: &[Vec<i128>], x: &[i128]) -> Result<bool, GeomError> {
    for row in a {
        if checked_dot(row, x)? < 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn is_zero(v: &[i128]) -> bool {
    v.iter().all(Zero::is_zero)
}
