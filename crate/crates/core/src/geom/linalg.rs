//! Exact linear algebra over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

pub fn q_int(v: &BigInt) -> Q {
    Q::from_integer(v.clone())
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

/// Reduced row echelon form of a set of row vectors.
#[derive(Debug, Clone)]
pub struct Rref {
    rows: Vec<Vec<Q>>,
    pivots: Vec<usize>,
    ncols: usize,
}

impl Rref {
    pub fn new(rows: &[Vec<Q>], ncols: usize) -> Self {
        let mut m: Vec<Vec<Q>> = rows.to_vec();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..ncols {
            if r == m.len() {
                break;
            }
            let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            let inv = m[r][c].recip();
            for x in m[r].iter_mut() {
                *x *= &inv;
            }
            for i in 0..m.len() {
                if i != r && !m[i][c].is_zero() {
                    let f = m[i][c].clone();
                    for k in c..ncols {
                        let sub = &f * &m[r][k];
                        m[i][k] -= sub;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        m.truncate(r);
        Self {
            rows: m,
            pivots,
            ncols,
        }
    }

    pub fn from_ints<T: Into<BigInt> + Copy>(rows: &[Vec<T>], ncols: usize) -> Self {
        let rows: Vec<Vec<Q>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Q::from_integer(x.into())).collect())
            .collect();
        Self::new(&rows, ncols)
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn rows(&self) -> &[Vec<Q>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates of a row-space vector in the echelon basis.
    pub fn coords(&self, v: &[Q]) -> Vec<Q> {
        self.pivots.iter().map(|&p| v[p].clone()).collect()
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        let c = self.coords(v);
        (0..self.ncols).all(|k| {
            let recon = self
                .rows
                .iter()
                .zip(&c)
                .fold(Q::zero(), |acc, (row, x)| acc + x * &row[k]);
            recon == v[k]
        })
    }

    /// Basis of `{x : r·x = 0 for every row r}`.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let free: Vec<usize> = (0..self.ncols)
            .filter(|c| !self.pivots.contains(c))
            .collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Q::zero(); self.ncols];
                v[f] = Q::one();
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    v[p] = -row[f].clone();
                }
                v
            })
            .collect()
    }
}

/// Solves `m x = b` for an invertible square `m`.
pub fn solve(m: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let k = m.len();
    let aug: Vec<Vec<Q>> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            row.iter()
                .cloned()
                .chain(std::iter::once(bi.clone()))
                .collect()
        })
        .collect();
    let r = Rref::new(&aug, k + 1);
    if r.rank() != k || r.pivots.iter().any(|&p| p >= k) {
        return None;
    }
    Some(r.rows.iter().map(|row| row[k].clone()).collect())
}

/// Inverse of an invertible square matrix.
pub fn inverse(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let k = m.len();
    let aug: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..k).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    let r = Rref::new(&aug, 2 * k);
    if r.rank() != k || r.pivots.iter().any(|&p| p >= k) {
        return None;
    }
    Some(r.rows.iter().map(|row| row[k..].to_vec()).collect())
}

/// Scales a rational vector to a primitive integer vector with the same
/// direction. The zero vector stays zero.
pub fn primitive(v: &[Q]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * Q::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Flips the sign so the first nonzero entry is positive; returns whether it flipped.
pub fn canonical_sign(v: &mut [BigInt]) -> bool {
    match v.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => {
            for x in v.iter_mut() {
                *x = -x.clone();
            }
            true
        }
        _ => false,
    }
}

/// Whether two vectors are nonzero multiples of each other.
pub fn parallel(a: &[Q], b: &[Q]) -> bool {
    let Some(i) = a.iter().position(|x| !x.is_zero()) else {
        return false;
    };
    if b[i].is_zero() {
        return false;
    }
    let f = &b[i] / &a[i];
    a.iter().zip(b).all(|(x, y)| x * &f == *y)
}

pub fn to_i64(v: &[BigInt]) -> Option<Vec<i64>> {
    v.iter().map(|x| x.to_i64()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qv(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn rank_and_nullspace() {
        let r = Rref::new(&[qv(&[1, -1, 0]), qv(&[0, 1, -1]), qv(&[1, 0, -1])], 3);
        assert_eq!(r.rank(), 2);
        assert!(r.contains(&qv(&[2, -3, 1])));
        assert!(!r.contains(&qv(&[1, 0, 0])));
        let ns = r.nullspace();
        assert_eq!(ns, vec![qv(&[1, 1, 1])]);
    }

    #[test]
    fn solve_and_invert() {
        let m = vec![qv(&[2, 1]), qv(&[1, 1])];
        assert_eq!(solve(&m, &qv(&[3, 2])).unwrap(), qv(&[1, 1]));
        let inv = inverse(&m).unwrap();
        assert_eq!(inv, vec![qv(&[1, -1]), qv(&[-1, 2])]);
        assert!(inverse(&[qv(&[1, 1]), qv(&[2, 2])]).is_none());
    }

    #[test]
    fn primitive_vectors() {
        let v = vec![
            Q::new(1.into(), 2.into()),
            Q::new((-3).into(), 4.into()),
            q(0),
        ];
        let mut p = primitive(&v);
        assert_eq!(p, vec![BigInt::from(2), BigInt::from(-3), BigInt::from(0)]);
        assert!(!canonical_sign(&mut p));
        let mut m: Vec<BigInt> = vec![0.into(), (-2).into(), 1.into()];
        assert!(canonical_sign(&mut m));
        assert_eq!(m, vec![BigInt::from(0), BigInt::from(2), BigInt::from(-1)]);
        assert!(parallel(&qv(&[1, -1]), &qv(&[-3, 3])));
        assert!(!parallel(&qv(&[1, -1]), &qv(&[1, 1])));
    }
}
