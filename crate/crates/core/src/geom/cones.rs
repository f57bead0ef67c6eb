//! Geometric check of root-cone intersections, independent of the graph
//! criterion in `pdgraph`.

use super::dd::{cone_rays, is_zero, satisfies};
use super::GeomError;
use crate::pdgraph::RootCone;

/// Inequalities `A x >= 0` cutting out the cone generated by `gens` in `R^n`.
fn generated_cone_hrep(gens: &[Vec<i128>], n: usize) -> Result<Vec<Vec<i128>>, GeomError> {
    let dual = cone_rays(gens, n)?;
    let mut rows = dual.rays;
    for l in dual.lineality {
        rows.push(l.iter().map(|x| -x).collect());
        rows.push(l);
    }
    Ok(rows)
}

fn root(n: usize, i: usize, j: usize) -> Vec<i128> {
    let mut v = vec![0; n];
    v[i] = 1;
    v[j] = -1;
    v
}

/// Computes `σ ∩ τ` by double description and reports whether it is
/// generated by the roots it contains.
pub fn root_cone_intersection_is_root_cone(s: &RootCone, t: &RootCone) -> Result<bool, GeomError> {
    let n = s.n();
    if t.n() != n {
        return Err(GeomError::DimensionMismatch(n, t.n()));
    }
    let to128 = |c: &RootCone| -> Vec<Vec<i128>> {
        c.spanning_vectors()
            .into_iter()
            .map(|v| v.into_iter().map(i128::from).collect())
            .collect()
    };
    let mut h = generated_cone_hrep(&to128(s), n)?;
    h.extend(generated_cone_hrep(&to128(t), n)?);
    let inter = cone_rays(&h, n)?;

    let mut inside = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && satisfies(&h, &root(n, i, j))? {
                inside.push(root(n, i, j));
            }
        }
    }
    let root_hull = generated_cone_hrep(&inside, n)?;
    for r in inter.rays.iter().filter(|r| !is_zero(r)) {
        if !satisfies(&root_hull, r)? {
            return Ok(false);
        }
    }
    for l in &inter.lineality {
        let neg: Vec<i128> = l.iter().map(|x| -x).collect();
        if !satisfies(&root_hull, l)? || !satisfies(&root_hull, &neg)? {
            return Ok(false);
        }
    }
    Ok(true)
}
