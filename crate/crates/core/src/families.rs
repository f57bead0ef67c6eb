//! Named Minkowski sums of alcoved simplices and a verification pipeline.
//!
//! Every generator returns normalized partitions of `[n]` (`[n + 1]` for
//! pellytopes) in a fixed order. Coarsenings are always cyclic: a block is
//! a cyclic interval of the standard order `(1, ..., n)`.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::compat::{self, CompatError, Method, Verdict, Witness};
use crate::geom::{self, AlcovedHRep};
use crate::osp::OrderedSetPartition;

/// Ground-set bound for oracle verification when nothing else is set.
pub const DEFAULT_ORACLE_BOUND: usize = 6;
/// Environment variable overriding [`DEFAULT_ORACLE_BOUND`].
pub const ORACLE_BOUND_ENV: &str = "ALCOVE_ORACLE_BOUND";

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("{family} needs n >= {min}, got {n}")]
    TooSmall {
        family: FamilyName,
        n: usize,
        min: usize,
    },
    #[error("oracle verification is limited to n <= {bound}, got {n} (set {ORACLE_BOUND_ENV} to raise it)")]
    OracleBound { n: usize, bound: usize },
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("unknown mode {0:?}")]
    UnknownMode(String),
    #[error("a custom family needs at least one summand")]
    NoSummands,
    #[error(transparent)]
    Compat(#[from] CompatError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyName {
    Associahedron,
    Cyclohedron,
    Dhat,
    Pellytope,
    /// Pellytope generalization with at most `k` blocks per summand.
    HigherPellytope(usize),
    Custom,
}

impl fmt::Display for FamilyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Associahedron => f.write_str("associahedron"),
            Self::Cyclohedron => f.write_str("cyclohedron"),
            Self::Dhat => f.write_str("dhat"),
            Self::Pellytope => f.write_str("pellytope"),
            Self::HigherPellytope(k) => write!(f, "higher-pellytope-{k}"),
            Self::Custom => f.write_str("custom"),
        }
    }
}

impl Serialize for FamilyName {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for FamilyName {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "associahedron" => Ok(Self::Associahedron),
            "cyclohedron" => Ok(Self::Cyclohedron),
            "dhat" => Ok(Self::Dhat),
            "pellytope" => Ok(Self::Pellytope),
            "custom" => Ok(Self::Custom),
            _ => s
                .strip_prefix("higher-pellytope-")
                .and_then(|k| k.parse().ok())
                .map(Self::HigherPellytope)
                .ok_or_else(|| FamilyError::UnknownFamily(s.to_string())),
        }
    }
}

/// Builds the partition of `[n]` whose only non-singleton block is the
/// cyclic interval of length `len` starting at `start`, followed by the
/// remaining elements in cyclic order.
fn interval_coarsening(n: usize, start: usize, len: usize) -> OrderedSetPartition {
    let at = |k: usize| (start - 1 + k) % n + 1;
    let mut blocks = vec![(0..len).map(at).collect::<Vec<_>>()];
    blocks.extend((len..n).map(|k| vec![at(k)]));
    OrderedSetPartition::on_range(blocks)
        .expect("cyclic interval partition")
        .normalize_cyclic()
}

fn at_least(family: FamilyName, n: usize, min: usize) -> Result<(), FamilyError> {
    if n < min {
        return Err(FamilyError::TooSmall { family, n, min });
    }
    Ok(())
}

/// `(1, ..., n)` and every cyclic coarsening with exactly one block of size
/// `2..n`, ordered by block size and then by the block's first element.
pub fn cyclohedron_summands(n: usize) -> Result<Vec<OrderedSetPartition>, FamilyError> {
    at_least(FamilyName::Cyclohedron, n, 2)?;
    let mut out = vec![OrderedSetPartition::standard(n)];
    for len in 2..n {
        out.extend((1..=n).map(|start| interval_coarsening(n, start, len)));
    }
    Ok(out)
}

/// The cyclohedron summands whose non-singleton block contains `n`.
pub fn associahedron_summands(n: usize) -> Result<Vec<OrderedSetPartition>, FamilyError> {
    at_least(FamilyName::Associahedron, n, 2)?;
    Ok(cyclohedron_summands(n)?
        .into_iter()
        .filter(|p| p.blocks().iter().all(|b| b.len() == 1 || b.contains(&n)))
        .collect())
}

/// `([s, t] ∪ {n}, t + 1, ..., s - 1)` for all `(s, t) ∈ [n-1]^2`, row by
/// row in `s`, with repetitions. `dedup` keeps the first occurrence of each.
pub fn dhat_summands(n: usize, dedup: bool) -> Result<Vec<OrderedSetPartition>, FamilyError> {
    at_least(FamilyName::Dhat, n, 2)?;
    let m = n - 1;
    let mut out = Vec::with_capacity(m * m);
    for s in 1..=m {
        for t in 1..=m {
            let len = (t + m - s) % m + 1;
            let at = |k: usize| (s - 1 + k) % m + 1;
            let mut first: Vec<usize> = (0..len).map(at).collect();
            first.push(n);
            let mut blocks = vec![first];
            blocks.extend((len..m).map(|k| vec![at(k)]));
            let p = OrderedSetPartition::on_range(blocks).expect("interval partition");
            out.push(p.normalize_cyclic());
        }
    }
    if dedup {
        out = out.into_iter().unique().collect();
    }
    Ok(out)
}

/// Coarsenings of `(1, ..., n + 1)` with between two and `k` blocks whose
/// only non-singleton block (if any) contains `n + 1`.
pub fn higher_pellytope_summands(
    n: usize,
    k: usize,
) -> Result<Vec<OrderedSetPartition>, FamilyError> {
    at_least(FamilyName::HigherPellytope(k), n, 1)?;
    at_least(FamilyName::HigherPellytope(k), k, 2)?;
    let m = n + 1;
    let mut out = Vec::new();
    for blocks in (2..=k.min(m)).rev() {
        let singles = blocks - 1;
        if singles == n {
            out.push(OrderedSetPartition::standard(m));
            continue;
        }
        // a run of singletons inside [n]; the cyclic rest holds n + 1
        for first in 1..=(n - singles + 1) {
            let run: Vec<usize> = (first..first + singles).collect();
            let mut bs: Vec<Vec<usize>> = run.iter().map(|&x| vec![x]).collect();
            bs.push((1..=m).filter(|x| !run.contains(x)).collect());
            out.push(OrderedSetPartition::on_range(bs).expect("coarsening"));
        }
    }
    Ok(out)
}

/// The three-block case of [`higher_pellytope_summands`]: `2n - 1` summands
/// on `[n + 1]`, one per factor of the defining product.
pub fn pellytope_summands(n: usize) -> Result<Vec<OrderedSetPartition>, FamilyError> {
    at_least(FamilyName::Pellytope, n, 1)?;
    higher_pellytope_summands(n, 3)
}

/// A named family instantiated at a size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilySpec {
    pub name: FamilyName,
    pub n: usize,
    pub summands: Vec<OrderedSetPartition>,
}

impl FamilySpec {
    pub fn new(name: FamilyName, n: usize) -> Result<Self, FamilyError> {
        let summands = match name {
            FamilyName::Associahedron => associahedron_summands(n)?,
            FamilyName::Cyclohedron => cyclohedron_summands(n)?,
            FamilyName::Dhat => dhat_summands(n, false)?,
            FamilyName::Pellytope => pellytope_summands(n)?,
            FamilyName::HigherPellytope(k) => higher_pellytope_summands(n, k)?,
            FamilyName::Custom => return Err(FamilyError::NoSummands),
        };
        Ok(Self { name, n, summands })
    }

    /// A user-supplied list; `n` is the size of the common ground set.
    pub fn custom(summands: Vec<OrderedSetPartition>) -> Result<Self, FamilyError> {
        let n = summands.first().ok_or(FamilyError::NoSummands)?.len();
        Ok(Self {
            name: FamilyName::Custom,
            n,
            summands,
        })
    }

    /// Size of the ground set the summands live on.
    pub fn ground_size(&self) -> usize {
        self.summands
            .first()
            .map_or(self.n, OrderedSetPartition::len)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerifyMode {
    /// All pairs through the combinatorial compatibility check.
    Pairwise,
    /// Full Minkowski sum and a direct alcovedness test.
    Oracle,
}

impl FromStr for VerifyMode {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pairwise" => Ok(Self::Pairwise),
            "oracle" => Ok(Self::Oracle),
            _ => Err(FamilyError::UnknownMode(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyVerdict {
    Alcoved,
    NotAlcoved,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FamilyCounts {
    pub summands: usize,
    pub distinct: usize,
    /// Unordered pairs of distinct summands checked in pairwise mode;
    /// vertices of the sum in oracle mode.
    pub checked: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyReport {
    pub family: FamilyName,
    pub n: usize,
    pub mode: VerifyMode,
    pub summands: Vec<OrderedSetPartition>,
    pub verdict: FamilyVerdict,
    pub method: Method,
    pub witness: Option<Witness>,
    /// 1-based positions in `summands` of the offending pair.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair: Option<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restriction: Option<Vec<usize>>,
    pub counts: FamilyCounts,
    /// Tight bounds of the sum when it is alcoved.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hrep: Option<AlcovedHRep>,
    /// Wall-clock time; kept out of the JSON so reports are reproducible.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl FamilyReport {
    pub fn is_alcoved(&self) -> bool {
        self.verdict == FamilyVerdict::Alcoved
    }
}

/// Reads [`ORACLE_BOUND_ENV`], falling back to [`DEFAULT_ORACLE_BOUND`].
pub fn oracle_bound() -> usize {
    std::env::var(ORACLE_BOUND_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_ORACLE_BOUND)
}

pub fn verify_family(spec: &FamilySpec, mode: VerifyMode) -> Result<FamilyReport, FamilyError> {
    verify_family_with(spec, mode, oracle_bound())
}

/// Verifies a family. Oracle mode refuses families whose size parameter
/// exceeds `bound`.
pub fn verify_family_with(
    spec: &FamilySpec,
    mode: VerifyMode,
    bound: usize,
) -> Result<FamilyReport, FamilyError> {
    let start = Instant::now();
    let distinct: Vec<OrderedSetPartition> = spec.summands.iter().unique().cloned().collect();
    let hrep_of_sum = || {
        let parts: Vec<AlcovedHRep> = spec
            .summands
            .iter()
            .map(|p| AlcovedHRep::from_points(&geom::simplex_vertices(p)))
            .collect();
        AlcovedHRep::minkowski_sum(&parts)
    };
    let (verdict, checked, hrep) = match mode {
        VerifyMode::Pairwise => {
            // repeated summands are compatible with themselves, so only
            // distinct ones need checking
            let mut v = compat::check_collection(&distinct)?;
            if let Some((i, j)) = v.pair {
                let pos =
                    |p: &OrderedSetPartition| spec.summands.iter().position(|q| q == p).unwrap();
                v.pair = Some((pos(&distinct[i - 1]) + 1, pos(&distinct[j - 1]) + 1));
            }
            let hrep = if v.compatible { hrep_of_sum() } else { None };
            let pairs = distinct.len() * distinct.len().saturating_sub(1) / 2;
            (v, pairs, hrep)
        }
        VerifyMode::Oracle => {
            if spec.n > bound {
                return Err(FamilyError::OracleBound { n: spec.n, bound });
            }
            let simplices: Vec<_> = spec.summands.iter().map(geom::simplex_vertices).collect();
            let sum = geom::minkowski_sum_vertices(&simplices).map_err(CompatError::from)?;
            let a = geom::is_alcoved(&sum).map_err(CompatError::from)?;
            let v = match a.witness {
                Some(f) if !a.alcoved => Verdict::incompatible(Method::Oracle, Witness::Facet(f)),
                _ => Verdict::compatible(Method::Oracle),
            };
            (v, sum.len(), a.hrep)
        }
    };
    Ok(FamilyReport {
        family: spec.name,
        n: spec.n,
        mode,
        summands: spec.summands.clone(),
        verdict: if verdict.compatible {
            FamilyVerdict::Alcoved
        } else {
            FamilyVerdict::NotAlcoved
        },
        method: verdict.method,
        witness: verdict.witness,
        pair: verdict.pair,
        restriction: verdict.restriction,
        counts: FamilyCounts {
            summands: spec.summands.len(),
            distinct: distinct.len(),
            checked,
        },
        hrep,
        elapsed: start.elapsed(),
    })
}

/// Whether `p`, relabeled onto `[k]`, is a cyclohedron summand or the point.
pub fn is_cyclohedron_shaped(p: &OrderedSetPartition) -> bool {
    let (c, _) = p.compress();
    let k = c.len();
    if c.num_blocks() == 1 {
        return true;
    }
    k >= 2 && cyclohedron_summands(k).is_ok_and(|list| list.contains(&c.normalize_cyclic()))
}

/// Whether `p`, relabeled onto `[k]`, is one of the `D̂_k` summands.
pub fn is_dhat_shaped(p: &OrderedSetPartition) -> bool {
    let (c, _) = p.compress();
    let k = c.len();
    k >= 2 && dhat_summands(k, true).is_ok_and(|list| list.contains(&c.normalize_cyclic()))
}

/// A summand of `D̂_n` and a subset on which its restriction has neither
/// expected shape.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShapeViolation {
    pub summand: OrderedSetPartition,
    pub subset: Vec<usize>,
    pub restriction: OrderedSetPartition,
}

/// Restricts every distinct `D̂_n` summand to every `size`-subset of `[n]`
/// and collects the restrictions that are not `D̂`-shaped (subset contains
/// `n`) or cyclohedron-shaped (subset avoids `n`).
pub fn dhat_restriction_violations(
    n: usize,
    size: usize,
) -> Result<Vec<ShapeViolation>, FamilyError> {
    let summands = dhat_summands(n, true)?;
    let mut out = Vec::new();
    for subset in (1..=n).combinations(size.min(n)) {
        for p in &summands {
            let r = p.restrict(&subset).map_err(CompatError::from)?;
            let ok = if subset.contains(&n) {
                is_dhat_shaped(&r)
            } else {
                is_cyclohedron_shaped(&r)
            };
            if !ok {
                out.push(ShapeViolation {
                    summand: p.clone(),
                    subset: subset.clone(),
                    restriction: r,
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn osp(s: &str) -> OrderedSetPartition {
        OrderedSetPartition::parse(s).unwrap()
    }

    fn set(v: &[&str]) -> std::collections::BTreeSet<OrderedSetPartition> {
        v.iter().map(|s| osp(s).normalize_cyclic()).collect()
    }

    #[test]
    fn cyclohedron_four() {
        let got = cyclohedron_summands(4).unwrap();
        assert_eq!(got.len(), 9);
        let want = set(&[
            "1|2|3|4", "1|2|3 4", "1|2 3|4", "1 2|3|4", "2|3|4 1", "1|2 3 4", "1 2 3|4", "3|4 1 2",
            "2|3 4 1",
        ]);
        assert_eq!(
            got.into_iter().collect::<std::collections::BTreeSet<_>>(),
            want
        );
        assert_eq!(cyclohedron_summands(2).unwrap(), vec![osp("1|2")]);
        assert_eq!(cyclohedron_summands(3).unwrap().len(), 4);
        assert!(cyclohedron_summands(1).is_err());
    }

    #[test]
    fn associahedron_four() {
        let got = associahedron_summands(4).unwrap();
        let want = set(&[
            "1|2|3|4", "1|2|3 4", "2|3|4 1", "1|2 3 4", "3|4 1 2", "2|3 4 1",
        ]);
        assert_eq!(got.len(), 6);
        assert_eq!(
            got.into_iter().collect::<std::collections::BTreeSet<_>>(),
            want
        );
        assert_eq!(associahedron_summands(2).unwrap(), vec![osp("1|2")]);
        for p in associahedron_summands(5).unwrap() {
            assert!(p.blocks().iter().all(|b| b.len() == 1 || b.contains(&5)));
        }
    }

    #[test]
    fn dhat_small() {
        let got = dhat_summands(3, false).unwrap();
        assert_eq!(
            got,
            vec![osp("2|1 3"), osp("1 2 3"), osp("1 2 3"), osp("1|2 3")]
        );
        assert_eq!(dhat_summands(3, true).unwrap().len(), 3);
        assert_eq!(dhat_summands(2, false).unwrap(), vec![osp("1 2")]);
        for n in 2..=8 {
            assert_eq!(dhat_summands(n, false).unwrap().len(), (n - 1) * (n - 1));
        }
    }

    #[test]
    fn pellytope_small() {
        let got: std::collections::BTreeSet<_> =
            pellytope_summands(2).unwrap().into_iter().collect();
        assert_eq!(got, set(&["1|2 3", "2|3 1", "1|2|3"]));
        for n in 1..=8 {
            assert_eq!(pellytope_summands(n).unwrap().len(), 2 * n - 1);
        }
    }

    #[test]
    fn containments() {
        for n in 2..=8 {
            let cyc = cyclohedron_summands(n).unwrap();
            assert!(associahedron_summands(n)
                .unwrap()
                .iter()
                .all(|p| cyc.contains(p)));
            let assoc = associahedron_summands(n + 1).unwrap();
            assert!(pellytope_summands(n)
                .unwrap()
                .iter()
                .all(|p| assoc.contains(p)));
            let mut top = higher_pellytope_summands(n, n + 1).unwrap();
            let mut assoc = assoc;
            top.sort();
            assoc.sort();
            assert_eq!(top, assoc);
        }
    }

    #[test]
    fn adversarial_custom_family() {
        let spec = FamilySpec::custom(vec![osp("1|2|3|4"), osp("3|2|1|4")]).unwrap();
        let r = verify_family(&spec, VerifyMode::Pairwise).unwrap();
        assert!(!r.is_alcoved());
        assert!(r.witness.is_some());
        assert_eq!(r.pair, Some((1, 2)));
        let r = verify_family(&spec, VerifyMode::Oracle).unwrap();
        assert!(!r.is_alcoved());
    }

    #[test]
    fn small_families_agree() {
        for name in [
            FamilyName::Associahedron,
            FamilyName::Cyclohedron,
            FamilyName::Dhat,
            FamilyName::Pellytope,
        ] {
            for n in 2..=4 {
                let spec = FamilySpec::new(name, n).unwrap();
                let a = verify_family_with(&spec, VerifyMode::Pairwise, 6).unwrap();
                let b = verify_family_with(&spec, VerifyMode::Oracle, 6).unwrap();
                assert!(a.is_alcoved() && b.is_alcoved(), "{name} {n}");
                assert_eq!(a.hrep, b.hrep);
            }
        }
    }

    #[test]
    fn oracle_bound_enforced() {
        let spec = FamilySpec::new(FamilyName::Cyclohedron, 5).unwrap();
        assert!(matches!(
            verify_family_with(&spec, VerifyMode::Oracle, 4),
            Err(FamilyError::OracleBound { n: 5, bound: 4 })
        ));
    }

    #[test]
    fn names_round_trip() {
        for name in [
            FamilyName::Associahedron,
            FamilyName::Cyclohedron,
            FamilyName::Dhat,
            FamilyName::Pellytope,
            FamilyName::HigherPellytope(4),
        ] {
            assert_eq!(name.to_string().parse::<FamilyName>().unwrap(), name);
        }
    }
}
