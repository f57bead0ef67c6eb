//! Ordered set partitions and the combinatorics of cyclic orders.
//!
//! An ordered set partition `(B_1, ..., B_l)` names an alcoved simplex. Its
//! normal fan only depends on the blocks up to cyclic rotation, so most of
//! the crate works with the cyclically normalized form where the block that
//! holds the largest element comes last.
//!
//! Elements are 1-based labels. A partition built by [`OrderedSetPartition::parse`]
//! lives on `[n]`; partitions produced by [`OrderedSetPartition::restrict`]
//! keep their original labels and live on the restricted ground set.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OspError {
    #[error("malformed ordered set partition {0:?}: {1}")]
    Syntax(String, String),
    #[error("duplicate element {0}")]
    Duplicate(usize),
    #[error("element {0} of [{1}] is missing")]
    Missing(usize, usize),
    #[error("empty block at position {0}")]
    EmptyBlock(usize),
    #[error("element 0 is not a valid label (labels are 1-based)")]
    ZeroLabel,
    #[error("restriction set must be a nonempty subset of the ground set")]
    BadRestriction,
    #[error("ordered set partition {0} is degenerate; a cyclic order is required")]
    Degenerate(String),
    #[error("ground sets differ: {0:?} vs {1:?}")]
    GroundMismatch(Vec<usize>, Vec<usize>),
    #[error("sequence is not a cyclic order on [{0}]")]
    NotCyclicOrder(usize),
}

/// An ordered tuple of nonempty, pairwise disjoint blocks.
///
/// Blocks are stored sorted; block order is significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderedSetPartition {
    blocks: Vec<Vec<usize>>,
}

impl OrderedSetPartition {
    /// Builds a partition of whatever ground set the blocks cover.
    pub fn new(blocks: Vec<Vec<usize>>) -> Result<Self, OspError> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(blocks.len());
        for (i, mut block) in blocks.into_iter().enumerate() {
            if block.is_empty() {
                return Err(OspError::EmptyBlock(i + 1));
            }
            for &x in &block {
                if x == 0 {
                    return Err(OspError::ZeroLabel);
                }
                if !seen.insert(x) {
                    return Err(OspError::Duplicate(x));
                }
            }
            block.sort_unstable();
            out.push(block);
        }
        if out.is_empty() {
            return Err(OspError::Syntax(String::new(), "no blocks".into()));
        }
        Ok(Self { blocks: out })
    }

    /// Builds a partition and checks that it covers exactly `[n]`, `n` being
    /// the largest element.
    pub fn on_range(blocks: Vec<Vec<usize>>) -> Result<Self, OspError> {
        let p = Self::new(blocks)?;
        let n = p.max_element();
        let ground = p.ground_set();
        if ground.len() != n {
            let missing = (1..=n).find(|x| ground.binary_search(x).is_err()).unwrap();
            return Err(OspError::Missing(missing, n));
        }
        Ok(p)
    }

    /// The nondegenerate partition with singleton blocks in the given order.
    pub fn cyclic_order(seq: &[usize]) -> Result<Self, OspError> {
        Self::on_range(seq.iter().map(|&x| vec![x]).collect())
    }

    /// The standard cyclic order `(1, 2, ..., n)`.
    pub fn standard(n: usize) -> Self {
        Self {
            blocks: (1..=n).map(|x| vec![x]).collect(),
        }
    }

    /// Parses the text format: blocks separated by `|`, elements by spaces
    /// or commas.
    pub fn parse(text: &str) -> Result<Self, OspError> {
        let syntax = |msg: &str| OspError::Syntax(text.to_string(), msg.to_string());
        if text.trim().is_empty() {
            return Err(syntax("empty input"));
        }
        let mut blocks = Vec::new();
        for (i, raw) in text.split('|').enumerate() {
            let mut block = Vec::new();
            for tok in raw.split(|c: char| c.is_whitespace() || c == ',') {
                if tok.is_empty() {
                    continue;
                }
                let x: usize = tok
                    .parse()
                    .map_err(|_| syntax(&format!("bad element {tok:?}")))?;
                block.push(x);
            }
            if block.is_empty() {
                return Err(OspError::EmptyBlock(i + 1));
            }
            blocks.push(block);
        }
        Self::on_range(blocks)
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Size of the ground set.
    pub fn len(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn max_element(&self) -> usize {
        self.blocks.iter().flatten().copied().max().unwrap_or(0)
    }

    /// Sorted union of the blocks.
    pub fn ground_set(&self) -> Vec<usize> {
        let mut g: Vec<usize> = self.blocks.iter().flatten().copied().collect();
        g.sort_unstable();
        g
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
    }

    /// Index of the block containing `x`.
    pub fn block_of(&self, x: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.binary_search(&x).is_ok())
    }

    /// Element sequence of a nondegenerate partition.
    pub fn sequence(&self) -> Option<Vec<usize>> {
        self.is_nondegenerate()
            .then(|| self.blocks.iter().map(|b| b[0]).collect())
    }

    pub fn is_normalized(&self) -> bool {
        let m = self.max_element();
        self.blocks
            .last()
            .is_some_and(|b| b.binary_search(&m).is_ok())
    }

    /// Rotates the blocks cyclically so the block holding the largest element
    /// comes last. The normal fan of the simplex is unchanged.
    pub fn normalize_cyclic(&self) -> Self {
        let m = self.max_element();
        let k = self.block_of(m).expect("max element belongs to a block");
        let l = self.blocks.len();
        let blocks = (0..l)
            .map(|i| self.blocks[(k + 1 + i) % l].clone())
            .collect();
        Self { blocks }
    }

    /// Cyclic left shift of the blocks by `k` positions.
    pub fn rotate(&self, k: usize) -> Self {
        let mut blocks = self.blocks.clone();
        let l = blocks.len();
        blocks.rotate_left(k % l);
        Self { blocks }
    }

    /// Intersects every block with `subset`, dropping empty intersections.
    /// Labels are kept.
    pub fn restrict(&self, subset: &[usize]) -> Result<Self, OspError> {
        if subset.is_empty() {
            return Err(OspError::BadRestriction);
        }
        let keep: BTreeSet<usize> = subset.iter().copied().collect();
        if keep.iter().any(|x| self.block_of(*x).is_none()) {
            return Err(OspError::BadRestriction);
        }
        Ok(self.restrict_unchecked(&keep))
    }

    pub(crate) fn restrict_unchecked(&self, keep: &BTreeSet<usize>) -> Self {
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                b.iter()
                    .copied()
                    .filter(|x| keep.contains(x))
                    .collect::<Vec<_>>()
            })
            .filter(|b| !b.is_empty())
            .collect();
        Self { blocks }
    }

    /// Applies a relabeling of the elements.
    pub fn relabel(&self, f: impl Fn(usize) -> usize) -> Result<Self, OspError> {
        Self::new(
            self.blocks
                .iter()
                .map(|b| b.iter().map(|&x| f(x)).collect())
                .collect(),
        )
    }

    /// Order-preserving relabeling of the ground set onto `[k]`. Returns the
    /// relabeled partition and the original label of each new label
    /// (`labels[i]` is the original of `i + 1`).
    pub fn compress(&self) -> (Self, Vec<usize>) {
        let labels = self.ground_set();
        let p = self
            .relabel(|x| labels.binary_search(&x).unwrap() + 1)
            .expect("relabeling is a bijection");
        (p, labels)
    }
}

impl fmt::Display for OrderedSetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self
            .blocks
            .iter()
            .map(|b| b.iter().map(usize::to_string).join(" "))
            .join("|");
        f.write_str(&s)
    }
}

impl FromStr for OrderedSetPartition {
    type Err = OspError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

impl Serialize for OrderedSetPartition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for OrderedSetPartition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Self::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Which forbidden restriction pattern an [`InterlacingWitness`] realizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InterlacingKind {
    /// `S|(a,b,c,d) = (a,b,c,d)`, `T|(a,b,c,d) = (c,b,a,d)`.
    Four,
    /// `T|(a..f) = (c,d,a,b,e,f)`.
    SixFirstKind,
    /// `T|(a..f) = (a,d,e,b,c,f)`.
    SixSecondKind,
}

impl InterlacingKind {
    /// Positions (into `(a,b,c,d[,e,f])`) of the pattern `T` must restrict to.
    pub(crate) fn target(self) -> &'static [usize] {
        match self {
            Self::Four => &[2, 1, 0, 3],
            Self::SixFirstKind => &[2, 3, 0, 1, 4, 5],
            Self::SixSecondKind => &[0, 3, 4, 1, 2, 5],
        }
    }

    pub fn size(self) -> usize {
        self.target().len()
    }
}

/// Certificate that two cyclic orders are 4- or 6-interlaced.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InterlacingWitness {
    pub kind: InterlacingKind,
    /// `(a, b, c, d[, e, f])`.
    pub elements: Vec<usize>,
}

impl InterlacingWitness {
    /// Re-checks the witness against a pair of partitions.
    pub fn verify(&self, s: &OrderedSetPartition, t: &OrderedSetPartition) -> bool {
        let k = self.kind.size();
        if self.elements.len() != k {
            return false;
        }
        let (Ok(rs), Ok(rt)) = (s.restrict(&self.elements), t.restrict(&self.elements)) else {
            return false;
        };
        if rs.num_blocks() != k || rt.num_blocks() != k {
            return false;
        }
        let want: Vec<usize> = self
            .kind
            .target()
            .iter()
            .map(|&i| self.elements[i])
            .collect();
        same_cyclic(&rs.sequence().unwrap(), &self.elements)
            && same_cyclic(&rt.sequence().unwrap(), &want)
    }
}

fn same_cyclic(a: &[usize], b: &[usize]) -> bool {
    a.len() == b.len() && (0..a.len()).any(|r| a.iter().cycle().skip(r).take(a.len()).eq(b.iter()))
}

/// Position of each element in a nondegenerate partition, indexed by label.
fn positions(p: &OrderedSetPartition) -> Vec<usize> {
    let mut pos = vec![usize::MAX; p.max_element() + 1];
    for (i, b) in p.blocks().iter().enumerate() {
        pos[b[0]] = i;
    }
    pos
}

/// True if the positions read cyclically in increasing order, i.e. the
/// sequence has at most one cyclic descent.
fn cyclically_increasing(pos: impl Iterator<Item = usize> + Clone) -> bool {
    let first = pos.clone().next();
    let mut descents = 0;
    let mut prev = None;
    for p in pos.chain(first) {
        if let Some(q) = prev {
            if p < q {
                descents += 1;
            }
        }
        prev = Some(p);
    }
    descents <= 1
}

fn check_nondegenerate_pair(
    s: &OrderedSetPartition,
    t: &OrderedSetPartition,
) -> Result<(), OspError> {
    if !s.is_nondegenerate() {
        return Err(OspError::Degenerate(s.to_string()));
    }
    if !t.is_nondegenerate() {
        return Err(OspError::Degenerate(t.to_string()));
    }
    let (gs, gt) = (s.ground_set(), t.ground_set());
    if gs != gt {
        return Err(OspError::GroundMismatch(gs, gt));
    }
    Ok(())
}

/// Relabels so `s` becomes the standard cyclic order and returns `t` under
/// that relabeling, read in `t`'s block order.
pub fn relative_cyclic_permutation(
    s: &OrderedSetPartition,
    t: &OrderedSetPartition,
) -> Result<Vec<usize>, OspError> {
    check_nondegenerate_pair(s, t)?;
    let pos = positions(s);
    Ok(t.blocks().iter().map(|b| pos[b[0]] + 1).collect())
}

/// Cyclic steps `j_{i+1} - j_i mod n` of a cyclic order on `[n]`.
pub fn step_sequence(seq: &[usize]) -> Result<Vec<usize>, OspError> {
    let n = seq.len();
    let mut seen = vec![false; n + 1];
    for &x in seq {
        if x == 0 || x > n || std::mem::replace(&mut seen[x], true) {
            return Err(OspError::NotCyclicOrder(n));
        }
    }
    Ok((0..n)
        .map(|i| (seq[(i + 1) % n] + n - seq[i]) % n)
        .collect())
}

/// The cases a cyclic order with all steps in `{1, 3}` can fall into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepClass {
    AllOnes,
    AllThrees,
    /// Steps `1, 3, 1, 3, ...` starting from the first element.
    Alt13,
    /// Steps `3, 1, 3, 1, ...` starting from the first element.
    Alt31,
    Not13,
}

/// Classifies the step sequence of a cyclic order, read from its first
/// element.
pub fn classify_13_steps(seq: &[usize]) -> Result<StepClass, OspError> {
    let steps = step_sequence(seq)?;
    if steps.iter().any(|&s| s != 1 && s != 3) {
        return Ok(StepClass::Not13);
    }
    let alt = |first: usize, second: usize| {
        steps
            .iter()
            .enumerate()
            .all(|(i, &s)| s == if i % 2 == 0 { first } else { second })
    };
    Ok(if steps.iter().all(|&s| s == 1) {
        StepClass::AllOnes
    } else if steps.iter().all(|&s| s == 3) {
        StepClass::AllThrees
    } else if steps.len() % 2 == 0 && alt(1, 3) {
        StepClass::Alt13
    } else if steps.len() % 2 == 0 && alt(3, 1) {
        StepClass::Alt31
    } else {
        // Mixed steps outside the alternating shapes cannot close up into a
        // single cycle; keep the classification total anyway.
        StepClass::Not13
    })
}

/// Looks for a 4-interlacing only.
pub fn find_four_interlacing(
    s: &OrderedSetPartition,
    t: &OrderedSetPartition,
) -> Result<Option<InterlacingWitness>, OspError> {
    check_nondegenerate_pair(s, t)?;
    Ok(search(s, t, &[InterlacingKind::Four]))
}

/// Searches for a 4-interlacing (all 4-subsets in lexicographic order), then
/// for a 6-interlacing of either kind. Within a subset the lexicographically
/// smallest witness tuple wins.
pub fn find_interlacing(
    s: &OrderedSetPartition,
    t: &OrderedSetPartition,
) -> Result<Option<InterlacingWitness>, OspError> {
    check_nondegenerate_pair(s, t)?;
    Ok(search(s, t, &[InterlacingKind::Four]).or_else(|| {
        search(
            s,
            t,
            &[
                InterlacingKind::SixFirstKind,
                InterlacingKind::SixSecondKind,
            ],
        )
    }))
}

fn search(
    s: &OrderedSetPartition,
    t: &OrderedSetPartition,
    kinds: &[InterlacingKind],
) -> Option<InterlacingWitness> {
    let k = kinds[0].size();
    let ground = s.ground_set();
    if ground.len() < k {
        return None;
    }
    let ps = positions(s);
    let pt = positions(t);
    for subset in ground.iter().copied().combinations(k) {
        let mut in_s = subset.clone();
        in_s.sort_by_key(|&x| ps[x]);
        let mut best: Option<InterlacingWitness> = None;
        for r in 0..k {
            let tuple: Vec<usize> = (0..k).map(|i| in_s[(r + i) % k]).collect();
            for &kind in kinds {
                let hit = cyclically_increasing(kind.target().iter().map(|&i| pt[tuple[i]]));
                if hit && best.as_ref().map_or(true, |b| tuple < b.elements) {
                    best = Some(InterlacingWitness {
                        kind,
                        elements: tuple.clone(),
                    });
                }
            }
        }
        if best.is_some() {
            return best;
        }
    }
    None
}

/// All ordered set partitions of the given elements, in a fixed order.
pub fn all_osps_of(elements: &[usize]) -> Vec<Vec<Vec<usize>>> {
    if elements.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let m = elements.len();
    for mask in 1u64..(1u64 << m) {
        let (first, rest): (Vec<usize>, Vec<usize>) = {
            let mut a = Vec::new();
            let mut b = Vec::new();
            for (i, &x) in elements.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    a.push(x);
                } else {
                    b.push(x);
                }
            }
            (a, b)
        };
        for tail in all_osps_of(&rest) {
            let mut blocks = vec![first.clone()];
            blocks.extend(tail);
            out.push(blocks);
        }
    }
    out
}

/// Every cyclically normalized ordered set partition of `[n]`.
pub fn all_normalized(n: usize) -> Vec<OrderedSetPartition> {
    assert!((1..=16).contains(&n), "enumeration bound exceeded");
    let others: Vec<usize> = (1..n).collect();
    let mut out = Vec::new();
    // The last block is {n} together with some subset of [n-1].
    for mask in 0u64..(1u64 << (n - 1)) {
        let mut last = vec![n];
        let mut rest = Vec::new();
        for (i, &x) in others.iter().enumerate() {
            if mask >> i & 1 == 1 {
                last.push(x);
            } else {
                rest.push(x);
            }
        }
        for mut blocks in all_osps_of(&rest) {
            blocks.push(last.clone());
            out.push(OrderedSetPartition::new(blocks).expect("valid by construction"));
        }
    }
    out.sort();
    out
}

/// Every cyclic order on `[n]` written with `n` last, lexicographic in the
/// first `n - 1` entries.
pub fn all_cyclic_orders(n: usize) -> Vec<OrderedSetPartition> {
    assert!((1..=12).contains(&n), "enumeration bound exceeded");
    (1..n)
        .permutations(n - 1)
        .map(|mut seq| {
            seq.push(n);
            OrderedSetPartition::cyclic_order(&seq).unwrap()
        })
        .collect()
}
