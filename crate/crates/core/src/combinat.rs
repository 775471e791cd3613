//! Enumeration of F-curves, the sl2 basis index set, the distinguished curve
//! families contracted by Kapranov's, Keel's and Knudsen's maps and by fibre
//! products of projections, and balanced weight assignments.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest ambient the bitmask representation supports.
pub const MAX_POINTS: usize = 31;

/// A marked point `1..=n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Label(pub u8);

impl Label {
    pub fn new(value: usize, n: usize) -> Result<Self> {
        if value == 0 || value > n {
            return Err(Error::InvalidArgument(format!(
                "label {value} outside 1..={n}"
            )));
        }
        Ok(Label(value as u8))
    }

    #[inline]
    pub fn get(self) -> usize {
        self.0 as usize
    }

    #[inline]
    fn bit(self) -> u32 {
        1 << (self.0 - 1)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A subset of `{1..n}`; bit `i-1` stands for label `i`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelSet(pub u32);

impl LabelSet {
    pub const EMPTY: LabelSet = LabelSet(0);

    /// `{1..n}`.
    pub fn full(n: usize) -> Self {
        LabelSet(if n >= 32 { u32::MAX } else { (1u32 << n) - 1 })
    }

    pub fn singleton(label: usize) -> Self {
        LabelSet(1 << (label - 1))
    }

    /// Builds a set from 1-based labels, rejecting anything outside `1..=n`.
    pub fn from_labels<I: IntoIterator<Item = usize>>(labels: I, n: usize) -> Result<Self> {
        let mut mask = 0;
        for l in labels {
            mask |= Label::new(l, n)?.bit();
        }
        Ok(LabelSet(mask))
    }

    #[inline]
    pub fn contains(self, label: usize) -> bool {
        label >= 1 && self.0 & (1 << (label - 1)) != 0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn is_subset(self, other: LabelSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn complement(self, n: usize) -> Self {
        LabelSet(!self.0 & LabelSet::full(n).0)
    }

    pub fn union(self, other: LabelSet) -> Self {
        LabelSet(self.0 | other.0)
    }

    pub fn intersection(self, other: LabelSet) -> Self {
        LabelSet(self.0 & other.0)
    }

    pub fn without(self, label: usize) -> Self {
        LabelSet(self.0 & !(1 << (label - 1)))
    }

    /// Smallest label, if any.
    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize + 1)
    }

    /// Labels in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let low = rest.trailing_zeros();
            rest &= rest - 1;
            Some(low as usize + 1)
        })
    }

    fn write_elements(self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, l) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Display for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        self.write_elements(f)?;
        f.write_str("}")
    }
}

/// An unordered partition of `{1..n}` into four nonempty blocks, i.e. the
/// F-curve `F(I,J,K,L)`. Blocks are kept sorted by their minimum element so
/// that equality is equality of partitions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FCurve {
    n: u8,
    blocks: [LabelSet; 4],
}

impl FCurve {
    /// Canonicalises four blocks. Fails unless they are nonempty, disjoint and
    /// cover `{1..n}`.
    pub fn new(n: usize, blocks: [LabelSet; 4]) -> Result<Self> {
        check_ambient(n)?;
        let mut seen = LabelSet::EMPTY;
        for b in blocks {
            if b.is_empty() {
                return Err(Error::InvalidArgument("empty block in F-curve".into()));
            }
            if b.intersection(seen) != LabelSet::EMPTY {
                return Err(Error::InvalidArgument("F-curve blocks overlap".into()));
            }
            seen = seen.union(b);
        }
        if seen != LabelSet::full(n) {
            return Err(Error::InvalidArgument(format!(
                "F-curve blocks do not cover 1..={n}"
            )));
        }
        Ok(Self::from_blocks_unchecked(n, blocks))
    }

    fn from_blocks_unchecked(n: usize, mut blocks: [LabelSet; 4]) -> Self {
        blocks.sort_by_key(|b| b.0.trailing_zeros());
        FCurve { n: n as u8, blocks }
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn blocks(&self) -> &[LabelSet; 4] {
        &self.blocks
    }

    /// The block containing `label`.
    pub fn block_of(&self, label: usize) -> LabelSet {
        *self
            .blocks
            .iter()
            .find(|b| b.contains(label))
            .expect("blocks cover the ambient set")
    }

    /// True iff `{label}` is one of the blocks.
    pub fn is_singleton(&self, label: usize) -> bool {
        self.blocks.contains(&LabelSet::singleton(label))
    }

    /// Applies a permutation given as `sigma[i-1] = σ(i)`.
    pub fn relabel(&self, sigma: &Permutation) -> Self {
        let blocks = self.blocks.map(|b| sigma.apply_set(b));
        Self::from_blocks_unchecked(self.n(), blocks)
    }

    /// Deletes `label` from its block; `None` if that empties the block.
    pub fn forget(&self, label: usize) -> Option<FCurve> {
        let n = self.n();
        let shift = |b: LabelSet| {
            let low = b.0 & ((1u32 << (label - 1)) - 1);
            let high = (b.0 >> label) << (label - 1);
            LabelSet(low | high)
        };
        let mut blocks = [LabelSet::EMPTY; 4];
        for (k, b) in self.blocks.iter().enumerate() {
            let reduced = shift(*b);
            if reduced.is_empty() {
                return None;
            }
            blocks[k] = reduced;
        }
        Some(Self::from_blocks_unchecked(n - 1, blocks))
    }

    /// The canonical `I|J|K|L` encoding.
    pub fn encode(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for FCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, b) in self.blocks.iter().enumerate() {
            if k > 0 {
                f.write_str("|")?;
            }
            b.write_elements(f)?;
        }
        Ok(())
    }
}

impl FCurve {
    /// Parses `I|J|K|L` (blocks and elements in any order) for ambient `n`.
    pub fn parse(s: &str, n: usize) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split('|').collect();
        if parts.len() != 4 {
            return Err(Error::Parse(format!("F-curve {s:?} needs four blocks")));
        }
        let mut blocks = [LabelSet::EMPTY; 4];
        for (k, part) in parts.iter().enumerate() {
            let labels = part
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad label {t:?} in {s:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            let mut set = LabelSet::EMPTY;
            for l in labels {
                let single = LabelSet::from_labels([l], n)?;
                if set.intersection(single) != LabelSet::EMPTY {
                    return Err(Error::Parse(format!("repeated label {l} in {s:?}")));
                }
                set = set.union(single);
            }
            blocks[k] = set;
        }
        FCurve::new(n, blocks)
    }
}

/// A permutation of `{1..n}` stored as images `σ(1), …, σ(n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i == 0 || i > n || seen[i - 1] {
                return Err(Error::InvalidArgument(format!(
                    "{images:?} is not a permutation of 1..={n}"
                )));
            }
            seen[i - 1] = true;
        }
        Ok(Permutation {
            images: images.into_iter().map(|i| i as u8).collect(),
        })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (1..=n as u8).collect(),
        }
    }

    /// The transposition swapping `i` and `j`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut p = Self::identity(n);
        p.images.swap(i - 1, j - 1);
        p
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, label: usize) -> usize {
        self.images[label - 1] as usize
    }

    pub fn apply_set(&self, set: LabelSet) -> LabelSet {
        LabelSet(set.iter().fold(0, |acc, l| acc | (1 << (self.apply(l) - 1))))
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u8; self.n()];
        for (i, &img) in self.images.iter().enumerate() {
            inv[img as usize - 1] = i as u8 + 1;
        }
        Permutation { images: inv }
    }
}

/// A binary weight vector of length `n`; bit `i-1` is `a_i`. Members of the
/// index set `A_n` have an even number of ones, at least four.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BasisVector {
    n: u8,
    bits: u32,
}

impl BasisVector {
    /// Accepts only elements of `A_n`.
    pub fn new(n: usize, bits: u32) -> Result<Self> {
        check_ambient(n)?;
        let v = BasisVector { n: n as u8, bits };
        if bits & !LabelSet::full(n).0 != 0 || !v.in_basis_set() {
            return Err(Error::InvalidArgument(format!(
                "{v} is not an even weight vector with at least four ones"
            )));
        }
        Ok(v)
    }

    pub(crate) fn from_raw(n: usize, bits: u32) -> Self {
        BasisVector { n: n as u8, bits }
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Support as a label set.
    pub fn support(&self) -> LabelSet {
        LabelSet(self.bits)
    }

    /// `a_i` for 1-based `i`.
    pub fn weight(&self, i: usize) -> u32 {
        (self.bits >> (i - 1)) & 1
    }

    pub fn ones(&self) -> usize {
        self.bits.count_ones() as usize
    }

    fn in_basis_set(&self) -> bool {
        let ones = self.ones();
        ones >= 4 && ones.is_multiple_of(2)
    }

    /// Parses a bitstring such as `11110` (position 1 first).
    pub fn parse(s: &str) -> Result<Self> {
        let n = s.len();
        if n > MAX_POINTS {
            return Err(Error::Parse(format!("bitstring {s:?} too long")));
        }
        let mut bits = 0;
        for (k, c) in s.chars().enumerate() {
            match c {
                '1' => bits |= 1 << k,
                '0' => {}
                _ => return Err(Error::Parse(format!("bad bitstring {s:?}"))),
            }
        }
        BasisVector::new(n, bits)
    }
}

impl fmt::Display for BasisVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.n() {
            f.write_str(if self.weight(i) == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

pub(crate) fn check_ambient(n: usize) -> Result<()> {
    if n < 4 {
        return Err(Error::InvalidAmbient { n });
    }
    if n > MAX_POINTS {
        return Err(Error::InvalidArgument(format!(
            "n={n} exceeds the supported maximum {MAX_POINTS}"
        )));
    }
    Ok(())
}

/// Every F-curve on `M_{0,n}`, sorted by canonical encoding. There are
/// `S(n,4)` of them.
pub fn enum_fcurves(n: usize) -> Result<Vec<FCurve>> {
    check_ambient(n)?;
    let mut out = Vec::new();
    // Restricted growth strings: label k joins an existing block or opens the next one.
    let mut blocks = [LabelSet::EMPTY; 4];
    fn grow(label: usize, n: usize, used: usize, blocks: &mut [LabelSet; 4], out: &mut Vec<FCurve>) {
        if label > n {
            if used == 4 {
                out.push(FCurve::from_blocks_unchecked(n, *blocks));
            }
            return;
        }
        // Not enough labels left to open the remaining blocks.
        if n - label + 1 < 4 - used {
            return;
        }
        for b in 0..used.min(4) {
            blocks[b].0 |= 1 << (label - 1);
            grow(label + 1, n, used, blocks, out);
            blocks[b].0 &= !(1 << (label - 1));
        }
        if used < 4 {
            blocks[used].0 |= 1 << (label - 1);
            grow(label + 1, n, used + 1, blocks, out);
            blocks[used].0 &= !(1 << (label - 1));
        }
    }
    grow(1, n, 0, &mut blocks, &mut out);
    out.sort_by_cached_key(FCurve::encode);
    Ok(out)
}

/// The index set `A_n`, sorted by bitstring.
pub fn enum_basis(n: usize) -> Result<Vec<BasisVector>> {
    check_ambient(n)?;
    let mut out: Vec<BasisVector> = (0..(1u64 << n))
        .map(|bits| BasisVector::from_raw(n, bits as u32))
        .filter(BasisVector::in_basis_set)
        .collect();
    out.sort_by_cached_key(|v| v.to_string());
    Ok(out)
}

/// `|A_n| = 2^(n-1) - C(n,2) - 1`, the Picard rank of `M_{0,n}`; zero for `n <= 3`.
pub fn picard_rank(n: usize) -> usize {
    if n < 4 {
        return 0;
    }
    (1usize << (n - 1)) - n * (n - 1) / 2 - 1
}

/// Stirling number of the second kind `S(n, k)`.
pub fn stirling2(n: usize, k: usize) -> u64 {
    let mut row = vec![0u64; k + 1];
    row[0] = 1;
    for _ in 0..n {
        for j in (1..=k).rev() {
            row[j] = j as u64 * row[j] + row[j - 1];
        }
        row[0] = 0;
    }
    row[k]
}

/// The curve families singled out by the contractions of `M_{0,n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurveFamily {
    /// `n` lies in a block of size at least two.
    Kapranov,
    /// `{n}` is a block and some other block avoids `1, 2, 3`.
    Keel,
    /// `{n-1}` and `{n}` are both blocks.
    Knudsen,
    /// Curves contracted by the fibre product of the projections to `S` and `T`:
    /// some block lies in `S^c ∩ T^c`, or two distinct blocks lie in `S^c`
    /// and `T^c` respectively.
    FiberProduct { s: LabelSet, t: LabelSet },
}

impl CurveFamily {
    /// `F_i`: curves with `{i}` a block (contracted by forgetting `i`).
    pub fn projection(n: usize, i: usize) -> Self {
        let s = LabelSet::full(n).without(i);
        CurveFamily::FiberProduct { s, t: s }
    }

    /// `F_{s,t}`: curves with `{s}` and `{t}` both blocks.
    pub fn pair(n: usize, s: usize, t: usize) -> Self {
        let full = LabelSet::full(n);
        CurveFamily::FiberProduct {
            s: full.without(s),
            t: full.without(t),
        }
    }

    /// Knudsen's family written as a fibre product, `S = [n-1]`, `T = [n] \ {n-1}`.
    pub fn knudsen_as_fiber_product(n: usize) -> Self {
        let full = LabelSet::full(n);
        CurveFamily::FiberProduct {
            s: full.without(n),
            t: full.without(n - 1),
        }
    }

    /// Keel's family written as a fibre product, `S = [n-1]`, `T = {1,2,3,n}`.
    pub fn keel_as_fiber_product(n: usize) -> Self {
        CurveFamily::FiberProduct {
            s: LabelSet::full(n).without(n),
            t: LabelSet(0b111 | (1 << (n - 1))),
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        if let CurveFamily::FiberProduct { s, t } = self {
            let full = LabelSet::full(n);
            if !s.is_subset(full) || !t.is_subset(full) {
                return Err(Error::InvalidArgument(format!(
                    "S={s}, T={t} are not subsets of 1..={n}"
                )));
            }
            if s.len() < 3 || t.len() < 3 {
                return Err(Error::InvalidArgument(format!(
                    "S={s}, T={t} must each have at least three elements"
                )));
            }
        }
        Ok(())
    }

    /// Membership test for a curve on `M_{0,n}`.
    pub fn contains(&self, curve: &FCurve) -> bool {
        let n = curve.n();
        let blocks = curve.blocks();
        match self {
            CurveFamily::Kapranov => curve.block_of(n).len() > 1,
            CurveFamily::Keel => {
                curve.is_singleton(n)
                    && blocks
                        .iter()
                        .any(|b| !b.contains(n) && b.0 & 0b111 == 0)
            }
            CurveFamily::Knudsen => curve.is_singleton(n) && curve.is_singleton(n - 1),
            CurveFamily::FiberProduct { s, t } => {
                let sc = s.complement(n);
                let tc = t.complement(n);
                let both = sc.intersection(tc);
                if blocks.iter().any(|b| b.is_subset(both)) {
                    return true;
                }
                (0..4).any(|i| {
                    blocks[i].is_subset(sc)
                        && (0..4).any(|j| j != i && blocks[j].is_subset(tc))
                })
            }
        }
    }
}

/// The members of `family` among `enum_fcurves(n)`, in the same order.
pub fn curve_family(n: usize, family: &CurveFamily) -> Result<Vec<FCurve>> {
    family.validate(n)?;
    Ok(enum_fcurves(n)?
        .into_iter()
        .filter(|c| family.contains(c))
        .collect())
}

/// Positive integer weights on a label set `X` for which exactly one unordered
/// bipartition `{A, X \ A}` balances.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightAssignment {
    /// `(label, weight)` in ascending label order.
    pub weights: Vec<(usize, u64)>,
}

impl WeightAssignment {
    pub fn get(&self, label: usize) -> Option<u64> {
        self.weights
            .iter()
            .find_map(|&(l, w)| (l == label).then_some(w))
    }

    pub fn total(&self, set: LabelSet) -> u64 {
        self.weights
            .iter()
            .filter(|(l, _)| set.contains(*l))
            .map(|(_, w)| w)
            .sum()
    }

    pub fn values(&self) -> Vec<u64> {
        self.weights.iter().map(|&(_, w)| w).collect()
    }

    /// Every subset `B` (up to complement) whose weight equals that of its
    /// complement, found by exhaustive search.
    pub fn balanced_bipartitions(&self) -> Vec<LabelSet> {
        let labels: Vec<usize> = self.weights.iter().map(|&(l, _)| l).collect();
        let Some((&first, rest)) = labels.split_first() else {
            return Vec::new();
        };
        let all: LabelSet = LabelSet(labels.iter().fold(0, |m, &l| m | (1 << (l - 1))));
        let total = self.total(all);
        let mut found = Vec::new();
        // The side containing the first label ranges over all subsets of the rest.
        for mask in 0u64..(1u64 << rest.len()) {
            let mut b = LabelSet::singleton(first);
            for (k, &l) in rest.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    b = b.union(LabelSet::singleton(l));
                }
            }
            if b == all {
                continue;
            }
            if 2 * self.total(b) == total {
                found.push(b);
            }
        }
        found
    }

    /// True iff `{a, X\a}` is the one and only balanced bipartition.
    pub fn balances_uniquely(&self, a: LabelSet) -> bool {
        let all = LabelSet(self.weights.iter().fold(0, |m, &(l, _)| m | (1 << (l - 1))));
        match self.balanced_bipartitions().as_slice() {
            [b] => *b == a || *b == LabelSet(all.0 & !a.0),
            _ => false,
        }
    }
}

/// Default number of random candidates tried when the seed assignment fails.
pub const DEFAULT_SEARCH_BUDGET: usize = 4096;

/// Weights on `x` balancing `a` against `x \ a` and no other bipartition.
///
/// The seed gives every element of the complement weight `|A|`, every other
/// element of `A` weight 1, and `min A` whatever makes the two sides equal.
/// A balanced side containing `min A` then has to pick up `|A| - 1` from
/// weights that are `1` or multiples of `|A|`, which forces it to be `A`.
/// The result is always re-checked exhaustively before it is returned.
pub fn balanced_weights(x: LabelSet, a: LabelSet) -> Result<WeightAssignment> {
    validate_bipartition(x, a)?;
    let seed = seed_weights(x, a);
    if seed.balances_uniquely(a) {
        return Ok(seed);
    }
    search_balanced_weights(x, a, DEFAULT_SEARCH_BUDGET, 0)
}

fn validate_bipartition(x: LabelSet, a: LabelSet) -> Result<()> {
    if x.len() < 2 || a.is_empty() || !a.is_subset(x) || a == x {
        return Err(Error::InvalidArgument(format!(
            "need |X| >= 2 and a proper nonempty A; got X={x}, A={a}"
        )));
    }
    Ok(())
}

fn seed_weights(x: LabelSet, a: LabelSet) -> WeightAssignment {
    let rest = x.intersection(LabelSet(!a.0));
    let k = a.len() as u64;
    let pivot = a.min().expect("A is nonempty");
    let weights = x
        .iter()
        .map(|l| {
            let w = if rest.contains(l) {
                k
            } else if l == pivot {
                k * rest.len() as u64 - (k - 1)
            } else {
                1
            };
            (l, w)
        })
        .collect();
    WeightAssignment { weights }
}

/// Randomised fallback: perturb the free weights, let `min A` balance, keep
/// every candidate that passes the exhaustive check and return the
/// lexicographically smallest. Deterministic for a given `seed`.
pub(crate) fn search_balanced_weights(
    x: LabelSet,
    a: LabelSet,
    budget: usize,
    seed: u64,
) -> Result<WeightAssignment> {
    validate_bipartition(x, a)?;
    let pivot = a.min().expect("A is nonempty");
    let bound = 4 * x.len() as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<Vec<u64>> = None;
    for _ in 0..budget {
        let mut free: Vec<(usize, u64)> = x
            .iter()
            .filter(|&l| l != pivot)
            .map(|l| (l, rng.random_range(1..=bound)))
            .collect();
        let in_a: u64 = free.iter().filter(|(l, _)| a.contains(*l)).map(|p| p.1).sum();
        let out_a: u64 = free.iter().filter(|(l, _)| !a.contains(*l)).map(|p| p.1).sum();
        if out_a <= in_a {
            continue;
        }
        free.push((pivot, out_a - in_a));
        free.sort_unstable();
        let candidate = WeightAssignment { weights: free };
        if candidate.balances_uniquely(a) {
            let values = candidate.values();
            if best.as_ref().is_none_or(|b| values < *b) {
                best = Some(values);
            }
        }
    }
    match best {
        Some(values) => Ok(WeightAssignment {
            weights: x.iter().zip(values).collect(),
        }),
        None => Err(Error::SearchBudgetExceeded { attempts: budget }),
    }
}

impl FromStr for LabelSet {
    type Err = Error;

    /// Parses a comma-separated label list such as `1,2,5` (no ambient check).
    fn from_str(s: &str) -> Result<Self> {
        let mut set = LabelSet::EMPTY;
        for t in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let l: usize = t
                .parse()
                .map_err(|_| Error::Parse(format!("bad label {t:?} in {s:?}")))?;
            if l == 0 || l > MAX_POINTS {
                return Err(Error::Parse(format!("label {l} out of range")));
            }
            set = set.union(LabelSet::singleton(l));
        }
        Ok(set)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::{BTreeSet, HashSet};

    /// Independent oracle: all surjections onto four blocks, deduplicated as
    /// sets of sets.
    fn brute_force_partitions(n: usize) -> HashSet<BTreeSet<BTreeSet<usize>>> {
        let mut out = HashSet::new();
        for code in 0..4usize.pow(n as u32) {
            let mut blocks = vec![BTreeSet::new(); 4];
            let mut c = code;
            for label in 1..=n {
                blocks[c % 4].insert(label);
                c /= 4;
            }
            if blocks.iter().all(|b| !b.is_empty()) {
                out.insert(blocks.into_iter().collect());
            }
        }
        out
    }

    fn as_sets(c: &FCurve) -> BTreeSet<BTreeSet<usize>> {
        c.blocks().iter().map(|b| b.iter().collect()).collect()
    }

    #[test]
    fn fcurve_counts_match_brute_force() {
        for n in 4..=8 {
            let curves = enum_fcurves(n).unwrap();
            let oracle = brute_force_partitions(n);
            assert_eq!(curves.len(), oracle.len(), "n={n}");
            let ours: HashSet<_> = curves.iter().map(as_sets).collect();
            assert_eq!(ours, oracle);
            assert_eq!(curves.len() as u64, stirling2(n, 4));
        }
        assert_eq!(enum_fcurves(5).unwrap().len(), 10);
        assert_eq!(enum_fcurves(6).unwrap().len(), 65);
    }

    #[test]
    fn n4_has_a_single_curve() {
        let curves = enum_fcurves(4).unwrap();
        assert_eq!(curves.len(), 1);
        assert_eq!(curves[0].encode(), "1|2|3|4");
    }

    #[test]
    fn small_ambients_are_rejected() {
        assert!(matches!(enum_fcurves(3), Err(Error::InvalidAmbient { n: 3 })));
        assert!(matches!(enum_basis(2), Err(Error::InvalidAmbient { n: 2 })));
    }

    #[test]
    fn enumeration_is_sorted_by_encoding() {
        let curves = enum_fcurves(7).unwrap();
        let codes: Vec<String> = curves.iter().map(FCurve::encode).collect();
        let mut sorted = codes.clone();
        sorted.sort();
        assert_eq!(codes, sorted);
    }

    #[test]
    fn basis_counts() {
        assert_eq!(enum_basis(4).unwrap().len(), 1);
        assert_eq!(enum_basis(4).unwrap()[0].to_string(), "1111");
        assert_eq!(enum_basis(5).unwrap().len(), 5);
        assert_eq!(enum_basis(6).unwrap().len(), 16);
        for n in 4..=12 {
            assert_eq!(enum_basis(n).unwrap().len(), picard_rank(n), "n={n}");
        }
    }

    #[test]
    fn encoding_round_trip_and_parse_errors() {
        let c = FCurve::parse("5|4,1|3|2", 5).unwrap();
        assert_eq!(c.encode(), "1,4|2|3|5");
        assert!(FCurve::parse("1|2|3", 5).is_err());
        assert!(FCurve::parse("1|2|3|4", 5).is_err());
        assert!(FCurve::parse("1|2|3|4,4,5", 5).is_err());
        assert!(FCurve::parse("1|2|3|x", 4).is_err());
        assert!(FCurve::parse("0|1,2|3|4", 4).is_err());
    }

    #[test]
    fn knudsen_family_at_n5() {
        let knu = curve_family(5, &CurveFamily::Knudsen).unwrap();
        let codes: BTreeSet<String> = knu.iter().map(FCurve::encode).collect();
        let expected: BTreeSet<String> = ["1|2,3|4|5", "1,3|2|4|5", "1,2|3|4|5"]
            .into_iter()
            .map(String::from)
            .collect();
        assert_eq!(codes, expected);
        assert_eq!(curve_family(4, &CurveFamily::Knudsen).unwrap().len(), 1);
    }

    #[test]
    fn kapranov_family_at_n5() {
        let kap = curve_family(5, &CurveFamily::Kapranov).unwrap();
        assert_eq!(kap.len(), 4);
        assert!(kap.iter().all(|c| c.block_of(5).len() == 2));
    }

    #[test]
    fn family_argument_validation() {
        let bad = CurveFamily::FiberProduct {
            s: LabelSet(0b11),
            t: LabelSet(0b111),
        };
        assert!(curve_family(5, &bad).is_err());
        let outside = CurveFamily::FiberProduct {
            s: LabelSet(0b111),
            t: LabelSet(0b1110_0000),
        };
        assert!(curve_family(5, &outside).is_err());
    }

    #[test]
    fn knudsen_and_keel_as_fiber_products() {
        for n in 5..=8 {
            let knu = curve_family(n, &CurveFamily::Knudsen).unwrap();
            assert_eq!(knu.len(), (1 << (n - 3)) - 1);
            assert_eq!(
                knu,
                curve_family(n, &CurveFamily::knudsen_as_fiber_product(n)).unwrap()
            );
            assert_eq!(
                curve_family(n, &CurveFamily::Keel).unwrap(),
                curve_family(n, &CurveFamily::keel_as_fiber_product(n)).unwrap()
            );
        }
    }

    #[test]
    fn forget_deletes_and_shifts() {
        let c = FCurve::parse("1|2|3|4,5", 5).unwrap();
        assert_eq!(c.forget(5).unwrap().encode(), "1|2|3|4");
        assert!(FCurve::parse("1|2,3|4|5", 5).unwrap().forget(5).is_none());
        let d = FCurve::parse("1,3|2|4|5", 5).unwrap();
        assert_eq!(d.forget(2), None);
        assert_eq!(d.forget(3).unwrap().encode(), "1|2|3|4");
    }

    #[test]
    fn balanced_weight_examples() {
        let cases = [
            (vec![1, 2], vec![1], vec![1, 1]),
            (vec![1, 2, 3], vec![1], vec![2, 1, 1]),
            (vec![1, 2, 3, 4], vec![1, 2], vec![3, 1, 2, 2]),
        ];
        for (x, a, expected) in cases {
            let x = LabelSet::from_labels(x, 8).unwrap();
            let a = LabelSet::from_labels(a, 8).unwrap();
            let w = balanced_weights(x, a).unwrap();
            assert_eq!(w.values(), expected);
            assert_eq!(w.balanced_bipartitions().len(), 1);
        }
    }

    #[test]
    fn balanced_weights_for_every_bipartition_up_to_eight_labels() {
        for size in 2..=8 {
            let x = LabelSet::full(size);
            for mask in 1..(1u32 << size) - 1 {
                let a = LabelSet(mask);
                let w = balanced_weights(x, a).unwrap();
                assert!(w.balances_uniquely(a), "X={x} A={a} w={:?}", w.values());
                assert_eq!(w.total(a), w.total(a.complement(size)));
            }
        }
    }

    #[test]
    fn randomized_search_finds_verified_weights() {
        let x = LabelSet::full(5);
        let a = LabelSet::from_labels([2, 4], 5).unwrap();
        let w = search_balanced_weights(x, a, 2000, 7).unwrap();
        assert!(w.balances_uniquely(a));
        let again = search_balanced_weights(x, a, 2000, 7).unwrap();
        assert_eq!(w, again);
        assert!(matches!(
            search_balanced_weights(x, a, 0, 7),
            Err(Error::SearchBudgetExceeded { attempts: 0 })
        ));
    }

    #[test]
    fn balanced_weights_rejects_improper_subsets() {
        let x = LabelSet::full(3);
        assert!(balanced_weights(x, LabelSet::EMPTY).is_err());
        assert!(balanced_weights(x, x).is_err());
        assert!(balanced_weights(LabelSet::singleton(1), LabelSet::singleton(1)).is_err());
    }

    #[test]
    fn relabeling_permutes_the_curve_set() {
        let n = 6;
        let curves = enum_fcurves(n).unwrap();
        let set: HashSet<FCurve> = curves.iter().copied().collect();
        let sigma = Permutation::new(vec![3, 1, 6, 2, 5, 4]).unwrap();
        let image: HashSet<FCurve> = curves.iter().map(|c| c.relabel(&sigma)).collect();
        assert_eq!(set, image);
        for c in &curves {
            assert_eq!(c.relabel(&sigma).relabel(&sigma.inverse()), *c);
        }
    }

    #[test]
    fn stirling_values() {
        assert_eq!(stirling2(8, 4), 1701);
        assert_eq!(stirling2(10, 4), 34105);
        assert_eq!(stirling2(11, 4), 145750);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn canonical_form_is_stable(n in 4usize..9, seed in any::<u64>()) {
                let curves = enum_fcurves(n).unwrap();
                let c = curves[(seed % curves.len() as u64) as usize];
                let reparsed = FCurve::parse(&c.encode(), n).unwrap();
                prop_assert_eq!(reparsed, c);
                prop_assert_eq!(FCurve::new(n, *c.blocks()).unwrap(), c);
            }

            #[test]
            fn knudsen_count(n in 4usize..=10) {
                let knu = curve_family(n, &CurveFamily::Knudsen).unwrap();
                prop_assert_eq!(knu.len(), (1usize << (n - 3)) - 1);
            }

            #[test]
            fn relabeling_is_a_bijection(n in 4usize..8, swaps in proptest::collection::vec((1usize..8, 1usize..8), 0..6)) {
                let mut images: Vec<usize> = (1..=n).collect();
                for (i, j) in swaps {
                    images.swap((i - 1) % n, (j - 1) % n);
                }
                let sigma = Permutation::new(images).unwrap();
                let curves = enum_fcurves(n).unwrap();
                let mut mapped: Vec<String> = curves.iter().map(|c| c.relabel(&sigma).encode()).collect();
                mapped.sort();
                let original: Vec<String> = curves.iter().map(FCurve::encode).collect();
                prop_assert_eq!(mapped, original);
            }
        }
    }
}
