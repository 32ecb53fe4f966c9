//! Set partitions and non-crossing partitions of `[n] = {1, …, n}`, the block
//! depth statistics `dp`, `td₁`, `td₂`, and the restricted families used for
//! the conditionally free and boolean limits.
//!
//! Enumeration of `NC(n)` is exposed as a visitor ([`for_each_nc`]) so that
//! Catalan-sized sets are streamed rather than collected. The order is fixed:
//! the block of the smallest unplaced element is chosen first (by increasing
//! second element, "closed here" before "continue"), then the gaps it leaves
//! are filled left to right.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Default largest `n` accepted by the enumerators.
pub const DEFAULT_MAX_N: usize = 14;
/// Largest `n` accepted even with an explicit override. `|NC(18)|` is
/// already 477 638 700.
pub const HARD_MAX_N: usize = 18;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("n = {n} exceeds the enumeration cap {cap}")]
    LimitExceeded { n: usize, cap: usize },
    #[error("n must be at least 1")]
    EmptyGroundSet,
    #[error("invalid partition: {0}")]
    Invalid(String),
    #[error("partition is crossing")]
    Crossing,
}

/// Upper bound on `n` for enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumLimit {
    max_n: usize,
}

impl Default for EnumLimit {
    fn default() -> Self {
        Self { max_n: DEFAULT_MAX_N }
    }
}

impl EnumLimit {
    /// A cap of `max_n`, clamped to [`HARD_MAX_N`].
    pub fn new(max_n: usize) -> Self {
        Self {
            max_n: max_n.min(HARD_MAX_N),
        }
    }

    /// The hard cap.
    pub fn forced() -> Self {
        Self { max_n: HARD_MAX_N }
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    pub fn check(&self, n: usize) -> Result<(), PartitionError> {
        if n > self.max_n {
            Err(PartitionError::LimitExceeded { n, cap: self.max_n })
        } else {
            Ok(())
        }
    }
}

/// A partition of `[n]` into blocks. Blocks are strictly increasing and
/// sorted by their minimum.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    /// Validates and normalizes `blocks` (each block is sorted, blocks are
    /// ordered by minimum). `n` is the largest element.
    pub fn new(blocks: Vec<Vec<usize>>) -> Result<Self, PartitionError> {
        let mut blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        if blocks.iter().any(|b| b.is_empty()) {
            return Err(PartitionError::Invalid("empty block".into()));
        }
        blocks.sort_by_key(|b| b[0]);
        let n: usize = blocks.iter().map(Vec::len).sum();
        if n == 0 {
            return Err(PartitionError::EmptyGroundSet);
        }
        let mut seen = vec![false; n + 1];
        for &x in blocks.iter().flatten() {
            if x == 0 || x > n {
                return Err(PartitionError::Invalid(format!("element {x} outside [1, {n}]")));
            }
            if std::mem::replace(&mut seen[x], true) {
                return Err(PartitionError::Invalid(format!("element {x} repeated")));
            }
        }
        Ok(Self { n, blocks })
    }

    /// Builds a partition from a block label per element (`labels[i]` is the
    /// label of `i + 1`). Labels are arbitrary.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut order: Vec<usize> = Vec::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (i, &l) in labels.iter().enumerate() {
            match order.iter().position(|&o| o == l) {
                Some(k) => blocks[k].push(i + 1),
                None => {
                    order.push(l);
                    blocks.push(vec![i + 1]);
                }
            }
        }
        Self {
            n: labels.len(),
            blocks,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }
}

/// `true` iff there are no `b₁ < c₁ < b₂ < c₂` with the `b`s and `c`s in two
/// different blocks.
pub fn is_noncrossing(p: &SetPartition) -> bool {
    let mut label = vec![0usize; p.n + 1];
    for (k, b) in p.blocks.iter().enumerate() {
        for &x in b {
            label[x] = k;
        }
    }
    // Any block meeting the open interval between two consecutive elements
    // of another block must lie entirely inside that interval.
    for b in &p.blocks {
        for w in b.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            for &l in &label[lo + 1..hi] {
                let other = &p.blocks[l];
                if other[0] < lo || *other.last().unwrap() > hi {
                    return false;
                }
            }
        }
    }
    true
}

/// A validated non-crossing partition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NCPartition(SetPartition);

impl NCPartition {
    pub fn new(p: SetPartition) -> Result<Self, PartitionError> {
        if is_noncrossing(&p) {
            Ok(Self(p))
        } else {
            Err(PartitionError::Crossing)
        }
    }

    pub fn from_blocks(blocks: Vec<Vec<usize>>) -> Result<Self, PartitionError> {
        Self::new(SetPartition::new(blocks)?)
    }

    pub fn n(&self) -> usize {
        self.0.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.0.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.0.blocks.len()
    }

    pub fn as_set_partition(&self) -> &SetPartition {
        &self.0
    }

    /// Number of blocks covering element `a`: blocks `C ∌ a` with
    /// `f_C < a < ℓ_C`.
    pub fn element_depth(&self, a: usize) -> usize {
        self.blocks()
            .iter()
            .filter(|c| !c.contains(&a) && c[0] < a && a < *c.last().unwrap())
            .count()
    }
}

impl fmt::Display for NCPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, b) in self.blocks().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, x) in b.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl Serialize for NCPartition {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        self.blocks().serialize(ser)
    }
}

impl<'de> Deserialize<'de> for NCPartition {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let blocks = Vec::<Vec<usize>>::deserialize(de)?;
        NCPartition::from_blocks(blocks).map_err(serde::de::Error::custom)
    }
}

/// Block depths and the two total-depth statistics of a non-crossing
/// partition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionStats {
    /// `dp(B)` per block, in block order.
    pub block_depths: Vec<usize>,
    /// `Σ_B dp(B)`.
    pub td1: usize,
    /// `Σ_{|B| ≥ 3} (|B| − 2) dp(B)`.
    pub td2: usize,
    /// `dp(B) ≥ 1`.
    pub inner_flags: Vec<bool>,
}

/// Depth of each block by interval containment of `(f_B, ℓ_B)`.
pub fn stats(p: &NCPartition) -> PartitionStats {
    let spans: Vec<(usize, usize)> = p.blocks().iter().map(|b| (b[0], *b.last().unwrap())).collect();
    let block_depths: Vec<usize> = spans
        .iter()
        .map(|&(f, l)| spans.iter().filter(|&&(fc, lc)| fc < f && l < lc).count())
        .collect();
    let td1 = block_depths.iter().sum();
    let td2 = p
        .blocks()
        .iter()
        .zip(&block_depths)
        .filter(|(b, _)| b.len() >= 3)
        .map(|(b, d)| (b.len() - 2) * d)
        .sum();
    let inner_flags = block_depths.iter().map(|&d| d >= 1).collect();
    PartitionStats {
        block_depths,
        td1,
        td2,
        inner_flags,
    }
}

/// Restricted families of non-crossing partitions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// All of `NC(n)`.
    Nc,
    /// No inner block.
    Interval,
    /// Only singletons may be inner.
    AlmostInterval,
    /// Only blocks of size 1 or 2 may be inner.
    Nc12Inner,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Nc, Family::Interval, Family::AlmostInterval, Family::Nc12Inner];

    /// Whether `p` (with statistics `st`) belongs to the family.
    pub fn admits(self, p: &NCPartition, st: &PartitionStats) -> bool {
        let max_inner_size = match self {
            Family::Nc => return true,
            Family::Interval => 0,
            Family::AlmostInterval => 1,
            Family::Nc12Inner => 2,
        };
        p.blocks()
            .iter()
            .zip(&st.inner_flags)
            .all(|(b, &inner)| !inner || b.len() <= max_inner_size)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Nc => "nc",
            Family::Interval => "interval",
            Family::AlmostInterval => "almost-interval",
            Family::Nc12Inner => "nc12-inner",
        })
    }
}

struct NcWalker<'a, F: FnMut(&NCPartition)> {
    labels: Vec<usize>,
    pending: Vec<(usize, usize)>,
    next_label: usize,
    visit: &'a mut F,
}

impl<F: FnMut(&NCPartition)> NcWalker<'_, F> {
    // Positions are 0-based here; intervals are inclusive.
    fn fill(&mut self) {
        let Some((a, b)) = self.pending.pop() else {
            let p = SetPartition::from_labels(&self.labels);
            (self.visit)(&NCPartition(p));
            return;
        };
        let label = self.next_label;
        self.next_label += 1;
        self.labels[a] = label;
        let mark = self.pending.len();
        self.extend_block(a, b, label, mark);
        self.next_label -= 1;
        self.pending.push((a, b));
    }

    /// The block currently ends at `last`; either close it or add a later
    /// element, leaving the skipped stretch as a gap to fill.
    fn extend_block(&mut self, last: usize, b: usize, label: usize, mark: usize) {
        // Close: the tail (last+1 ..= b) is a gap. The stack is reordered so
        // that the leftmost gap is popped first.
        let saved: Vec<(usize, usize)> = self.pending.drain(mark..).collect();
        if last < b {
            self.pending.push((last + 1, b));
        }
        self.pending.extend(saved.iter().rev().copied());
        self.fill();
        self.pending.truncate(mark);
        self.pending.extend(saved.iter().copied());

        for next in last + 1..=b {
            self.labels[next] = label;
            let inserted = if next > last + 1 {
                self.pending.push((last + 1, next - 1));
                true
            } else {
                false
            };
            self.extend_block(next, b, label, mark);
            if inserted {
                self.pending.pop();
            }
        }
    }
}

/// Calls `visit` once for every element of `NC(n)`, in a fixed order.
pub fn for_each_nc<F: FnMut(&NCPartition)>(n: usize, limit: EnumLimit, mut visit: F) -> Result<(), PartitionError> {
    if n == 0 {
        return Err(PartitionError::EmptyGroundSet);
    }
    limit.check(n)?;
    let mut walker = NcWalker {
        labels: vec![0; n],
        pending: vec![(0, n - 1)],
        next_label: 0,
        visit: &mut visit,
    };
    walker.fill();
    Ok(())
}

/// Collects `NC(n)`. Prefer [`for_each_nc`] for large `n`.
pub fn enumerate_nc(n: usize, limit: EnumLimit) -> Result<Vec<NCPartition>, PartitionError> {
    let mut out = Vec::new();
    for_each_nc(n, limit, |p| out.push(p.clone()))?;
    Ok(out)
}

/// Visits the members of `family` in `NC(n)` together with their statistics.
pub fn for_each_in_family<F: FnMut(&NCPartition, &PartitionStats)>(
    n: usize,
    family: Family,
    limit: EnumLimit,
    mut visit: F,
) -> Result<(), PartitionError> {
    for_each_nc(n, limit, |p| {
        let st = stats(p);
        if family.admits(p, &st) {
            visit(p, &st);
        }
    })
}

pub fn enumerate_family(n: usize, family: Family, limit: EnumLimit) -> Result<Vec<NCPartition>, PartitionError> {
    let mut out = Vec::new();
    for_each_in_family(n, family, limit, |p, _| out.push(p.clone()))?;
    Ok(out)
}

/// Entry `k − 1` is the number of members of `family` with exactly `k` blocks.
pub fn count_by_blocks(n: usize, family: Family, limit: EnumLimit) -> Result<Vec<u64>, PartitionError> {
    let mut counts = vec![0u64; n];
    for_each_in_family(n, family, limit, |p, _| counts[p.num_blocks() - 1] += 1)?;
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nc(blocks: &[&[usize]]) -> NCPartition {
        NCPartition::from_blocks(blocks.iter().map(|b| b.to_vec()).collect()).unwrap()
    }

    /// Restricted growth strings: every set partition of `[n]`.
    fn all_set_partitions(n: usize) -> Vec<SetPartition> {
        fn rec(i: usize, n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<SetPartition>) {
            if i == n {
                out.push(SetPartition::from_labels(cur));
                return;
            }
            for l in 0..=max + 1 {
                cur.push(l);
                rec(i + 1, n, max.max(l), cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        let mut cur = vec![0];
        rec(1, n, 0, &mut cur, &mut out);
        out
    }

    #[test]
    fn noncrossing_examples() {
        let a = SetPartition::new(vec![vec![1, 2, 6], vec![3, 5], vec![4]]).unwrap();
        assert!(is_noncrossing(&a));
        assert!(!is_noncrossing(
            &SetPartition::new(vec![vec![1, 3], vec![2, 4]]).unwrap()
        ));
        assert!(is_noncrossing(&SetPartition::new(vec![vec![1]]).unwrap()));
        assert!(!is_noncrossing(
            &SetPartition::new(vec![vec![1, 4], vec![2, 6], vec![3, 5]]).unwrap()
        ));
    }

    #[test]
    fn set_partition_validation() {
        assert!(SetPartition::new(vec![vec![1, 2], vec![2]]).is_err());
        assert!(SetPartition::new(vec![vec![1, 4]]).is_err());
        assert!(SetPartition::new(vec![vec![]]).is_err());
        assert!(SetPartition::new(vec![]).is_err());
        let p = SetPartition::new(vec![vec![3, 2], vec![1]]).unwrap();
        assert_eq!(p.blocks(), &[vec![1], vec![2, 3]]);
        assert_eq!(
            NCPartition::from_blocks(vec![vec![1, 3], vec![2, 4]]),
            Err(PartitionError::Crossing)
        );
    }

    #[test]
    fn small_enumerations() {
        let one = enumerate_nc(1, EnumLimit::default()).unwrap();
        assert_eq!(one, vec![nc(&[&[1]])]);
        let brute = |n| all_set_partitions(n).iter().filter(|p| is_noncrossing(p)).count();
        assert_eq!(brute(3), 5);
        assert_eq!(enumerate_nc(3, EnumLimit::default()).unwrap().len(), brute(3));
        assert_eq!(brute(4), 14);
        assert_eq!(enumerate_nc(4, EnumLimit::default()).unwrap().len(), 14);
    }

    #[test]
    fn enumeration_matches_brute_force_as_sets() {
        for n in 1..=9 {
            let mut fast = enumerate_nc(n, EnumLimit::default()).unwrap();
            let mut brute: Vec<NCPartition> = all_set_partitions(n)
                .into_iter()
                .filter(is_noncrossing)
                .map(NCPartition)
                .collect();
            fast.sort();
            brute.sort();
            let before = fast.len();
            fast.dedup();
            assert_eq!(before, fast.len(), "duplicates at n={n}");
            assert_eq!(fast, brute, "n={n}");
        }
    }

    #[test]
    fn enumeration_order_is_stable() {
        let ps = enumerate_nc(3, EnumLimit::default()).unwrap();
        let shown: Vec<String> = ps.iter().map(ToString::to_string).collect();
        assert_eq!(
            shown,
            [
                "[[1],[2],[3]]",
                "[[1],[2,3]]",
                "[[1,2],[3]]",
                "[[1,2,3]]",
                "[[1,3],[2]]"
            ]
        );
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(
            enumerate_nc(15, EnumLimit::default()),
            Err(PartitionError::LimitExceeded {
                n: 15,
                cap: DEFAULT_MAX_N
            })
        );
        assert_eq!(EnumLimit::new(40).max_n(), HARD_MAX_N);
        assert_eq!(
            enumerate_nc(0, EnumLimit::default()),
            Err(PartitionError::EmptyGroundSet)
        );
    }

    #[test]
    fn stats_examples() {
        let a = stats(&nc(&[&[1, 2, 6], &[3, 5], &[4]]));
        assert_eq!((a.block_depths.clone(), a.td1, a.td2), (vec![0, 1, 2], 3, 0));
        assert_eq!(a.inner_flags, vec![false, true, true]);
        let b = stats(&nc(&[&[1, 7], &[2, 5, 6], &[3, 4]]));
        assert_eq!((b.block_depths, b.td1, b.td2), (vec![0, 1, 2], 3, 1));
        let c = stats(&nc(&[&[1]]));
        assert_eq!((c.block_depths, c.td1, c.td2), (vec![0], 0, 0));
    }

    #[test]
    fn depth_is_constant_within_blocks() {
        for n in 1..=10 {
            for_each_nc(n, EnumLimit::default(), |p| {
                let st = stats(p);
                for (b, &d) in p.blocks().iter().zip(&st.block_depths) {
                    for &x in b {
                        assert_eq!(p.element_depth(x), d, "{p} element {x}");
                    }
                }
            })
            .unwrap();
        }
    }

    #[test]
    fn family_examples() {
        let interval = enumerate_family(3, Family::Interval, EnumLimit::default()).unwrap();
        assert_eq!(interval.len(), 4);
        assert!(!interval.contains(&nc(&[&[1, 3], &[2]])));
        for f in Family::ALL {
            assert_eq!(enumerate_family(2, f, EnumLimit::default()).unwrap().len(), 2);
            assert_eq!(count_by_blocks(1, f, EnumLimit::default()).unwrap(), vec![1]);
        }
        assert_eq!(
            enumerate_family(4, Family::Nc12Inner, EnumLimit::default())
                .unwrap()
                .len(),
            14
        );
    }

    #[test]
    fn families_are_nested() {
        let lim = EnumLimit::default();
        for n in 1..=10 {
            for_each_nc(n, lim, |p| {
                let st = stats(p);
                let f: Vec<bool> = Family::ALL.iter().map(|f| f.admits(p, &st)).collect();
                let (nc_, iv, ai, n12) = (f[0], f[1], f[2], f[3]);
                assert!(nc_);
                assert!(!iv || ai);
                assert!(!ai || n12);
            })
            .unwrap();
        }
    }

    #[test]
    fn counts_by_blocks() {
        let lim = EnumLimit::default();
        assert_eq!(count_by_blocks(4, Family::Nc12Inner, lim).unwrap(), vec![1, 6, 6, 1]);
        assert_eq!(
            count_by_blocks(7, Family::Nc12Inner, lim).unwrap(),
            vec![1, 15, 77, 154, 105, 21, 1]
        );
        // Narayana numbers for the full lattice.
        assert_eq!(count_by_blocks(5, Family::Nc, lim).unwrap(), vec![1, 10, 20, 10, 1]);
    }

    #[test]
    fn serde_shape() {
        let p = nc(&[&[1, 2, 6], &[3, 5], &[4]]);
        let js = serde_json::to_string(&p).unwrap();
        assert_eq!(js, "[[1,2,6],[3,5],[4]]");
        assert_eq!(serde_json::from_str::<NCPartition>(&js).unwrap(), p);
        assert!(serde_json::from_str::<NCPartition>("[[1,3],[2,4]]").is_err());
    }
}
