use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Largest ambient dimension supported by the bitmask encoding.
pub const MAX_DIM: usize = 16;

/// A strictly increasing index tuple `i_1 < … < i_k` in `1..=n`, stored as a
/// bitmask (bit `i - 1` set for index `i`).
///
/// Ordering is lexicographic on the index tuple, so iteration over a form's
/// terms is in the conventional `dx12.. < dx13..` order.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct MultiIndex(u32);

impl MultiIndex {
    pub const EMPTY: MultiIndex = MultiIndex(0);

    pub fn from_mask(mask: u32) -> Self {
        MultiIndex(mask)
    }

    /// Builds the index set from 1-based entries; they must be distinct and
    /// lie in `1..=n`, but need not be sorted. Returns the permutation sign
    /// needed to sort them.
    pub fn from_unsorted(idx: &[usize], n: usize) -> Result<(Self, i32)> {
        let mut mask = 0u32;
        let mut sign = 1;
        for (pos, &i) in idx.iter().enumerate() {
            if i == 0 || i > n || n > MAX_DIM || mask & (1 << (i - 1)) != 0 {
                return Err(Error::Index {
                    idx: idx.to_vec(),
                    n,
                });
            }
            // inversions contributed by earlier entries larger than i
            let larger = idx[..pos].iter().filter(|&&j| j > i).count();
            if larger % 2 == 1 {
                sign = -sign;
            }
            mask |= 1 << (i - 1);
        }
        Ok((MultiIndex(mask), sign))
    }

    /// Strictly increasing 1-based entries.
    pub fn from_sorted(idx: &[usize], n: usize) -> Result<Self> {
        if idx.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Index {
                idx: idx.to_vec(),
                n,
            });
        }
        Self::from_unsorted(idx, n).map(|(m, _)| m)
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i >= 1 && self.0 & (1 << (i - 1)) != 0
    }

    /// 1-based entries in increasing order.
    pub fn indices(self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                None
            } else {
                let b = m.trailing_zeros() as usize;
                m &= m - 1;
                Some(b + 1)
            }
        })
    }

    /// 0-based entries, convenient for matrix row selection.
    pub fn rows(self) -> impl Iterator<Item = usize> {
        self.iter().map(|i| i - 1)
    }

    pub fn complement(self, n: usize) -> Self {
        MultiIndex(!self.0 & full_mask(n))
    }

    pub fn intersects(self, other: Self) -> bool {
        self.0 & other.0 != 0
    }

    pub fn union(self, other: Self) -> Self {
        MultiIndex(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        MultiIndex(self.0 & other.0)
    }

    pub fn with(self, i: usize) -> Self {
        MultiIndex(self.0 | (1 << (i - 1)))
    }

    pub fn without(self, i: usize) -> Self {
        MultiIndex(self.0 & !(1 << (i - 1)))
    }

    /// Number of entries of `self` strictly less than `i`.
    pub fn count_below(self, i: usize) -> usize {
        (self.0 & ((1u32 << (i - 1)) - 1)).count_ones() as usize
    }
}

pub(crate) fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// Sign of the shuffle taking the concatenation `(a, b)` to sorted order,
/// or `0` when the sets overlap (the wedge vanishes).
pub fn shuffle_sign(a: MultiIndex, b: MultiIndex) -> i32 {
    if a.intersects(b) {
        return 0;
    }
    let mut inversions = 0u32;
    let mut rest = b.0;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        // entries of a above position j sit to the left of j in (a, b)
        inversions += (a.0 >> j).count_ones();
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// All index sets of size `k` in `1..=n`, in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<MultiIndex> {
    let mut out: Vec<MultiIndex> = (0u32..(1u32 << n))
        .filter(|m| m.count_ones() as usize == k)
        .map(MultiIndex)
        .collect();
    out.sort();
    out
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        // Lexicographic on sorted tuples of equal length equals reverse order
        // on bit-reversed masks; sets of different size order by size first.
        self.len()
            .cmp(&other.len())
            .then_with(|| other.0.reverse_bits().cmp(&self.0.reverse_bits()))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.indices())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in self.iter() {
            write!(f, "{i}")?;
        }
        Ok(())
    }
}
