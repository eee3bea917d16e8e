//! Subsets of the generator index set `{0, ..., s-1}` as 64-bit masks.

use alloc::vec::Vec;
use core::fmt;

/// Largest number of generators a [`Subset`] can index.
pub const MAX_SUBSET_SIZE: usize = 63;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Subset(pub u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn singleton(i: usize) -> Self {
        Subset(1 << i)
    }

    pub fn full(s: usize) -> Self {
        if s == 0 {
            Subset(0)
        } else {
            Subset(u64::MAX >> (64 - s))
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        Subset(indices.into_iter().fold(0, |acc, i| acc | (1 << i)))
    }

    pub fn bits(&self) -> u64 {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn contains(&self, i: usize) -> bool {
        i < 64 && self.0 & (1 << i) != 0
    }

    pub fn insert(&self, i: usize) -> Self {
        Subset(self.0 | (1 << i))
    }

    pub fn remove(&self, i: usize) -> Self {
        Subset(self.0 & !(1 << i))
    }

    pub fn union(&self, other: Subset) -> Self {
        Subset(self.0 | other.0)
    }

    pub fn intersection(&self, other: Subset) -> Self {
        Subset(self.0 & other.0)
    }

    pub fn is_disjoint(&self, other: Subset) -> bool {
        self.0 & other.0 == 0
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        core::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    /// Number of members of `self` below `i`. Callers check membership.
    pub fn count_below(&self, i: usize) -> usize {
        (self.0 & ((1u64 << i) - 1)).count_ones() as usize
    }

    /// Image under a map of indices.
    pub fn map(&self, f: impl Fn(usize) -> usize) -> Self {
        Subset::from_indices(self.iter().map(f))
    }

    /// All subsets of `{0..s}` with exactly `k` members, in colexicographic
    /// order of their masks.
    pub fn of_size(s: usize, k: usize) -> Vec<Subset> {
        (0..(1u64 << s))
            .filter(|m| m.count_ones() as usize == k)
            .map(Subset)
            .collect()
    }
}

impl fmt::Display for Subset {
    /// One-based, like `{1,3}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        write!(f, "}}")
    }
}
