//! Subsets of a small finite universe as 64-bit masks.
//!
//! The same type represents subsets of a metric space's points, subsets of a
//! directed index set, and subsets of a box-product space. A subset remembers
//! the size of its universe so that mixed-universe operations are caught
//! immediately instead of silently producing nonsense.

use std::fmt;

/// Hard cap on universe size imposed by the mask representation.
pub const MAX_UNIVERSE: usize = 64;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subset {
    universe: usize,
    bits: u64,
}

impl Subset {
    pub fn empty(universe: usize) -> Self {
        assert!(universe <= MAX_UNIVERSE, "universe too large: {universe}");
        Subset { universe, bits: 0 }
    }

    pub fn full(universe: usize) -> Self {
        assert!(universe <= MAX_UNIVERSE, "universe too large: {universe}");
        let bits = if universe == 64 {
            u64::MAX
        } else {
            (1u64 << universe) - 1
        };
        Subset { universe, bits }
    }

    pub fn singleton(universe: usize, index: usize) -> Self {
        Subset::empty(universe).with(index)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(universe: usize, indices: I) -> Self {
        let mut s = Subset::empty(universe);
        for i in indices {
            s = s.with(i);
        }
        s
    }

    /// Internal constructor from a raw mask; bits above the universe must be 0.
    pub(crate) fn from_bits(universe: usize, bits: u64) -> Self {
        debug_assert_eq!(bits & !Subset::full(universe).bits, 0);
        Subset { universe, bits }
    }

    pub(crate) fn bits(&self) -> u64 {
        self.bits
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn contains(&self, index: usize) -> bool {
        index < self.universe && self.bits & (1 << index) != 0
    }

    pub fn with(mut self, index: usize) -> Self {
        assert!(index < self.universe, "index {index} out of universe");
        self.bits |= 1 << index;
        self
    }

    pub fn without(mut self, index: usize) -> Self {
        assert!(index < self.universe, "index {index} out of universe");
        self.bits &= !(1 << index);
        self
    }

    pub fn union(&self, other: &Subset) -> Subset {
        assert_eq!(self.universe, other.universe, "universe mismatch");
        Subset { universe: self.universe, bits: self.bits | other.bits }
    }

    pub fn intersection(&self, other: &Subset) -> Subset {
        assert_eq!(self.universe, other.universe, "universe mismatch");
        Subset { universe: self.universe, bits: self.bits & other.bits }
    }

    pub fn difference(&self, other: &Subset) -> Subset {
        assert_eq!(self.universe, other.universe, "universe mismatch");
        Subset { universe: self.universe, bits: self.bits & !other.bits }
    }

    pub fn complement(&self) -> Subset {
        Subset {
            universe: self.universe,
            bits: !self.bits & Subset::full(self.universe).bits,
        }
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        assert_eq!(self.universe, other.universe, "universe mismatch");
        self.bits & !other.bits == 0
    }

    /// Ascending member indices.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let universe = self.universe;
        (0..universe).filter(move |i| self.contains(*i))
    }

    pub fn indices(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// All nonempty subsets of `self`, by submask enumeration.
    pub fn nonempty_subsets(&self) -> Vec<Subset> {
        let mut out = Vec::with_capacity((1usize << self.len()).saturating_sub(1));
        let m = self.bits;
        let mut s = m;
        while s != 0 {
            out.push(Subset { universe: self.universe, bits: s });
            s = (s - 1) & m;
        }
        out.reverse();
        out
    }

    /// Every subset of the universe, the empty set first.
    pub fn all_of_universe(universe: usize) -> impl Iterator<Item = Subset> {
        assert!(universe <= 32, "full powerset enumeration capped at 32 bits");
        (0u64..(1 << universe)).map(move |bits| Subset { universe, bits })
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// Order subsets by cardinality first, then by mask value. Used wherever a
/// family is scanned for a deterministic "first" witness.
pub fn size_lex_order(a: &Subset, b: &Subset) -> std::cmp::Ordering {
    (a.len(), a.bits).cmp(&(b.len(), b.bits))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let a = Subset::from_indices(4, [0, 2]);
        let b = Subset::from_indices(4, [2, 3]);
        assert_eq!(a.union(&b).indices(), vec![0, 2, 3]);
        assert_eq!(a.intersection(&b).indices(), vec![2]);
        assert_eq!(a.difference(&b).indices(), vec![0]);
        assert_eq!(a.complement().indices(), vec![1, 3]);
        assert!(a.intersection(&b).is_subset_of(&b));
        assert_eq!(a.len(), 2);
        assert!(!a.is_empty());
        assert!(Subset::empty(4).is_empty());
    }

    #[test]
    fn full_universe_of_64() {
        let f = Subset::full(64);
        assert_eq!(f.len(), 64);
        assert!(f.contains(63));
        assert_eq!(f.complement().len(), 0);
    }

    #[test]
    fn submask_enumeration() {
        let m = Subset::from_indices(5, [1, 3, 4]);
        let subs = m.nonempty_subsets();
        assert_eq!(subs.len(), 7);
        assert!(subs.iter().all(|s| !s.is_empty() && s.is_subset_of(&m)));
        let mut dedup = subs.clone();
        dedup.dedup();
        assert_eq!(dedup.len(), 7);
    }

    #[test]
    #[should_panic(expected = "universe mismatch")]
    fn mixed_universes_panic() {
        let a = Subset::empty(3);
        let b = Subset::empty(4);
        let _ = a.union(&b);
    }
}
