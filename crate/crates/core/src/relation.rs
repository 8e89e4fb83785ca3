//! Symmetric boolean relations over the states of one system.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::lts::StateId;

/// A symmetric relation on `{0, .., n-1}`, stored as a full bit matrix.
///
/// Every insertion also inserts the mirrored pair, so `contains(x, y)` and
/// `contains(y, x)` always agree. Queries with ids `>= n` panic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PairRelation {
    n: usize,
    words: Vec<u64>,
}

impl PairRelation {
    pub fn empty(n: usize) -> Self {
        PairRelation { n, words: vec![0; (n * n).div_ceil(64)] }
    }

    pub fn total(n: usize) -> Self {
        let mut r = Self::empty(n);
        for x in 0..n {
            for y in 0..n {
                r.set_bit(x, y);
            }
        }
        r
    }

    pub fn diagonal(n: usize) -> Self {
        let mut r = Self::empty(n);
        for x in 0..n {
            r.set_bit(x, x);
        }
        r
    }

    /// Symmetric closure of the given pairs.
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (StateId, StateId)>) -> Self {
        let mut r = Self::empty(n);
        for (x, y) in pairs {
            r.insert(x, y);
        }
        r
    }

    /// The relation whose pairs are the members of the same class.
    pub fn from_classes(n: usize, classes: &[&[StateId]]) -> Self {
        let mut r = Self::empty(n);
        for class in classes {
            for &x in class.iter() {
                for &y in class.iter() {
                    r.insert(x, y);
                }
            }
        }
        r
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    fn bit(&self, x: usize, y: usize) -> bool {
        let i = x * self.n + y;
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    fn set_bit(&mut self, x: usize, y: usize) {
        let i = x * self.n + y;
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    fn clear_bit(&mut self, x: usize, y: usize) {
        let i = x * self.n + y;
        self.words[i / 64] &= !(1 << (i % 64));
    }

    #[inline]
    fn check(&self, x: StateId, y: StateId) {
        assert!(x.0 < self.n && y.0 < self.n, "pair ({x}, {y}) outside relation of size {}", self.n);
    }

    #[inline]
    pub fn contains(&self, x: StateId, y: StateId) -> bool {
        self.check(x, y);
        self.bit(x.0, y.0)
    }

    /// Inserts `(x, y)` and `(y, x)`; returns whether the pair was new.
    pub fn insert(&mut self, x: StateId, y: StateId) -> bool {
        self.check(x, y);
        let fresh = !self.bit(x.0, y.0);
        self.set_bit(x.0, y.0);
        self.set_bit(y.0, x.0);
        fresh
    }

    /// Removes `(x, y)` and `(y, x)`; returns whether the pair was present.
    pub fn remove(&mut self, x: StateId, y: StateId) -> bool {
        self.check(x, y);
        let present = self.bit(x.0, y.0);
        self.clear_bit(x.0, y.0);
        self.clear_bit(y.0, x.0);
        present
    }

    /// Pointwise complement, diagonal included.
    pub fn complement(&self) -> Self {
        let mut r = Self::empty(self.n);
        for x in 0..self.n {
            for y in 0..self.n {
                if !self.bit(x, y) {
                    r.set_bit(x, y);
                }
            }
        }
        r
    }

    pub fn is_subset(&self, other: &PairRelation) -> bool {
        self.n == other.n && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Unordered pairs `(x, y)` with `x <= y`.
    pub fn pairs(&self) -> impl Iterator<Item = (StateId, StateId)> + '_ {
        (0..self.n).flat_map(move |x| (x..self.n).filter(move |&y| self.bit(x, y)).map(move |y| (StateId(x), StateId(y))))
    }

    /// Number of unordered pairs, diagonal included.
    pub fn count(&self) -> usize {
        self.pairs().count()
    }

    /// Equivalence classes, assuming the relation is an equivalence.
    /// Each class is sorted and classes are ordered by their least member.
    pub fn classes(&self) -> Vec<Vec<StateId>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for x in 0..self.n {
            if seen[x] {
                continue;
            }
            let class: Vec<StateId> = (x..self.n).filter(|&y| y == x || self.bit(x, y)).map(StateId).collect();
            for s in &class {
                seen[s.0] = true;
            }
            out.push(class);
        }
        out
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.n).all(|x| self.bit(x, x))
    }

    pub fn is_irreflexive(&self) -> bool {
        (0..self.n).all(|x| !self.bit(x, x))
    }

    pub fn is_transitive(&self) -> bool {
        let n = self.n;
        (0..n).all(|x| (0..n).all(|y| !self.bit(x, y) || (0..n).all(|z| !self.bit(y, z) || self.bit(x, z))))
    }

    /// `Q(x,y) ⟹ Q(x,z) ∨ Q(z,y)` for all x, y, z.
    pub fn is_cotransitive(&self) -> bool {
        let n = self.n;
        (0..n).all(|x| (0..n).all(|y| !self.bit(x, y) || (0..n).all(|z| self.bit(x, z) || self.bit(z, y))))
    }
}

impl fmt::Debug for PairRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs().map(|(x, y)| (x.0, y.0))).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn complement_of_empty_is_total() {
        assert_eq!(PairRelation::empty(4).complement(), PairRelation::total(4));
    }

    #[test]
    fn classes_of_partition() {
        let s = StateId;
        let r = PairRelation::from_classes(5, &[&[s(0), s(3)], &[s(1)], &[s(2), s(4)]]);
        assert_eq!(r.classes(), vec![vec![s(0), s(3)], vec![s(1)], vec![s(2), s(4)]]);
        assert!(r.is_transitive() && r.is_reflexive());
        assert!(r.complement().is_cotransitive());
    }

    #[test]
    #[should_panic]
    fn out_of_range_query_panics() {
        PairRelation::empty(2).contains(StateId(0), StateId(2));
    }

    proptest! {
        #[test]
        fn insertion_is_symmetric_and_complement_involutive(
            n in 1usize..9,
            pairs in proptest::collection::vec((0usize..9, 0usize..9), 0..30),
        ) {
            let r = PairRelation::from_pairs(n, pairs.into_iter().filter(|&(a, b)| a < n && b < n).map(|(a, b)| (StateId(a), StateId(b))));
            for x in 0..n {
                for y in 0..n {
                    prop_assert_eq!(r.contains(StateId(x), StateId(y)), r.contains(StateId(y), StateId(x)));
                }
            }
            prop_assert_eq!(r.complement().complement(), r.clone());
            prop_assert!(r.is_subset(&PairRelation::total(n)));
        }
    }
}
