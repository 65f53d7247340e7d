//! Fixed-universe bit sets over element indices.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

type Words = SmallVec<[u64; 2]>;

/// A subset of `{0, .., universe - 1}`.
///
/// Sets over different universes never compare equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PointSet {
    universe: usize,
    words: Words,
}

fn word_count(universe: usize) -> usize {
    universe.div_ceil(64)
}

impl PointSet {
    pub fn empty(universe: usize) -> Self {
        PointSet {
            universe,
            words: SmallVec::from_elem(0, word_count(universe)),
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for (w, word) in s.words.iter_mut().enumerate() {
            let lo = w * 64;
            let hi = (lo + 64).min(universe);
            *word = if hi - lo == 64 {
                u64::MAX
            } else {
                (1u64 << (hi - lo)) - 1
            };
        }
        s
    }

    pub fn singleton(universe: usize, x: usize) -> Self {
        let mut s = Self::empty(universe);
        s.insert(x);
        s
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(universe: usize, it: I) -> Self {
        let mut s = Self::empty(universe);
        for x in it {
            s.insert(x);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        debug_assert!(x < self.universe);
        self.words[x / 64] >> (x % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, x: usize) -> bool {
        assert!(x < self.universe, "element {x} outside universe {}", self.universe);
        let had = self.contains(x);
        self.words[x / 64] |= 1 << (x % 64);
        !had
    }

    #[inline]
    pub fn remove(&mut self, x: usize) -> bool {
        let had = self.contains(x);
        self.words[x / 64] &= !(1 << (x % 64));
        had
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.universe
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let t = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(w * 64 + t)
                }
            })
        })
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    fn check_universe(&self, other: &Self) {
        assert_eq!(
            self.universe, other.universe,
            "point sets over different universes"
        );
    }

    pub fn union(&self, other: &Self) -> Self {
        self.check_universe(other);
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a | b)
            .collect();
        PointSet {
            universe: self.universe,
            words,
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.check_universe(other);
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a & b)
            .collect();
        PointSet {
            universe: self.universe,
            words,
        }
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.check_universe(other);
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a & !b)
            .collect();
        PointSet {
            universe: self.universe,
            words,
        }
    }

    pub fn complement(&self) -> Self {
        PointSet::full(self.universe).difference(self)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.check_universe(other);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.check_universe(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn union_with(&mut self, other: &Self) {
        self.check_universe(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Canonical order: by cardinality, then lexicographically on the
    /// ascending member lists.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl PartialOrd for PointSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PointSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.universe
            .cmp(&other.universe)
            .then_with(|| self.canonical_cmp(other))
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
