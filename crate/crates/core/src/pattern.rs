//! Fixed-width item sets (patterns) and growable object sets (extents).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{BitAnd, BitOr, Sub};

const WORDS: usize = 4;

/// Largest item universe a [`Pattern`] can address.
pub const MAX_ITEMS: usize = WORDS * 64;

/// A subset of the item universe `0..MAX_ITEMS`.
///
/// Patterns order lexicographically by their ascending item sequence, so
/// `{0} < {0,1} < {0,1,2} < {0,2} < {1}`. This is the order used for
/// minimal elements, item scans and sorted output.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Pattern {
    words: [u64; WORDS],
}

impl Pattern {
    pub const fn empty() -> Self {
        Pattern { words: [0; WORDS] }
    }

    /// The pattern `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_ITEMS, "universe of {n} items exceeds {MAX_ITEMS}");
        let mut p = Pattern::empty();
        for (w, word) in p.words.iter_mut().enumerate() {
            let lo = w * 64;
            if n >= lo + 64 {
                *word = u64::MAX;
            } else if n > lo {
                *word = (1u64 << (n - lo)) - 1;
            }
        }
        p
    }

    pub fn singleton(item: usize) -> Self {
        let mut p = Pattern::empty();
        p.insert(item);
        p
    }

    pub fn from_items<I: IntoIterator<Item = usize>>(items: I) -> Self {
        let mut p = Pattern::empty();
        for i in items {
            p.insert(i);
        }
        p
    }

    /// Builds a pattern from a bit mask over the first 64 items.
    pub const fn from_mask(mask: u64) -> Self {
        Pattern {
            words: [mask, 0, 0, 0],
        }
    }

    /// Low 64 bits; only meaningful for universes of at most 64 items.
    pub fn mask(&self) -> u64 {
        self.words[0]
    }

    pub fn insert(&mut self, item: usize) {
        assert!(item < MAX_ITEMS, "item {item} out of range");
        self.words[item / 64] |= 1u64 << (item % 64);
    }

    pub fn remove(&mut self, item: usize) {
        if item < MAX_ITEMS {
            self.words[item / 64] &= !(1u64 << (item % 64));
        }
    }

    pub fn with(mut self, item: usize) -> Self {
        self.insert(item);
        self
    }

    pub fn contains(&self, item: usize) -> bool {
        item < MAX_ITEMS && self.words[item / 64] & (1u64 << (item % 64)) != 0
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_subset(&self, other: &Pattern) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_superset(&self, other: &Pattern) -> bool {
        other.is_subset(self)
    }

    pub fn intersects(&self, other: &Pattern) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn union(&self, other: &Pattern) -> Pattern {
        let mut words = self.words;
        for (w, o) in words.iter_mut().zip(&other.words) {
            *w |= o;
        }
        Pattern { words }
    }

    pub fn intersection(&self, other: &Pattern) -> Pattern {
        let mut words = self.words;
        for (w, o) in words.iter_mut().zip(&other.words) {
            *w &= o;
        }
        Pattern { words }
    }

    pub fn difference(&self, other: &Pattern) -> Pattern {
        let mut words = self.words;
        for (w, o) in words.iter_mut().zip(&other.words) {
            *w &= !o;
        }
        Pattern { words }
    }

    /// Smallest item, if any.
    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    /// Items in ascending order.
    pub fn iter(&self) -> Items {
        Items {
            words: self.words,
            word: 0,
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// True when some item strictly greater than `item` is present.
    fn has_item_above(&self, item: usize) -> bool {
        let w = item / 64;
        let bit = item % 64;
        let above_in_word = if bit == 63 { 0 } else { !0u64 << (bit + 1) };
        self.words[w] & above_in_word != 0 || self.words[w + 1..].iter().any(|&x| x != 0)
    }
}

impl Ord for Pattern {
    fn cmp(&self, other: &Self) -> Ordering {
        // First differing item decides: whoever holds it is smaller unless
        // the other side has run out of items (prefix order).
        let Some(item) = self
            .difference(other)
            .union(&other.difference(self))
            .first()
        else {
            return Ordering::Equal;
        };
        if self.contains(item) {
            if other.has_item_above(item) {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        } else if self.has_item_above(item) {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

impl PartialOrd for Pattern {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl BitOr for Pattern {
    type Output = Pattern;
    fn bitor(self, rhs: Pattern) -> Pattern {
        self.union(&rhs)
    }
}

impl BitAnd for Pattern {
    type Output = Pattern;
    fn bitand(self, rhs: Pattern) -> Pattern {
        self.intersection(&rhs)
    }
}

impl Sub for Pattern {
    type Output = Pattern;
    fn sub(self, rhs: Pattern) -> Pattern {
        self.difference(&rhs)
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for Pattern {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Pattern::from_items(iter)
    }
}

pub struct Items {
    words: [u64; WORDS],
    word: usize,
}

impl Iterator for Items {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.word < WORDS {
            let w = self.words[self.word];
            if w != 0 {
                self.words[self.word] = w & (w - 1);
                return Some(self.word * 64 + w.trailing_zeros() as usize);
            }
            self.word += 1;
        }
        None
    }
}

/// A subset of the object set `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Extent {
    words: Vec<u64>,
    n: usize,
}

impl Extent {
    pub fn empty(n: usize) -> Self {
        Extent {
            words: vec![0; n.div_ceil(64)],
            n,
        }
    }

    pub fn full(n: usize) -> Self {
        let mut e = Extent::empty(n);
        for i in 0..n {
            e.insert(i);
        }
        e
    }

    pub fn from_objects<I: IntoIterator<Item = usize>>(n: usize, objects: I) -> Self {
        let mut e = Extent::empty(n);
        for o in objects {
            e.insert(o);
        }
        e
    }

    /// Size of the object universe this extent lives in.
    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, o: usize) {
        assert!(o < self.n, "object {o} out of range {}", self.n);
        self.words[o / 64] |= 1u64 << (o % 64);
    }

    pub fn contains(&self, o: usize) -> bool {
        o < self.n && self.words[o / 64] & (1u64 << (o % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &Extent) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn intersect_with(&mut self, other: &Extent) {
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w &= o;
        }
    }

    pub fn union_with(&mut self, other: &Extent) {
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w |= o;
        }
    }

    pub fn intersection(&self, other: &Extent) -> Extent {
        let mut e = self.clone();
        e.intersect_with(other);
        e
    }

    pub fn union(&self, other: &Extent) -> Extent {
        let mut e = self.clone();
        e.union_with(other);
        e
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl Ord for Extent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for Extent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Extent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
