//! Fixed-width vertex sets over `[n]`, `n ≤ 256`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Largest supported ground-set size.
pub const MAX_N: usize = 256;
const WORDS: usize = MAX_N / 64;

/// A subset of `{0, .., 255}` stored as a 256-bit bitset.
///
/// Vertices are 0-based internally; files and JSON use 1-based labels.
/// The `(n, k)` invariants live on [`crate::Hypergraph`], which validates
/// every edge it accepts.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct KSet {
    words: [u64; WORDS],
}

impl KSet {
    pub const fn empty() -> Self {
        Self { words: [0; WORDS] }
    }

    /// Builds a k-subset of `[n]` from 0-based vertices, rejecting repeats
    /// and out-of-range labels.
    pub fn from_vertices(n: usize, vertices: &[usize]) -> Result<Self> {
        if n > MAX_N {
            return Err(Error::argument(format!("n = {n} exceeds {MAX_N}")));
        }
        let mut s = Self::empty();
        for &v in vertices {
            if v >= n {
                return Err(Error::argument(format!("vertex {v} outside [0, {n})")));
            }
            if s.contains(v) {
                return Err(Error::argument(format!("vertex {v} repeated")));
            }
            s.insert(v);
        }
        Ok(s)
    }

    /// Same as [`KSet::from_vertices`] with 1-based labels.
    pub fn from_one_based(n: usize, vertices: &[usize]) -> Result<Self> {
        let zero: Vec<usize> = vertices
            .iter()
            .map(|&v| {
                v.checked_sub(1)
                    .ok_or_else(|| Error::argument("vertex label 0 in 1-based input"))
            })
            .collect::<Result<_>>()?;
        if let Some(&v) = vertices.iter().find(|&&v| v > n) {
            return Err(Error::argument(format!("vertex {v} outside [1, {n}]")));
        }
        Self::from_vertices(n, &zero)
    }

    pub fn singleton(v: usize) -> Self {
        let mut s = Self::empty();
        s.insert(v);
        s
    }

    /// `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        let mut s = Self::empty();
        for v in 0..n {
            s.insert(v);
        }
        s
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.words[v >> 6] |= 1u64 << (v & 63);
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.words[v >> 6] &= !(1u64 << (v & 63));
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < MAX_N && self.words[v >> 6] >> (v & 63) & 1 == 1
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn intersects(&self, other: &KSet) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .any(|(a, b)| a & b != 0)
    }

    #[inline]
    pub fn intersection(&self, other: &KSet) -> KSet {
        let mut out = *self;
        for (a, b) in out.words.iter_mut().zip(other.words.iter()) {
            *a &= b;
        }
        out
    }

    #[inline]
    pub fn union(&self, other: &KSet) -> KSet {
        let mut out = *self;
        for (a, b) in out.words.iter_mut().zip(other.words.iter()) {
            *a |= b;
        }
        out
    }

    #[inline]
    pub fn difference(&self, other: &KSet) -> KSet {
        let mut out = *self;
        for (a, b) in out.words.iter_mut().zip(other.words.iter()) {
            *a &= !b;
        }
        out
    }

    pub fn is_subset(&self, other: &KSet) -> bool {
        self.difference(other).is_empty()
    }

    /// Lowest vertex, if any.
    pub fn min(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn max(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + 63 - w.leading_zeros() as usize)
    }

    /// Vertices in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * 64 + b)
                }
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.iter().map(|v| v + 1).collect()
    }

    /// Colex order: compare the largest differing element.
    pub fn colex_cmp(&self, other: &KSet) -> Ordering {
        for i in (0..WORDS).rev() {
            let (a, b) = (self.words[i], other.words[i]);
            if a != b {
                let top = 63 - (a ^ b).leading_zeros();
                return if a >> top & 1 == 1 {
                    Ordering::Greater
                } else {
                    Ordering::Less
                };
            }
        }
        Ordering::Equal
    }
}

impl fmt::Debug for KSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
