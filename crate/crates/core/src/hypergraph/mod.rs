//! k-uniform hypergraphs on `[n]`, their text format, the random models and
//! degree statistics.

mod io;
mod sample;
mod stats;

pub use sample::{
    sample_bernoulli, sample_bernoulli_with, sample_conditioned, sample_conditioned_with,
    sample_independent, sample_independent_with, SamplerConfig, DEFAULT_ENUMERATION_CAP,
};
pub use stats::{check_event_r, degree_stats, DegreeStats, EventRParams, EventRReport, PAIR_DEGREE_CAP};

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::kset::{KSet, MAX_N};

/// A k-graph on `[n]`: an ordered edge list, possibly with repeats.
///
/// `dedup` records whether distinctness was enforced when the value was
/// built. Values are immutable once constructed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    k: usize,
    edges: Vec<KSet>,
    dedup: bool,
}

impl Hypergraph {
    fn check_shape(n: usize, k: usize) -> Result<()> {
        if n > MAX_N {
            return Err(Error::domain(format!("n = {n} exceeds {MAX_N}")));
        }
        if k == 0 || k > n {
            return Err(Error::domain(format!("need 1 <= k <= n, got n={n} k={k}")));
        }
        Ok(())
    }

    fn check_edge(n: usize, k: usize, e: &KSet) -> Result<()> {
        if e.len() != k {
            return Err(Error::argument(format!("edge {e:?} has {} vertices, expected {k}", e.len())));
        }
        if e.max().is_some_and(|v| v >= n) {
            return Err(Error::argument(format!("edge {e:?} leaves [{n}]")));
        }
        Ok(())
    }

    /// A multiset hypergraph; repeats are kept.
    pub fn new(n: usize, k: usize, edges: Vec<KSet>) -> Result<Self> {
        Self::check_shape(n, k)?;
        for e in &edges {
            Self::check_edge(n, k, e)?;
        }
        Ok(Self { n, k, edges, dedup: false })
    }

    /// A simple hypergraph; a repeated edge is an error.
    pub fn new_distinct(n: usize, k: usize, edges: Vec<KSet>) -> Result<Self> {
        let mut h = Self::new(n, k, edges)?;
        let mut seen = HashSet::with_capacity(h.edges.len());
        for e in &h.edges {
            if !seen.insert(*e) {
                return Err(Error::argument(format!("edge {e:?} repeated")));
            }
        }
        h.dedup = true;
        Ok(h)
    }

    /// Convenience constructor from 1-based vertex lists. The result is
    /// flagged distinct when it happens to have no repeated edge.
    pub fn from_lists(n: usize, k: usize, lists: &[Vec<usize>]) -> Result<Self> {
        let edges = lists
            .iter()
            .map(|l| KSet::from_one_based(n, l))
            .collect::<Result<Vec<_>>>()?;
        let h = Self::new(n, k, edges)?;
        Ok(if h.has_repeats() { h } else { Self { dedup: true, ..h } })
    }

    pub(crate) fn from_parts_unchecked(n: usize, k: usize, edges: Vec<KSet>, dedup: bool) -> Self {
        Self { n, k, edges, dedup }
    }

    /// All k-subsets of `[n]`, in colex order.
    pub fn complete(n: usize, k: usize) -> Result<Self> {
        Self::check_shape(n, k)?;
        let table = crate::combin::ColexTable::new(n, k)?;
        Ok(Self {
            n,
            k,
            edges: table.iter().collect(),
            dedup: true,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edges(&self) -> &[KSet] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Whether distinctness was enforced at construction.
    pub fn dedup_flag(&self) -> bool {
        self.dedup
    }

    pub fn has_repeats(&self) -> bool {
        let mut seen = HashSet::with_capacity(self.edges.len());
        self.edges.iter().any(|e| !seen.insert(*e))
    }

    /// Drops repeated edges, keeping first occurrences in order.
    pub fn dedup(&self) -> Self {
        let mut seen = HashSet::with_capacity(self.edges.len());
        let edges = self.edges.iter().copied().filter(|e| seen.insert(*e)).collect();
        Self {
            n: self.n,
            k: self.k,
            edges,
            dedup: true,
        }
    }

    /// The sub-hypergraph on the given edge indices, in that order.
    pub fn subfamily(&self, indices: &[usize]) -> Self {
        Self {
            n: self.n,
            k: self.k,
            edges: indices.iter().map(|&i| self.edges[i]).collect(),
            dedup: self.dedup,
        }
    }

    /// `H` with one more edge appended.
    pub fn with_edge(&self, e: KSet) -> Result<Self> {
        Self::check_edge(self.n, self.k, &e)?;
        let dedup = self.dedup && !self.edges.contains(&e);
        let mut edges = self.edges.clone();
        edges.push(e);
        Ok(Self { edges, dedup, ..*self })
    }

    /// Indices of edges through vertex `x` (0-based).
    pub fn star(&self, x: usize) -> Vec<usize> {
        (0..self.edges.len()).filter(|&i| self.edges[i].contains(x)).collect()
    }
}
