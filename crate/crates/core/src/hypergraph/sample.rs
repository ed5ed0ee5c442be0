//! The random models: independent Bernoulli(p) inclusion of every k-set,
//! m i.i.d. uniform k-sets, and the edge-count-first form of the Bernoulli
//! model.

use rand::Rng;
use rand_distr::{Binomial, Distribution, Geometric};

use super::Hypergraph;
use crate::combin::{binomial_u64, ColexTable};
use crate::error::{Error, Result};
use crate::kset::KSet;
use crate::rng::trial_rng;

/// Largest `C(n, k)` the enumerating samplers accept by default.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplerConfig {
    pub enumeration_cap: u64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("p = {p} outside [0, 1]")));
    }
    Ok(())
}

fn colex_table(n: usize, k: usize, config: &SamplerConfig) -> Result<ColexTable> {
    Hypergraph::check_shape(n, k)?;
    let total = binomial_u64(n as u64, k as u64).unwrap_or(u64::MAX);
    if total > config.enumeration_cap {
        return Err(Error::Resource {
            what: "C(n,k) over the enumeration cap; use the independent sampler",
            limit: config.enumeration_cap,
            actual: total,
        });
    }
    ColexTable::new(n, k)
}

/// Each k-set of `[n]` is an edge independently with probability `p`.
/// Edges come out in colex order.
pub fn sample_bernoulli(n: usize, k: usize, p: f64, seed: u64) -> Result<Hypergraph> {
    sample_bernoulli_with(n, k, p, &mut trial_rng(seed, 0), &SamplerConfig::default())
}

pub fn sample_bernoulli_with<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    p: f64,
    rng: &mut R,
    config: &SamplerConfig,
) -> Result<Hypergraph> {
    check_p(p)?;
    let table = colex_table(n, k, config)?;
    let mut edges = Vec::new();
    if p > 0.0 {
        // skip over absent ranks: gaps are Geometric(p)
        let gap = Geometric::new(p).expect("p in (0, 1]");
        let mut rank = gap.sample(rng);
        while rank < table.total() {
            edges.push(table.unrank(rank));
            rank = match rank.checked_add(1 + gap.sample(rng)) {
                Some(r) => r,
                None => break,
            };
        }
    }
    Ok(Hypergraph::from_parts_unchecked(n, k, edges, true))
}

/// `m` edges drawn independently and uniformly, kept in draw order; repeats
/// are possible.
pub fn sample_independent(n: usize, k: usize, m: usize, seed: u64) -> Result<Hypergraph> {
    sample_independent_with(n, k, m, &mut trial_rng(seed, 0))
}

pub fn sample_independent_with<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    m: usize,
    rng: &mut R,
) -> Result<Hypergraph> {
    Hypergraph::check_shape(n, k)?;
    // A partial Fisher-Yates shuffle picks a uniform k-subset from any
    // starting arrangement, so the array is reused between edges.
    let mut perm: Vec<usize> = (0..n).collect();
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let mut e = KSet::empty();
        for i in 0..k {
            let j = rng.random_range(i..n);
            perm.swap(i, j);
            e.insert(perm[i]);
        }
        edges.push(e);
    }
    Ok(Hypergraph::from_parts_unchecked(n, k, edges, false))
}

/// Draws `|H| ~ Bin(C(n,k), p)` and then that many distinct uniform k-sets
/// (colex order). The flag reports whether `|H|` lies in the window
/// `(m̄ - ψ√m̄, m̄ + ψ√m̄)`, `m̄ = p C(n,k)`, with `ψ = ln n`.
pub fn sample_conditioned(n: usize, k: usize, p: f64, seed: u64) -> Result<(Hypergraph, bool)> {
    sample_conditioned_with(
        n,
        k,
        p,
        (n as f64).ln(),
        &mut trial_rng(seed, 0),
        &SamplerConfig::default(),
    )
}

pub fn sample_conditioned_with<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    p: f64,
    psi: f64,
    rng: &mut R,
    config: &SamplerConfig,
) -> Result<(Hypergraph, bool)> {
    check_p(p)?;
    let table = colex_table(n, k, config)?;
    let total = table.total();
    let m = Binomial::new(total, p).expect("p checked").sample(rng);
    let mut ranks = rand::seq::index::sample(rng, total as usize, m as usize).into_vec();
    ranks.sort_unstable();
    let edges = ranks.into_iter().map(|r| table.unrank(r as u64)).collect();
    let mbar = p * total as f64;
    let half = psi * mbar.sqrt();
    let in_window = (m as f64) > mbar - half && (m as f64) < mbar + half;
    Ok((Hypergraph::from_parts_unchecked(n, k, edges, true), in_window))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_endpoints() {
        assert!(sample_bernoulli(6, 3, 0.0, 1).unwrap().is_empty());
        let full = sample_bernoulli(6, 3, 1.0, 1).unwrap();
        assert_eq!(full, Hypergraph::complete(6, 3).unwrap());
    }

    #[test]
    fn bernoulli_respects_cap() {
        let cfg = SamplerConfig { enumeration_cap: 100 };
        let err = sample_bernoulli_with(10, 3, 0.5, &mut trial_rng(0, 0), &cfg).unwrap_err();
        assert!(err.is_resource());
        assert!(err.to_string().contains("independent"));
    }

    #[test]
    fn bernoulli_is_colex_sorted_and_deterministic() {
        let a = sample_bernoulli(12, 3, 0.3, 42).unwrap();
        let b = sample_bernoulli(12, 3, 0.3, 42).unwrap();
        assert_eq!(a, b);
        assert!(a.edges().windows(2).all(|w| w[0].colex_cmp(&w[1]).is_lt()));
        assert_ne!(a, sample_bernoulli(12, 3, 0.3, 43).unwrap());
    }

    #[test]
    fn independent_edges_have_size_k() {
        let h = sample_independent(9, 4, 50, 5).unwrap();
        assert_eq!(h.len(), 50);
        assert!(h.edges().iter().all(|e| e.len() == 4 && e.max().unwrap() < 9));
        assert!(!h.dedup_flag());
        assert!(sample_independent(9, 4, 0, 5).unwrap().is_empty());
    }

    #[test]
    fn conditioned_endpoints() {
        let (h, w) = sample_conditioned(6, 2, 0.0, 3).unwrap();
        assert!(h.is_empty());
        // m̄ = 0 gives an empty open window
        assert!(!w);
        let (h, _) = sample_conditioned(6, 2, 1.0, 3).unwrap();
        assert_eq!(h.len(), 15);
    }
}
