//! Exact decision of the strong EKR property: every maximum intersecting
//! subfamily of `H` is a star.
//!
//! Let ω be the clique number of the intersection graph and Δ the maximum
//! vertex degree. Every star is a clique, so ω ≥ Δ. A maximum clique with a
//! common vertex x lies inside the star `H_x`, so its size is at most
//! `d(x) ≤ Δ ≤ ω`; it is therefore the whole star. Hence `H` has the
//! property iff ω = Δ and no clique of size ω has empty common
//! intersection. Both halves are decided by branch and bound.

use serde::{Deserialize, Serialize};

use crate::clique::{Bits, IntersectionGraph, Search};
use crate::combin::binomial_u64;
use crate::error::{Error, Result};
use crate::hypergraph::{degree_stats, Hypergraph};
use crate::kset::KSet;

pub const DEFAULT_MAX_EDGES: usize = 2000;
pub const BRUTE_FORCE_MAX_EDGES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifierConfig {
    pub max_edges: usize,
    /// Branch-and-bound node budget; `None` searches to completion.
    pub node_budget: Option<u64>,
    /// Cap clique sizes by the classical extremal bounds (see
    /// [`classical_caps`]). Exact either way; off means pure search.
    pub classical_bounds: bool,
}

impl Default for VerifierConfig {
    fn default() -> Self {
        Self {
            max_edges: DEFAULT_MAX_EDGES,
            node_budget: None,
            classical_bounds: true,
        }
    }
}

/// Upper bounds valid for every k-uniform family on `[n]`, `n > 2k`: an
/// intersecting family has at most `C(n-1, k-1)` members, and one with
/// empty common intersection at most `C(n-1, k-1) - C(n-k-1, k-1) + 1`.
/// Returns `(intersecting, nontrivial)`, or `None` outside `n > 2k`.
pub fn classical_caps(n: usize, k: usize) -> Option<(usize, usize)> {
    if k < 2 || n <= 2 * k {
        return None;
    }
    let star = binomial_u64((n - 1) as u64, (k - 1) as u64)?;
    let miss = binomial_u64((n - k - 1) as u64, (k - 1) as u64)?;
    Some((star as usize, (star - miss + 1) as usize))
}

fn caps(h: &Hypergraph, config: &VerifierConfig) -> (usize, usize) {
    match classical_caps(h.n(), h.k()).filter(|_| config.classical_bounds) {
        Some(c) => c,
        None => (usize::MAX, usize::MAX),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EkrVerdict {
    pub holds: bool,
    pub omega: usize,
    pub delta: usize,
    /// Edge indices of a maximum clique that is not a star (failure only).
    pub witness: Option<Vec<usize>>,
    /// A vertex whose star is a maximum clique (success with `Δ > 0`).
    pub trivial_center: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub holds: bool,
    pub omega: usize,
    pub delta: usize,
    /// Witness edges as 1-based vertex lists.
    pub witness: Option<Vec<Vec<usize>>>,
}

impl EkrVerdict {
    pub fn to_json(&self, h: &Hypergraph) -> VerdictJson {
        VerdictJson {
            holds: self.holds,
            omega: self.omega,
            delta: self.delta,
            witness: self.witness.as_ref().map(|w| edge_lists(h, w)),
        }
    }
}

pub(crate) fn edge_lists(h: &Hypergraph, indices: &[usize]) -> Vec<Vec<usize>> {
    indices.iter().map(|&i| h.edges()[i].to_one_based()).collect()
}

fn check_input(h: &Hypergraph, cap: usize) -> Result<()> {
    if h.len() > cap {
        return Err(Error::Resource {
            what: "edges in verifier input",
            limit: cap as u64,
            actual: h.len() as u64,
        });
    }
    if h.has_repeats() {
        return Err(Error::argument(
            "EKR is decided for simple hypergraphs; remove repeated edges first",
        ));
    }
    Ok(())
}

/// `Some(center)` for a trivial clique (lowest common vertex), `None` for a
/// nontrivial one. The empty clique counts as trivial with no center.
pub fn is_trivial_clique(clique: &[KSet]) -> Option<Option<usize>> {
    let Some(first) = clique.first() else {
        return Some(None);
    };
    let common = clique.iter().fold(*first, |acc, e| acc.intersection(e));
    common.min().map(Some)
}

/// Whether the edges are pairwise intersecting.
pub fn is_intersecting(edges: &[KSet]) -> bool {
    edges
        .iter()
        .enumerate()
        .all(|(i, a)| edges[i + 1..].iter().all(|b| a.intersects(b)))
}

/// Clique number ω of the intersection graph and one maximum clique
/// (ascending edge indices). The search starts from the largest star.
pub fn max_intersecting_family(h: &Hypergraph) -> Result<(usize, Vec<usize>)> {
    max_intersecting_family_with(h, &VerifierConfig::default())
}

pub fn max_intersecting_family_with(h: &Hypergraph, config: &VerifierConfig) -> Result<(usize, Vec<usize>)> {
    if h.len() > config.max_edges {
        return Err(Error::Resource {
            what: "edges in verifier input",
            limit: config.max_edges as u64,
            actual: h.len() as u64,
        });
    }
    let g = IntersectionGraph::new(h.n(), h.edges());
    max_clique_in(h, &g, config)
}

fn max_clique_in(h: &Hypergraph, g: &IntersectionGraph, config: &VerifierConfig) -> Result<(usize, Vec<usize>)> {
    let stats = degree_stats(h);
    let Some(x) = stats.argmax() else {
        return Ok((0, Vec::new()));
    };
    let (cap, _) = caps(h, config);
    let mut search = Search::new(g, stats.delta, config.node_budget, Some(cap));
    if stats.delta < cap {
        search.expand(Bits::full(g.len))?;
    }
    if search.best_clique.is_empty() {
        Ok((stats.delta, h.star(x)))
    } else {
        Ok((search.best, g.to_input(&search.best_clique)))
    }
}

/// Largest clique with empty common intersection, if any.
pub fn max_nontrivial_clique(h: &Hypergraph) -> Result<Option<Vec<usize>>> {
    max_nontrivial_clique_with(h, &VerifierConfig::default())
}

pub fn max_nontrivial_clique_with(h: &Hypergraph, config: &VerifierConfig) -> Result<Option<Vec<usize>>> {
    check_input(h, config.max_edges)?;
    let g = IntersectionGraph::new(h.n(), h.edges());
    let (_, cap) = caps(h, config);
    let mut search = Search::new(&g, 0, config.node_budget, Some(cap));
    search.expand_nontrivial(Bits::full(g.len), KSet::full(h.n()))?;
    Ok((!search.best_clique.is_empty()).then(|| g.to_input(&search.best_clique)))
}

/// Decides the strong EKR property. Requires a simple hypergraph.
pub fn verify_ekr(h: &Hypergraph) -> Result<EkrVerdict> {
    verify_ekr_with(h, &VerifierConfig::default())
}

pub fn verify_ekr_with(h: &Hypergraph, config: &VerifierConfig) -> Result<EkrVerdict> {
    check_input(h, config.max_edges)?;
    let stats = degree_stats(h);
    let delta = stats.delta;
    let g = IntersectionGraph::new(h.n(), h.edges());
    let (omega, clique) = max_clique_in(h, &g, config)?;
    if omega > delta {
        return Ok(EkrVerdict {
            holds: false,
            omega,
            delta,
            witness: Some(clique),
            trivial_center: None,
        });
    }
    // two intersecting edges share a vertex, so nontrivial cliques have
    // at least three members
    if omega >= 3 && omega <= caps(h, config).1 {
        let mut search = Search::new(&g, omega - 1, config.node_budget, Some(omega));
        search.expand_nontrivial(Bits::full(g.len), KSet::full(h.n()))?;
        if search.best >= omega {
            return Ok(EkrVerdict {
                holds: false,
                omega,
                delta,
                witness: Some(g.to_input(&search.best_clique)),
                trivial_center: None,
            });
        }
    }
    Ok(EkrVerdict {
        holds: true,
        omega,
        delta,
        witness: None,
        trivial_center: stats.argmax(),
    })
}

/// Exhaustive reference decision over all `2^|H|` subfamilies, `|H| ≤ 20`.
pub fn brute_force_ekr(h: &Hypergraph) -> Result<EkrVerdict> {
    check_input(h, BRUTE_FORCE_MAX_EDGES)?;
    let m = h.len();
    let e = h.edges();
    let adj: Vec<u32> = (0..m)
        .map(|i| (0..m).filter(|&j| j != i && e[i].intersects(&e[j])).fold(0u32, |a, j| a | 1 << j))
        .collect();
    let full = 1usize << m;
    let mut clique = vec![false; full];
    clique[0] = true;
    let mut omega = 0;
    for mask in 1..full {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        clique[mask] = clique[rest] && (rest as u32 & !adj[low]) == 0;
        if clique[mask] {
            omega = omega.max(mask.count_ones() as usize);
        }
    }
    let delta = degree_stats(h).delta;
    let members = |mask: usize| (0..m).filter(|&i| mask >> i & 1 == 1).collect::<Vec<_>>();
    let mut witness = None;
    for (mask, &is_clique) in clique.iter().enumerate().take(full).skip(1) {
        if !is_clique || mask.count_ones() as usize != omega {
            continue;
        }
        let idx = members(mask);
        let sets: Vec<KSet> = idx.iter().map(|&i| e[i]).collect();
        if is_trivial_clique(&sets).is_none() {
            witness = Some(idx);
            break;
        }
    }
    let holds = witness.is_none();
    Ok(EkrVerdict {
        holds,
        omega,
        delta,
        witness,
        trivial_center: if holds { degree_stats(h).argmax() } else { None },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(n: usize, k: usize, lists: &[&[usize]]) -> Hypergraph {
        let v: Vec<Vec<usize>> = lists.iter().map(|l| l.to_vec()).collect();
        Hypergraph::from_lists(n, k, &v).unwrap()
    }

    #[test]
    fn complete_5_2() {
        let k = Hypergraph::complete(5, 2).unwrap();
        let (omega, w) = max_intersecting_family(&k).unwrap();
        assert_eq!(omega, 4);
        assert_eq!(w.len(), 4);
        assert!(verify_ekr(&k).unwrap().holds);
    }

    #[test]
    fn triangle_plus_disjoint_edge() {
        let t = h(5, 2, &[&[1, 2], &[1, 3], &[2, 3], &[4, 5]]);
        assert_eq!(max_intersecting_family(&t).unwrap().0, 3);
        let v = verify_ekr(&t).unwrap();
        assert!(!v.holds);
        assert_eq!((v.omega, v.delta), (3, 2));
        assert_eq!(v.witness, Some(vec![0, 1, 2]));
        assert_eq!(v, brute_force_ekr(&t).unwrap());
    }

    #[test]
    fn star_plus_disjoint_edge_holds() {
        let s = h(6, 2, &[&[1, 2], &[1, 3], &[1, 4], &[5, 6]]);
        let v = verify_ekr(&s).unwrap();
        assert!(v.holds);
        assert_eq!((v.omega, v.delta), (3, 3));
        assert_eq!(v.trivial_center, Some(0));
    }

    #[test]
    fn small_cases() {
        let e = Hypergraph::new(5, 2, vec![]).unwrap();
        let v = verify_ekr(&e).unwrap();
        assert!(v.holds && v.omega == 0 && v.delta == 0);
        assert_eq!(v, brute_force_ekr(&e).unwrap());
        let one = h(5, 2, &[&[1, 2]]);
        assert_eq!(max_intersecting_family(&one).unwrap(), (1, vec![0]));
        let two = h(5, 2, &[&[1, 2], &[3, 4]]);
        let v = verify_ekr(&two).unwrap();
        assert!(v.holds && v.omega == 1 && v.delta == 1);
    }

    #[test]
    fn equal_omega_delta_but_nontrivial_maximum() {
        // star at 1 of size 3 and a triangle on {2,3,4}
        let g = h(7, 2, &[&[1, 5], &[1, 6], &[1, 7], &[2, 3], &[2, 4], &[3, 4]]);
        let v = verify_ekr(&g).unwrap();
        assert!(!v.holds);
        assert_eq!((v.omega, v.delta), (3, 3));
        let w = v.witness.unwrap();
        assert_eq!(w, vec![3, 4, 5]);
        assert_eq!(brute_force_ekr(&g).unwrap().witness, Some(w));
    }

    #[test]
    fn classical_caps_values() {
        assert_eq!(classical_caps(9, 3), Some((28, 19)));
        assert_eq!(classical_caps(9, 4), Some((56, 53)));
        assert_eq!(classical_caps(5, 2), Some((4, 3)));
        assert_eq!(classical_caps(8, 4), None);
    }

    #[test]
    fn caps_do_not_change_answers() {
        let off = VerifierConfig {
            classical_bounds: false,
            ..Default::default()
        };
        for (n, k) in [(5, 2), (7, 3), (8, 3)] {
            let h = Hypergraph::complete(n, k).unwrap();
            assert_eq!(verify_ekr(&h).unwrap(), verify_ekr_with(&h, &off).unwrap());
            assert_eq!(
                max_nontrivial_clique(&h).unwrap().map(|c| c.len()),
                max_nontrivial_clique_with(&h, &off).unwrap().map(|c| c.len())
            );
        }
    }

    #[test]
    fn trivial_clique_centers() {
        let s = |l: &[usize]| KSet::from_one_based(5, l).unwrap();
        assert_eq!(is_trivial_clique(&[s(&[1, 2]), s(&[1, 3])]), Some(Some(0)));
        assert_eq!(is_trivial_clique(&[s(&[1, 2]), s(&[1, 3]), s(&[2, 3])]), None);
        assert_eq!(is_trivial_clique(&[s(&[2, 4])]), Some(Some(1)));
        assert_eq!(is_trivial_clique(&[]), Some(None));
    }

    #[test]
    fn rejects_multisets_and_oversize() {
        let e = KSet::from_one_based(5, &[1, 2]).unwrap();
        let m = Hypergraph::new(5, 2, vec![e, e]).unwrap();
        assert!(matches!(verify_ekr(&m), Err(Error::Argument(_))));
        let big = Hypergraph::complete(7, 3).unwrap();
        let cfg = VerifierConfig {
            max_edges: 10,
            ..Default::default()
        };
        assert!(verify_ekr_with(&big, &cfg).unwrap_err().is_resource());
        assert!(brute_force_ekr(&big).unwrap_err().is_resource());
    }
}
