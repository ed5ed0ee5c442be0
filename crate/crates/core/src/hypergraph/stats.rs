//! Vertex and pair degrees, the sets `W_x = {y : d(x,y) ≥ 2}`, and the
//! conjuncts of the regularity event R.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::Hypergraph;
use crate::analytics::{compute_alpha_beta, derived_quantities, ModelParams};
use crate::error::Result;
use crate::kset::KSet;

/// Degrees count edge multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeStats {
    pub deg: Vec<usize>,
    pub delta: usize,
    /// `d(x, y)` for `x < y`, only pairs that occur.
    pub pair_deg: BTreeMap<(usize, usize), usize>,
    pub w: Vec<KSet>,
}

impl DegreeStats {
    pub fn pair(&self, x: usize, y: usize) -> usize {
        let key = if x < y { (x, y) } else { (y, x) };
        self.pair_deg.get(&key).copied().unwrap_or(0)
    }

    pub fn max_pair_degree(&self) -> usize {
        self.pair_deg.values().copied().max().unwrap_or(0)
    }

    /// The vertex of maximum degree, lowest label first; `None` when empty.
    pub fn argmax(&self) -> Option<usize> {
        (self.delta > 0).then(|| self.deg.iter().position(|&d| d == self.delta).unwrap())
    }
}

pub fn degree_stats(h: &Hypergraph) -> DegreeStats {
    let n = h.n();
    let mut deg = vec![0usize; n];
    let mut pair_deg = BTreeMap::new();
    let mut buf = Vec::with_capacity(h.k());
    for e in h.edges() {
        buf.clear();
        buf.extend(e.iter());
        for (i, &x) in buf.iter().enumerate() {
            deg[x] += 1;
            for &y in &buf[i + 1..] {
                *pair_deg.entry((x, y)).or_insert(0) += 1;
            }
        }
    }
    let mut w = vec![KSet::empty(); n];
    for (&(x, y), &d) in &pair_deg {
        if d >= 2 {
            w[x].insert(y);
            w[y].insert(x);
        }
    }
    DegreeStats {
        delta: deg.iter().copied().max().unwrap_or(0),
        deg,
        pair_deg,
        w,
    }
}

/// Pair degrees above this violate R.
pub const PAIR_DEGREE_CAP: usize = 8;

/// Thresholds for the conjuncts of R.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EventRParams {
    pub mbar: f64,
    pub psi: f64,
    pub alpha: u64,
    pub beta: u64,
    /// `w = max{φ²k²/n, 6 ln n}`; R needs `|W_x| < w` for every x.
    pub w: f64,
}

impl EventRParams {
    pub fn from_model(params: &ModelParams) -> Result<Self> {
        let d = derived_quantities(params)?;
        let ab = compute_alpha_beta(params)?;
        Ok(Self {
            mbar: d.mbar,
            psi: params.psi,
            alpha: ab.alpha,
            beta: ab.beta,
            w: d.w,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventRReport {
    pub m_window: bool,
    pub delta_le_beta: bool,
    pub delta_ge_alpha: bool,
    pub pair_degree_ok: bool,
    pub w_ok: bool,
}

impl EventRReport {
    pub fn all(&self) -> bool {
        self.m_window && self.delta_le_beta && self.delta_ge_alpha && self.pair_degree_ok && self.w_ok
    }
}

pub fn check_event_r(h: &Hypergraph, r: &EventRParams) -> EventRReport {
    let stats = degree_stats(h);
    let m = h.len() as f64;
    let half = r.psi * r.mbar.sqrt();
    // an empty window (m̄ = 0) still admits the empty hypergraph
    let m_window = if r.mbar == 0.0 {
        h.is_empty()
    } else {
        m > r.mbar - half && m < r.mbar + half
    };
    EventRReport {
        m_window,
        delta_le_beta: stats.delta as u64 <= r.beta,
        delta_ge_alpha: stats.delta as u64 >= r.alpha,
        pair_degree_ok: stats.max_pair_degree() <= PAIR_DEGREE_CAP,
        w_ok: stats.w.iter().all(|wx| (wx.len() as f64) < r.w),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(n: usize, k: usize, lists: &[&[usize]]) -> Hypergraph {
        let v: Vec<Vec<usize>> = lists.iter().map(|l| l.to_vec()).collect();
        Hypergraph::from_lists(n, k, &v).unwrap()
    }

    #[test]
    fn star_degrees() {
        let star = h(5, 2, &[&[1, 2], &[1, 3], &[1, 4], &[1, 5]]);
        let s = degree_stats(&star);
        assert_eq!(s.deg[0], 4);
        assert_eq!(s.delta, 4);
        assert_eq!(s.argmax(), Some(0));
    }

    #[test]
    fn triangle_has_empty_w() {
        let s = degree_stats(&h(3, 2, &[&[1, 2], &[1, 3], &[2, 3]]));
        assert_eq!(s.deg, vec![2, 2, 2]);
        assert!(s.w.iter().all(|w| w.is_empty()));
    }

    #[test]
    fn repeated_pair_enters_w() {
        let s = degree_stats(&h(4, 3, &[&[1, 2, 3], &[1, 2, 4]]));
        assert_eq!(s.pair(0, 1), 2);
        assert_eq!(s.w[0].to_vec(), vec![1]);
        assert_eq!(s.w[1].to_vec(), vec![0]);
        assert!(s.w[2].is_empty());
    }

    #[test]
    fn event_r_on_empty() {
        let r = EventRParams {
            mbar: 0.0,
            psi: 1.0,
            alpha: 0,
            beta: 0,
            w: 1.0,
        };
        let rep = check_event_r(&Hypergraph::new(5, 2, vec![]).unwrap(), &r);
        assert!(rep.all());
    }

    #[test]
    fn event_r_flags_large_w() {
        // vertex 1 meets 2, 3, 4 in two edges each
        let hh = h(
            8,
            3,
            &[&[1, 2, 5], &[1, 2, 6], &[1, 3, 7], &[1, 3, 8], &[1, 4, 5], &[1, 4, 6]],
        );
        let r = EventRParams {
            mbar: 6.0,
            psi: 10.0,
            alpha: 0,
            beta: 100,
            w: 3.0,
        };
        let rep = check_event_r(&hh, &r);
        assert!(!rep.w_ok);
        assert!(rep.m_window && rep.pair_degree_ok && rep.delta_le_beta);
    }
}
