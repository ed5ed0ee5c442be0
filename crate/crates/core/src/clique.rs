//! Branch-and-bound maximum clique on the intersection graph of a list of
//! edges: vertices are edge indices, adjacent when the edges meet.
//!
//! The search follows the usual greedy-colouring scheme: candidates are
//! coloured sequentially, and a branch is cut as soon as the partial clique
//! plus the number of colours cannot beat the incumbent.

use crate::error::{Error, Result};
use crate::kset::KSet;

/// Fixed-length bitset over `0..len`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Bits {
    words: Vec<u64>,
}

impl Bits {
    pub fn new(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut b = Self::new(len);
        for i in 0..len {
            b.set(i);
        }
        b
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn clear(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    #[inline]
    pub fn test(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn and(&self, other: &Bits) -> Bits {
        Bits {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn and_not(&self, other: &Bits) -> Bits {
        Bits {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & !b).collect(),
        }
    }

    pub fn and_count(&self, other: &Bits) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }
}

/// The intersection graph, with vertices renumbered into branching order:
/// descending degree, ties by colex order of the edge, then input index.
pub struct IntersectionGraph {
    /// `order[pos]` is the input index of the edge at position `pos`.
    pub order: Vec<usize>,
    pub edges: Vec<KSet>,
    pub adj: Vec<Bits>,
    /// Positions of the edges through each ground vertex.
    pub through: Vec<Bits>,
    pub len: usize,
}

impl IntersectionGraph {
    pub fn new(n: usize, input: &[KSet]) -> Self {
        let m = input.len();
        let degree: Vec<usize> = (0..m)
            .map(|i| (0..m).filter(|&j| j != i && input[i].intersects(&input[j])).count())
            .collect();
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| {
            degree[b]
                .cmp(&degree[a])
                .then_with(|| input[a].colex_cmp(&input[b]))
                .then(a.cmp(&b))
        });
        let edges: Vec<KSet> = order.iter().map(|&i| input[i]).collect();
        let mut adj = vec![Bits::new(m); m];
        for i in 0..m {
            for j in i + 1..m {
                if edges[i].intersects(&edges[j]) {
                    adj[i].set(j);
                    adj[j].set(i);
                }
            }
        }
        let mut through = vec![Bits::new(m); n];
        for (pos, e) in edges.iter().enumerate() {
            for x in e.iter() {
                through[x].set(pos);
            }
        }
        Self {
            order,
            edges,
            adj,
            through,
            len: m,
        }
    }

    /// Input indices of the given positions, ascending.
    pub fn to_input(&self, positions: &[usize]) -> Vec<usize> {
        let mut v: Vec<usize> = positions.iter().map(|&p| self.order[p]).collect();
        v.sort_unstable();
        v
    }

    /// Greedy sequential colouring of `p`. Returns the vertices sorted by
    /// colour with the colour (1-based) of each.
    pub fn colour_sort(&self, p: &Bits) -> (Vec<usize>, Vec<usize>) {
        let mut verts = Vec::with_capacity(p.count());
        let mut colours = Vec::with_capacity(verts.capacity());
        let mut uncoloured = p.clone();
        let mut colour = 0;
        while !uncoloured.is_empty() {
            colour += 1;
            let mut avail = uncoloured.clone();
            while let Some(v) = avail.first() {
                avail = avail.and_not(&self.adj[v]);
                avail.clear(v);
                uncoloured.clear(v);
                verts.push(v);
                colours.push(colour);
            }
        }
        (verts, colours)
    }

    pub fn colour_count(&self, p: &Bits) -> usize {
        self.colour_sort(p).1.last().copied().unwrap_or(0)
    }
}

/// Search state shared by the plain and the nontrivial searches.
pub struct Search<'g> {
    pub g: &'g IntersectionGraph,
    pub best: usize,
    pub best_clique: Vec<usize>,
    current: Vec<usize>,
    nodes: u64,
    budget: Option<u64>,
    stop_at: Option<usize>,
}

impl<'g> Search<'g> {
    /// `best` is the size to beat; `stop_at` ends the search as soon as a
    /// clique of that size is recorded.
    pub fn new(g: &'g IntersectionGraph, best: usize, budget: Option<u64>, stop_at: Option<usize>) -> Self {
        Self {
            g,
            best,
            best_clique: Vec::new(),
            current: Vec::new(),
            nodes: 0,
            budget,
            stop_at,
        }
    }

    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        match self.budget {
            Some(b) if self.nodes > b => Err(Error::Budget { nodes: self.nodes }),
            _ => Ok(()),
        }
    }

    fn done(&self) -> bool {
        self.stop_at.is_some_and(|s| self.best >= s)
    }

    fn record(&mut self) {
        if self.current.len() > self.best {
            self.best = self.current.len();
            self.best_clique = self.current.clone();
        }
    }

    /// Maximum clique containing the current partial clique, drawn from `p`.
    pub fn expand(&mut self, mut p: Bits) -> Result<()> {
        self.tick()?;
        let (verts, colours) = self.g.colour_sort(&p);
        for i in (0..verts.len()).rev() {
            if self.done() || self.current.len() + colours[i] <= self.best {
                return Ok(());
            }
            let v = verts[i];
            self.current.push(v);
            let np = p.and(&self.g.adj[v]);
            if np.is_empty() {
                self.record();
            } else {
                self.expand(np)?;
            }
            self.current.pop();
            p.clear(v);
        }
        Ok(())
    }

    /// Like [`Search::expand`], but only cliques whose members have empty
    /// common intersection are recorded. `common` is the intersection of
    /// the current partial clique (the full ground set when it is empty).
    ///
    /// While `common` is nonempty, pick its vertex `x` covering most
    /// candidates; any nontrivial extension must use some candidate that
    /// avoids `x`, so branch on the first such candidate it uses.
    pub fn expand_nontrivial(&mut self, mut p: Bits, common: KSet) -> Result<()> {
        if common.is_empty() {
            return self.expand(p);
        }
        self.tick()?;
        if self.current.len() + self.g.colour_count(&p) <= self.best {
            return Ok(());
        }
        let x = common
            .iter()
            .max_by_key(|&x| (p.and_count(&self.g.through[x]), std::cmp::Reverse(x)))
            .expect("nonempty");
        let avoid = p.and_not(&self.g.through[x]);
        for v in avoid.ones() {
            if self.done() || self.current.len() + p.count() <= self.best {
                return Ok(());
            }
            self.current.push(v);
            let np = p.and(&self.g.adj[v]);
            let nc = common.intersection(&self.g.edges[v]);
            if nc.is_empty() && np.is_empty() {
                self.record();
            } else if !np.is_empty() {
                self.expand_nontrivial(np, nc)?;
            }
            self.current.pop();
            p.clear(v);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sets(n: usize, lists: &[&[usize]]) -> Vec<KSet> {
        lists.iter().map(|l| KSet::from_one_based(n, l).unwrap()).collect()
    }

    #[test]
    fn bits_basics() {
        let mut b = Bits::new(130);
        b.set(0);
        b.set(64);
        b.set(129);
        assert_eq!(b.count(), 3);
        assert_eq!(b.ones().collect::<Vec<_>>(), vec![0, 64, 129]);
        b.clear(0);
        assert_eq!(b.first(), Some(64));
        assert_eq!(Bits::full(70).count(), 70);
    }

    #[test]
    fn triangle_plus_isolated() {
        let e = sets(5, &[&[1, 2], &[1, 3], &[2, 3], &[4, 5]]);
        let g = IntersectionGraph::new(5, &e);
        let mut s = Search::new(&g, 0, None, None);
        s.expand(Bits::full(4)).unwrap();
        assert_eq!(s.best, 3);
        assert_eq!(g.to_input(&s.best_clique), vec![0, 1, 2]);
    }

    #[test]
    fn budget_is_enforced() {
        let e: Vec<KSet> = crate::combin::ColexTable::new(8, 3).unwrap().iter().collect();
        let g = IntersectionGraph::new(8, &e);
        let mut s = Search::new(&g, 0, Some(3), None);
        assert!(matches!(s.expand(Bits::full(g.len)), Err(Error::Budget { .. })));
    }
}
