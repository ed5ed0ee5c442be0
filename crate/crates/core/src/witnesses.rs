//! Structured obstructions to EKR: Hilton–Milner families, generic cliques,
//! the three-way event taxonomy for nontrivial cliques, and the sequential
//! degree profile of an ordered clique.
//!
//! Everything here accepts multisets; degrees count multiplicity.

use serde::{Deserialize, Serialize};

use crate::analytics::{ModelParams, RegimeParams};
use crate::clique::{Bits, IntersectionGraph};
use crate::error::{Error, Result};
use crate::hypergraph::{degree_stats, Hypergraph};
use crate::kset::KSet;
use crate::verifier::{edge_lists, is_trivial_clique, VerifierConfig};

/// `B0` plus the edges through `x` that meet it; `x ∉ B0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HmWitness {
    pub center: usize,
    pub b0: usize,
    /// Indices of all edges through `center` meeting `B0`, ascending.
    pub petals: Vec<usize>,
}

/// First `(x, B0)` in scan order (x ascending, then B0 by index) with
/// `x ∉ B0` and at least `d` edges through x meeting B0.
pub fn find_hilton_milner(h: &Hypergraph, d: usize) -> Result<Option<HmWitness>> {
    if d == 0 {
        return Err(Error::argument("d must be positive"));
    }
    let edges = h.edges();
    for x in 0..h.n() {
        let star = h.star(x);
        if star.len() < d {
            continue;
        }
        for (b0, e0) in edges.iter().enumerate() {
            if e0.contains(x) {
                continue;
            }
            let petals: Vec<usize> = star.iter().copied().filter(|&i| edges[i].intersects(e0)).collect();
            if petals.len() >= d {
                return Ok(Some(HmWitness { center: x, b0, petals }));
            }
        }
    }
    Ok(None)
}

/// `φ^{d+1} k^{2d-1} n^{-(d-2)}`, the leading term of the union bound on a
/// Hilton–Milner family of size `d + 1`.
pub fn hm_count_bound_raw(phi: f64, n: f64, k: f64, d: u32) -> f64 {
    let d = d as f64;
    ((d + 1.0) * phi.ln() + (2.0 * d - 1.0) * k.ln() - (d - 2.0) * n.ln()).exp()
}

pub fn hm_count_bound(params: &ModelParams, d: u32) -> f64 {
    hm_count_bound_raw(params.phi(), params.n as f64, params.k as f64, d)
}

fn check_clique(clique: &[KSet]) -> Result<()> {
    for (i, a) in clique.iter().enumerate() {
        for (j, b) in clique.iter().enumerate().skip(i + 1) {
            if !a.intersects(b) {
                return Err(Error::argument(format!(
                    "not a clique: members {i} {:?} and {j} {:?} are disjoint",
                    a.to_one_based(),
                    b.to_one_based()
                )));
            }
        }
    }
    Ok(())
}

fn multiset_degrees(n: usize, clique: &[KSet]) -> Vec<usize> {
    let mut deg = vec![0; n];
    for e in clique {
        for v in e.iter() {
            deg[v] += 1;
        }
    }
    deg
}

/// Maximum degree at most 3 and at most `zeta_cap` vertices of degree 3.
pub fn is_generic_clique(clique: &[KSet], zeta_cap: f64) -> Result<bool> {
    check_clique(clique)?;
    let deg = multiset_degrees(crate::kset::MAX_N, clique);
    let max = deg.iter().copied().max().unwrap_or(0);
    let threes = deg.iter().filter(|&&d| d == 3).count();
    Ok(max <= 3 && threes as f64 <= zeta_cap)
}

/// A generic clique of exactly `size` members (edge indices, ascending), the
/// first one met by a branch and bound in the verifier's ordering, or
/// `None`. Sub-families of generic cliques are generic, so this also
/// decides whether one of size at least `size` exists.
pub fn find_generic_clique(h: &Hypergraph, size: usize, zeta_cap: f64) -> Result<Option<Vec<usize>>> {
    find_generic_clique_with(h, size, zeta_cap, &VerifierConfig::default())
}

pub fn find_generic_clique_with(
    h: &Hypergraph,
    size: usize,
    zeta_cap: f64,
    config: &VerifierConfig,
) -> Result<Option<Vec<usize>>> {
    if h.len() > config.max_edges {
        return Err(Error::Resource {
            what: "edges in witness search input",
            limit: config.max_edges as u64,
            actual: h.len() as u64,
        });
    }
    if size == 0 {
        return Ok(Some(Vec::new()));
    }
    let g = IntersectionGraph::new(h.n(), h.edges());
    let mut s = GenericSearch {
        g: &g,
        size,
        zeta_cap,
        deg: vec![0; h.n()],
        threes: 0,
        current: Vec::new(),
        nodes: 0,
        budget: config.node_budget,
    };
    let found = s.run(Bits::full(g.len))?;
    Ok(found.then(|| g.to_input(&s.current)))
}

struct GenericSearch<'g> {
    g: &'g IntersectionGraph,
    size: usize,
    zeta_cap: f64,
    deg: Vec<u8>,
    threes: usize,
    current: Vec<usize>,
    nodes: u64,
    budget: Option<u64>,
}

impl GenericSearch<'_> {
    fn fits(&self, e: &KSet) -> bool {
        let mut new_threes = 0;
        for v in e.iter() {
            match self.deg[v] {
                3.. => return false,
                2 => new_threes += 1,
                _ => {}
            }
        }
        (self.threes + new_threes) as f64 <= self.zeta_cap
    }

    fn push(&mut self, pos: usize) {
        for v in self.g.edges[pos].iter() {
            self.deg[v] += 1;
            if self.deg[v] == 3 {
                self.threes += 1;
            }
        }
        self.current.push(pos);
    }

    fn pop(&mut self) {
        let pos = self.current.pop().expect("nonempty");
        for v in self.g.edges[pos].iter() {
            if self.deg[v] == 3 {
                self.threes -= 1;
            }
            self.deg[v] -= 1;
        }
    }

    fn run(&mut self, p: Bits) -> Result<bool> {
        self.nodes += 1;
        if self.budget.is_some_and(|b| self.nodes > b) {
            return Err(Error::Budget { nodes: self.nodes });
        }
        if self.current.len() == self.size {
            return Ok(true);
        }
        let mut p = p;
        for v in p.clone().ones() {
            if !self.fits(&self.g.edges[v]) {
                p.clear(v);
            }
        }
        let need = self.size - self.current.len();
        if p.count() < need || self.g.colour_count(&p) < need {
            return Ok(false);
        }
        for v in p.clone().ones() {
            if p.count() < need {
                break;
            }
            self.push(v);
            let np = p.and(&self.g.adj[v]);
            if self.run(np)? {
                return Ok(true);
            }
            self.pop();
            p.clear(v);
        }
        Ok(false)
    }
}

/// Sequential degree profile of an ordered clique `A_1 .. A_t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CliqueProfile {
    /// `|W_i|`, `|Z_i|`, `|U_i|` for `i = 1..t`.
    pub w_sizes: Vec<usize>,
    pub z_sizes: Vec<usize>,
    pub u_sizes: Vec<usize>,
    /// `s_i = |A_i ∩ W_{i-1}|`, `r_i = |A_i ∩ Z_{i-1}|`.
    pub s_vec: Vec<usize>,
    pub r_vec: Vec<usize>,
    pub s: usize,
    pub r: usize,
    /// `Σ_{v∈Z} [C(d_v, 2) - 1]`.
    pub psi: u64,
    /// `(λ̄ + 2) r / 2 + 2 s`.
    pub x_rs: f64,
    pub max_deg: usize,
    pub num_deg3: usize,
}

/// Reveals the edges in order, tracking `W_i` (degree exactly 2) and `Z_i`
/// (degree at least 3) over `V' = V \ {excluded}`. The clique is taken as
/// given; intersection is not checked.
pub fn clique_profile(ordered: &[KSet], lambda_cap: f64, excluded: Option<usize>) -> CliqueProfile {
    let mut deg = vec![0usize; crate::kset::MAX_N];
    let (mut w, mut z) = (0usize, 0usize);
    let mut p = CliqueProfile {
        w_sizes: Vec::with_capacity(ordered.len()),
        z_sizes: Vec::with_capacity(ordered.len()),
        u_sizes: Vec::with_capacity(ordered.len()),
        s_vec: Vec::with_capacity(ordered.len()),
        r_vec: Vec::with_capacity(ordered.len()),
        s: 0,
        r: 0,
        psi: 0,
        x_rs: 0.0,
        max_deg: 0,
        num_deg3: 0,
    };
    for a in ordered {
        let (mut si, mut ri) = (0, 0);
        for v in a.iter().filter(|&v| Some(v) != excluded) {
            match deg[v] {
                2 => {
                    si += 1;
                    w -= 1;
                    z += 1;
                }
                3.. => ri += 1,
                1 => w += 1,
                _ => {}
            }
            deg[v] += 1;
        }
        p.s_vec.push(si);
        p.r_vec.push(ri);
        p.w_sizes.push(w);
        p.z_sizes.push(z);
        p.u_sizes.push(w + z);
    }
    p.s = p.s_vec.iter().sum();
    p.r = p.r_vec.iter().sum();
    p.psi = deg
        .iter()
        .filter(|&&d| d >= 3)
        .map(|&d| (d * (d - 1) / 2 - 1) as u64)
        .sum();
    p.x_rs = (lambda_cap + 2.0) * p.r as f64 / 2.0 + 2.0 * p.s as f64;
    p.max_deg = deg.iter().copied().max().unwrap_or(0);
    p.num_deg3 = deg.iter().filter(|&&d| d == 3).count();
    p
}

/// Which of the three events certifies a nontrivial clique, checked in the
/// order A, B, C.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "event")]
pub enum EventClass {
    /// `d_C(x) ≥ τ`, `|C| ≥ d_H(x)`, and `|C| ≥ α` or `|C \ C_x| ≥ 2/ε`.
    #[serde(rename = "eventA")]
    A { x: usize },
    /// Two vertices of clique degree at least λ.
    #[serde(rename = "eventB")]
    B { x: usize, y: usize },
    /// `|C| ≥ γ`, at most one vertex of clique degree greater than λ, and
    /// maximum clique degree less than τ.
    #[serde(rename = "eventC")]
    C,
    #[serde(rename = "none")]
    None,
}

impl EventClass {
    pub fn tag(&self) -> &'static str {
        match self {
            EventClass::A { .. } => "eventA",
            EventClass::B { .. } => "eventB",
            EventClass::C => "eventC",
            EventClass::None => "none",
        }
    }
}

/// Classifies a nontrivial clique (edge indices into `h`) by the regime
/// parameters. A clique of size at least `max{Δ, α}` always lands in one of
/// A, B, C.
pub fn classify_nontrivial_clique(h: &Hypergraph, clique: &[usize], regime: &RegimeParams) -> Result<EventClass> {
    let sets: Vec<KSet> = clique.iter().map(|&i| h.edges()[i]).collect();
    check_clique(&sets)?;
    if is_trivial_clique(&sets).is_some() {
        return Err(Error::argument("clique is trivial; the taxonomy covers nontrivial cliques"));
    }
    let size = sets.len() as f64;
    let d_h = degree_stats(h).deg;
    let d_c = multiset_degrees(h.n(), &sets);
    for x in 0..h.n() {
        let dx = d_c[x] as f64;
        let outside = size - dx;
        if dx >= regime.tau
            && size >= d_h[x] as f64
            && (size >= regime.alpha as f64 || outside >= 2.0 / regime.eps)
        {
            return Ok(EventClass::A { x });
        }
    }
    let heavy: Vec<usize> = (0..h.n()).filter(|&v| d_c[v] as f64 >= regime.lambda).collect();
    if let [x, y, ..] = heavy[..] {
        return Ok(EventClass::B { x, y });
    }
    let above = (0..h.n()).filter(|&v| d_c[v] as f64 > regime.lambda).count();
    let max = d_c.iter().copied().max().unwrap_or(0) as f64;
    if size >= regime.gamma && above <= 1 && max < regime.tau {
        return Ok(EventClass::C);
    }
    Ok(EventClass::None)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub kind: String,
    /// Member edges as 1-based vertex lists.
    pub witness: Vec<Vec<usize>>,
    /// Certifying vertices, 1-based.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub vertices: Vec<usize>,
}

impl WitnessJson {
    pub fn hm(h: &Hypergraph, w: &HmWitness) -> Self {
        let mut members = vec![w.b0];
        members.extend(&w.petals);
        Self {
            kind: "hm".into(),
            witness: edge_lists(h, &members),
            vertices: vec![w.center + 1],
        }
    }

    pub fn generic(h: &Hypergraph, clique: &[usize]) -> Self {
        Self {
            kind: "generic".into(),
            witness: edge_lists(h, clique),
            vertices: Vec::new(),
        }
    }

    pub fn event(h: &Hypergraph, clique: &[usize], class: &EventClass) -> Self {
        let vertices = match *class {
            EventClass::A { x } => vec![x + 1],
            EventClass::B { x, y } => vec![x + 1, y + 1],
            _ => Vec::new(),
        };
        Self {
            kind: class.tag().into(),
            witness: edge_lists(h, clique),
            vertices,
        }
    }
}
