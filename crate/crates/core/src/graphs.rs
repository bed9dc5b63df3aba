//! Split graphs, their 2-switches and the factor multigraph on the
//! independent side.
//!
//! A [`SplitGraph`] stores only the clique size and, for each independent
//! vertex, its neighborhood in the clique as a bitset. Clique vertices are
//! labeled `1..=kSize`. Where a single index space is needed, clique
//! vertices come first (`0..kSize`) followed by the independent vertices.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Seed of the reproducible random corpus.
pub const CORPUS_SEED: u64 = 0x2_5317_c4ed;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SplitGraphRepr", into = "SplitGraphRepr")]
pub struct SplitGraph {
    k_size: usize,
    labels: Vec<String>,
    nbhd: Vec<FixedBitSet>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct SplitGraphRepr {
    k_size: usize,
    i_vertices: Vec<String>,
    neighborhoods: Vec<Vec<usize>>,
}

impl TryFrom<SplitGraphRepr> for SplitGraph {
    type Error = Error;
    fn try_from(r: SplitGraphRepr) -> Result<Self> {
        SplitGraph::with_labels(r.k_size, r.i_vertices, r.neighborhoods)
    }
}

impl From<SplitGraph> for SplitGraphRepr {
    fn from(s: SplitGraph) -> Self {
        SplitGraphRepr {
            k_size: s.k_size,
            neighborhoods: (0..s.i_size()).map(|v| s.neighborhood(v)).collect(),
            i_vertices: s.labels,
        }
    }
}

/// `a, b, ..., z`, then `v26, v27, ...`.
pub fn default_label(i: usize) -> String {
    if i < 26 {
        char::from(b'a' + i as u8).to_string()
    } else {
        format!("v{i}")
    }
}

impl SplitGraph {
    /// Builds a split graph with default labels. Neighborhoods list clique
    /// labels in `1..=k_size`.
    pub fn new(k_size: usize, neighborhoods: Vec<Vec<usize>>) -> Result<Self> {
        let labels = (0..neighborhoods.len()).map(default_label).collect();
        Self::with_labels(k_size, labels, neighborhoods)
    }

    pub fn with_labels(
        k_size: usize,
        labels: Vec<String>,
        neighborhoods: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if labels.len() != neighborhoods.len() {
            return Err(Error::Invalid(format!(
                "{} labels for {} neighborhoods",
                labels.len(),
                neighborhoods.len()
            )));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::Invalid(format!("duplicate vertex label {l:?}")));
            }
        }
        let mut nbhd = Vec::with_capacity(neighborhoods.len());
        for (label, list) in labels.iter().zip(&neighborhoods) {
            let mut bits = FixedBitSet::with_capacity(k_size);
            for &k in list {
                if k == 0 || k > k_size {
                    return Err(Error::Invalid(format!(
                        "neighborhood of {label} contains {k}, outside 1..={k_size}"
                    )));
                }
                if bits.put(k - 1) {
                    return Err(Error::Invalid(format!("neighborhood of {label} repeats {k}")));
                }
            }
            nbhd.push(bits);
        }
        Ok(SplitGraph { k_size, labels, nbhd })
    }

    pub fn k_size(&self) -> usize {
        self.k_size
    }

    pub fn i_size(&self) -> usize {
        self.nbhd.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.k_size + self.i_size()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Neighborhood of independent vertex `v`, as ascending clique labels.
    pub fn neighborhood(&self, v: usize) -> Vec<usize> {
        self.nbhd[v].ones().map(|k| k + 1).collect()
    }

    /// `d_v = |N_v|` for independent vertex `v`.
    pub fn i_degree(&self, v: usize) -> u64 {
        self.nbhd[v].count_ones(..) as u64
    }

    pub fn i_degrees(&self) -> Vec<u64> {
        (0..self.i_size()).map(|v| self.i_degree(v)).collect()
    }

    /// Degree of clique vertex `k` (0-based).
    pub fn k_degree(&self, k: usize) -> u64 {
        (self.k_size - 1 + self.nbhd.iter().filter(|n| n.contains(k)).count()) as u64
    }

    /// `eta_uv = |N_u ∩ N_v|`.
    pub fn eta(&self, u: usize, v: usize) -> u64 {
        self.nbhd[u].intersection_count(&self.nbhd[v]) as u64
    }

    /// Adjacency in the full graph, over the combined index space.
    pub fn adjacent(&self, p: usize, q: usize) -> bool {
        let k = self.k_size;
        match (p < k, q < k) {
            (true, true) => p != q,
            (true, false) => self.nbhd[q - k].contains(p),
            (false, true) => self.nbhd[p - k].contains(q),
            (false, false) => false,
        }
    }

    /// Name of a vertex in the combined index space.
    pub fn vertex_name(&self, p: usize) -> String {
        if p < self.k_size {
            (p + 1).to_string()
        } else {
            self.labels[p - self.k_size].clone()
        }
    }

    fn check_pair(&self, u: usize, v: usize) -> Result<()> {
        let m = self.i_size();
        if u >= m || v >= m {
            return Err(Error::Invalid(format!(
                "independent vertex index out of range ({u}, {v}) with |I| = {m}"
            )));
        }
        if u == v {
            return Err(Error::Invalid("sigma needs two distinct vertices".into()));
        }
        Ok(())
    }

    /// `sigma_uv = (d_u - eta_uv)(d_v - eta_uv)`.
    pub fn sigma(&self, u: usize, v: usize) -> Result<u64> {
        self.check_pair(u, v)?;
        Ok(self.sigma_unchecked(u, v))
    }

    fn sigma_unchecked(&self, u: usize, v: usize) -> u64 {
        let eta = self.eta(u, v);
        (self.i_degree(u) - eta) * (self.i_degree(v) - eta)
    }

    /// Counts the distinct 2-switches whose four vertices include `u` and
    /// `v`, by trying every 4-set containing both and every ordered pair of
    /// its perfect matchings as (removed, added).
    pub fn sigma_oracle(&self, u: usize, v: usize) -> Result<u64> {
        self.check_pair(u, v)?;
        let (gu, gv) = (self.k_size + u, self.k_size + v);
        let others: Vec<usize> = (0..self.vertex_count()).filter(|&p| p != gu && p != gv).collect();
        let mut keys = HashSet::new();
        for (i, &p) in others.iter().enumerate() {
            for &q in &others[i + 1..] {
                for key in switches_on(self, [gu, gv, p, q]) {
                    keys.insert(key);
                }
            }
        }
        Ok(keys.len() as u64)
    }

    /// Total number of distinct 2-switches, by enumerating pairs of
    /// disjoint non-edges as the added matching.
    pub fn switch_count(&self) -> u64 {
        self.for_each_switch(|_| {})
    }

    /// Calls `visit` with the four vertices of every distinct 2-switch and
    /// returns how many there were.
    fn for_each_switch(&self, mut visit: impl FnMut([usize; 4])) -> u64 {
        let non_edges = self.non_edges();
        let mut count = 0;
        for (i, &(p, q)) in non_edges.iter().enumerate() {
            for &(r, s) in &non_edges[i + 1..] {
                if p == r || p == s || q == r || q == s {
                    continue;
                }
                for removed in [[(p, r), (q, s)], [(p, s), (q, r)]] {
                    if removed.iter().all(|&(a, b)| self.adjacent(a, b)) {
                        count += 1;
                        visit([p, q, r, s]);
                    }
                }
            }
        }
        count
    }

    fn non_edges(&self) -> Vec<(usize, usize)> {
        let (k, m) = (self.k_size, self.i_size());
        let mut out = Vec::new();
        for v in 0..m {
            for c in 0..k {
                if !self.nbhd[v].contains(c) {
                    out.push((c, k + v));
                }
            }
            for w in v + 1..m {
                out.push((k + v, k + w));
            }
        }
        out
    }

    /// Whether each vertex (combined index space) lies in some 2-switch.
    pub fn active_vertices(&self) -> Vec<bool> {
        let mut active = vec![false; self.vertex_count()];
        self.for_each_switch(|quad| {
            for p in quad {
                active[p] = true;
            }
        });
        active
    }

    /// DOT rendering. Independent vertices are circles labeled with their
    /// degree; the clique is drawn vertex by vertex or as one box.
    pub fn to_dot(&self, expand_k: bool) -> String {
        let mut s = String::from("graph S {\n");
        for v in 0..self.i_size() {
            let _ = writeln!(
                s,
                "  \"{}\" [shape=circle, label=\"{}\\n{}\"];",
                self.labels[v],
                self.labels[v],
                self.i_degree(v)
            );
        }
        if expand_k {
            for c in 1..=self.k_size {
                let _ = writeln!(s, "  k{c} [shape=point, xlabel=\"{c}\"];");
            }
            for c in 1..=self.k_size {
                for d in c + 1..=self.k_size {
                    let _ = writeln!(s, "  k{c} -- k{d} [color=gray];");
                }
            }
            for v in 0..self.i_size() {
                for c in self.neighborhood(v) {
                    let _ = writeln!(s, "  \"{}\" -- k{c};", self.labels[v]);
                }
            }
        } else {
            let _ = writeln!(s, "  K [shape=box, label=\"K\\n{}\"];", self.k_size);
            for v in 0..self.i_size() {
                let _ = writeln!(s, "  \"{}\" -- K [label={}];", self.labels[v], self.i_degree(v));
            }
        }
        s.push_str("}\n");
        s
    }
}

type Matching = [(usize, usize); 2];

fn canonical(m: Matching) -> Matching {
    let mut e = m.map(|(a, b)| (a.min(b), a.max(b)));
    e.sort_unstable();
    e
}

/// Every 2-switch on the four given vertices, keyed by (removed, added).
fn switches_on(s: &SplitGraph, [a, b, c, d]: [usize; 4]) -> Vec<(Matching, Matching)> {
    let matchings = [[(a, b), (c, d)], [(a, c), (b, d)], [(a, d), (b, c)]];
    let mut out = Vec::new();
    for (i, &removed) in matchings.iter().enumerate() {
        if !removed.iter().all(|&(p, q)| s.adjacent(p, q)) {
            continue;
        }
        for (j, &added) in matchings.iter().enumerate() {
            if i != j && added.iter().all(|&(p, q)| !s.adjacent(p, q)) {
                out.push((canonical(removed), canonical(added)));
            }
        }
    }
    out
}

/// The factor multigraph on the independent vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorGraph {
    labels: Vec<String>,
    degrees: Vec<u64>,
    sigma: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FactorEdge {
    pub u: usize,
    pub v: usize,
    pub multiplicity: u64,
}

pub fn factor_graph(s: &SplitGraph) -> FactorGraph {
    let m = s.i_size();
    let mut sigma = vec![vec![0; m]; m];
    for u in 0..m {
        for v in u + 1..m {
            let w = s.sigma_unchecked(u, v);
            sigma[u][v] = w;
            sigma[v][u] = w;
        }
    }
    FactorGraph { labels: s.labels.clone(), degrees: s.i_degrees(), sigma }
}

impl FactorGraph {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> u64 {
        self.sigma[u][v]
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        u != v && self.sigma[u][v] > 0
    }

    /// Edges with positive multiplicity, `u < v`, ascending.
    pub fn edges(&self) -> Vec<FactorEdge> {
        let m = self.len();
        (0..m)
            .flat_map(|u| (u + 1..m).map(move |v| (u, v)))
            .filter(|&(u, v)| self.sigma[u][v] > 0)
            .map(|(u, v)| FactorEdge { u, v, multiplicity: self.sigma[u][v] })
            .collect()
    }

    /// Sum of multiplicities; equals the number of 2-switches of the graph.
    pub fn weighted_edge_count(&self) -> u64 {
        self.edges().iter().map(|e| e.multiplicity).sum()
    }

    /// Connectivity of the underlying simple graph. The empty graph counts
    /// as connected.
    pub fn is_connected(&self) -> bool {
        let m = self.len();
        if m == 0 {
            return true;
        }
        let mut seen = vec![false; m];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for v in 0..m {
                if !seen[v] && self.adjacent(u, v) {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|b| b)
    }

    /// Edges are written from the lower-degree end; `dir=both` marks equal
    /// degrees.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph Phi {\n");
        for (l, d) in self.labels.iter().zip(&self.degrees) {
            let _ = writeln!(s, "  \"{l}\" [shape=circle, xlabel=\"{d}\"];");
        }
        for e in self.edges() {
            let (mut u, mut v) = (e.u, e.v);
            if self.degrees[u] > self.degrees[v] {
                std::mem::swap(&mut u, &mut v);
            }
            let dir = if self.degrees[u] == self.degrees[v] { "both" } else { "forward" };
            let _ = writeln!(
                s,
                "  \"{}\" -- \"{}\" [label={}, dir={dir}];",
                self.labels[u], self.labels[v], e.multiplicity
            );
        }
        s.push_str("}\n");
        s
    }
}

impl Serialize for FactorGraph {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(rename_all = "camelCase")]
        struct Repr<'a> {
            vertices: &'a [String],
            degrees: &'a [u64],
            edges: Vec<FactorEdge>,
            weighted_edge_count: u64,
        }
        Repr {
            vertices: &self.labels,
            degrees: &self.degrees,
            edges: self.edges(),
            weighted_edge_count: self.weighted_edge_count(),
        }
        .serialize(ser)
    }
}

/// Arcs `(u, v)` with `d_u <= d_v` and `sigma_uv > 0`, ascending. Equal
/// degrees give both directions.
pub fn flow_orientation(s: &SplitGraph) -> Vec<(usize, usize)> {
    let phi = factor_graph(s);
    let d = s.i_degrees();
    let m = s.i_size();
    let mut arcs = Vec::new();
    for u in 0..m {
        for v in 0..m {
            if phi.adjacent(u, v) && d[u] <= d[v] {
                arcs.push((u, v));
            }
        }
    }
    arcs
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TriangleType {
    /// All three degrees distinct: the transitive orientation.
    #[serde(rename = "delta0")]
    Delta0,
    /// Two equal degrees below a strict maximum.
    #[serde(rename = "delta1plus")]
    Delta1Plus,
    /// Two equal degrees above a strict minimum.
    #[serde(rename = "delta1minus")]
    Delta1Minus,
    #[serde(rename = "delta3")]
    Delta3,
}

pub fn triangle_type(s: &SplitGraph, [a, b, c]: [usize; 3]) -> Result<TriangleType> {
    for (u, v) in [(a, b), (b, c), (a, c)] {
        if s.sigma(u, v)? == 0 {
            return Err(Error::Invalid(format!(
                "{} and {} are not adjacent in the factor graph",
                s.labels[u], s.labels[v]
            )));
        }
    }
    let mut d = [s.i_degree(a), s.i_degree(b), s.i_degree(c)];
    d.sort_unstable();
    Ok(match (d[0] == d[1], d[1] == d[2]) {
        (false, false) => TriangleType::Delta0,
        (true, false) => TriangleType::Delta1Plus,
        (false, true) => TriangleType::Delta1Minus,
        (true, true) => TriangleType::Delta3,
    })
}

/// `|I| = 3`, every multiplicity equals `n`, and the orientation is
/// transitive.
pub fn is_n_simple_type0_triangle(s: &SplitGraph, n: u64) -> bool {
    if s.i_size() != 3 || n == 0 {
        return false;
    }
    let all_n = [(0, 1), (1, 2), (0, 2)]
        .iter()
        .all(|&(u, v)| s.sigma_unchecked(u, v) == n);
    all_n && triangle_type(s, [0, 1, 2]) == Ok(TriangleType::Delta0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GraphStats {
    pub omega: usize,
    pub alpha_num: usize,
    pub balanced: bool,
    /// Number of vertices lying in some 2-switch.
    pub active_vertices: usize,
    pub inactive: Vec<String>,
    pub phi_connected: bool,
    pub indecomposable_active: bool,
}

impl GraphStats {
    pub fn all_active(&self) -> bool {
        self.inactive.is_empty()
    }
}

pub fn graph_stats(s: &SplitGraph) -> GraphStats {
    let k = s.k_size;
    let omega = if s.nbhd.iter().any(|n| n.count_ones(..) == k) { k + 1 } else { k };
    let covered = s.nbhd.iter().fold(FixedBitSet::with_capacity(k), |mut acc, n| {
        acc.union_with(n);
        acc
    });
    let alpha_num = if covered.count_ones(..) < k { s.i_size() + 1 } else { s.i_size() };
    let active = s.active_vertices();
    let inactive: Vec<String> = active
        .iter()
        .enumerate()
        .filter(|(_, &a)| !a)
        .map(|(p, _)| s.vertex_name(p))
        .collect();
    let phi_connected = factor_graph(s).is_connected();
    GraphStats {
        omega,
        alpha_num,
        balanced: k == omega && s.i_size() == alpha_num,
        active_vertices: active.len() - inactive.len(),
        indecomposable_active: inactive.is_empty() && phi_connected,
        inactive,
        phi_connected,
    }
}

/// All induced cycles of the underlying simple graph of `phi`, each listed
/// from its smallest vertex, in ascending order.
pub fn induced_cycles(phi: &FactorGraph) -> Vec<Vec<usize>> {
    fn extend(phi: &FactorGraph, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let s = path[0];
        let last = *path.last().unwrap();
        for w in s + 1..phi.len() {
            if !phi.adjacent(last, w) || path.contains(&w) {
                continue;
            }
            // no chord from w back to an interior vertex
            if path.len() > 2 && path[1..path.len() - 1].iter().any(|&p| phi.adjacent(w, p)) {
                continue;
            }
            if path.len() >= 2 && phi.adjacent(w, s) {
                if path[1] < w {
                    let mut cycle = path.clone();
                    cycle.push(w);
                    out.push(cycle);
                }
                continue;
            }
            path.push(w);
            extend(phi, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    for s in 0..phi.len() {
        extend(phi, &mut vec![s], &mut out);
    }
    out.sort();
    out
}

/// Induced cycles of the factor graph whose edges all have multiplicity `n`.
/// Every induced cycle of a factor graph has length at most 4; a longer one
/// is reported as an error.
pub fn n_simple_induced_cycles(s: &SplitGraph, n: u64) -> Result<Vec<Vec<usize>>> {
    let phi = factor_graph(s);
    let cycles = induced_cycles(&phi);
    if let Some(c) = cycles.iter().find(|c| c.len() > 4) {
        return Err(Error::Falsified(format!("induced cycle of length {} in the factor graph", c.len())));
    }
    Ok(cycles
        .into_iter()
        .filter(|c| (0..c.len()).all(|i| phi.multiplicity(c[i], c[(i + 1) % c.len()]) == n))
        .collect())
}

/// A split graph with `|K|` in `1..=max_k`, `|I|` in `1..=max_i`, and each
/// clique-independent edge present with probability 1/2.
pub fn random_split_graph<R: Rng>(rng: &mut R, max_k: usize, max_i: usize) -> SplitGraph {
    let k = rng.gen_range(1..=max_k);
    let m = rng.gen_range(1..=max_i);
    let nbhds = (0..m)
        .map(|_| (1..=k).filter(|_| rng.gen_bool(0.5)).collect())
        .collect();
    SplitGraph::new(k, nbhds).expect("labels in range by construction")
}

pub fn random_corpus(seed: u64, count: usize, max_k: usize, max_i: usize) -> Vec<SplitGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_split_graph(&mut rng, max_k, max_i)).collect()
}

/// Connected components of the underlying simple graph of `phi`.
pub fn phi_components(phi: &FactorGraph) -> Vec<BTreeSet<usize>> {
    let m = phi.len();
    let mut comp: Vec<BTreeSet<usize>> = Vec::new();
    let mut seen = vec![false; m];
    for start in 0..m {
        if seen[start] {
            continue;
        }
        let mut set = BTreeSet::new();
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(u) = stack.pop() {
            set.insert(u);
            for v in 0..m {
                if !seen[v] && phi.adjacent(u, v) {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        comp.push(set);
    }
    comp
}
