//! Parameterized reduction from k-clique to dominating sets of size
//! `k + C(k,2)`, with a harness that checks the equivalence on small graphs.
//!
//! The instance `H = (W, F)` is laid out block by block:
//!
//! 1. for every `i < k`: `new(i)`, then the copy `v(i)` of every vertex `v`;
//! 2. for every pair `i < j`: the tuple vertices `(i, j, u(i), v(j))` for all
//!    `u, v` (row-major in `u`);
//! 3. for every pair `i < j`: `new(i,j)`, then the copy `e(i,j)` of every
//!    edge `e` of `G` in canonical edge order.
//!
//! Pairs `(i, j)` are enumerated lexicographically, so the construction is
//! byte-reproducible.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{find_clique, has_dominating_set_of_size, pair_count, Edge, Graph, Vertex, VertexSet};
use crate::rng::RngStream;

/// Role of a vertex of `H`. Block indices and vertices are 0-based here and
/// printed 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VertexLabel {
    New { i: usize },
    Copy { i: usize, v: Vertex },
    Tuple { i: usize, j: usize, u: Vertex, v: Vertex },
    NewPair { i: usize, j: usize },
    EdgeCopy { i: usize, j: usize, edge: Edge },
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            VertexLabel::New { i } => write!(f, "new({})", i + 1),
            VertexLabel::Copy { i, v } => write!(f, "{}({})", v + 1, i + 1),
            VertexLabel::Tuple { i, j, u, v } => {
                write!(f, "({},{},{}({}),{}({}))", i + 1, j + 1, u + 1, i + 1, v + 1, j + 1)
            }
            VertexLabel::NewPair { i, j } => write!(f, "new({},{})", i + 1, j + 1),
            VertexLabel::EdgeCopy { i, j, edge } => {
                write!(f, "{{{},{}}}({},{})", edge.u() + 1, edge.v() + 1, i + 1, j + 1)
            }
        }
    }
}

/// The dominating-set instance produced from `(G, k)`.
#[derive(Clone, Debug)]
pub struct DsInstance {
    pub graph: Graph,
    pub target_size: usize,
    pub k: usize,
    pub labels: Vec<VertexLabel>,
    source_n: usize,
    source_edges: Vec<Edge>,
}

/// `h(k) = k + C(k, 2)`, the new parameter; depends on `k` only.
pub fn target_size(k: usize) -> usize {
    k + k * k.saturating_sub(1) / 2
}

/// `|W| = k(1+n) + C(k,2) n² + C(k,2)(1+m)`.
pub fn instance_vertex_count(n: usize, m: usize, k: usize) -> usize {
    let pairs = pair_count(k);
    k * (1 + n) + pairs * n * n + pairs * (1 + m)
}

struct Layout {
    n: usize,
    k: usize,
    m: usize,
    edge_rank: BTreeMap<Edge, usize>,
}

impl Layout {
    fn pair_rank(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.k);
        Edge::new(i, j).index(self.k)
    }

    fn new_vertex(&self, i: usize) -> usize {
        i * (self.n + 1)
    }

    fn copy(&self, i: usize, v: Vertex) -> usize {
        i * (self.n + 1) + 1 + v
    }

    fn tuple(&self, i: usize, j: usize, u: Vertex, v: Vertex) -> usize {
        self.k * (self.n + 1) + self.pair_rank(i, j) * self.n * self.n + u * self.n + v
    }

    fn new_pair(&self, i: usize, j: usize) -> usize {
        self.k * (self.n + 1) + pair_count(self.k) * self.n * self.n + self.pair_rank(i, j) * (1 + self.m)
    }

    fn edge_copy(&self, i: usize, j: usize, e: Edge) -> usize {
        self.new_pair(i, j) + 1 + self.edge_rank[&e]
    }
}

/// Build `H` from `(G, k)`. Requires `k >= 2` and at least one edge.
pub fn reduce_clique_to_ds(g: &Graph, k: usize) -> Result<DsInstance> {
    if k < 2 {
        return Err(Error::param(format!("k = {k}: the reduction needs k >= 2")));
    }
    let edges: Vec<Edge> = g.edges().collect();
    if edges.is_empty() {
        return Err(Error::param("the reduction needs a graph with at least one edge"));
    }
    let n = g.n();
    let layout = Layout {
        n,
        k,
        m: edges.len(),
        edge_rank: edges.iter().enumerate().map(|(r, e)| (*e, r)).collect(),
    };
    let size = instance_vertex_count(n, edges.len(), k);

    let mut labels = Vec::with_capacity(size);
    for i in 0..k {
        labels.push(VertexLabel::New { i });
        labels.extend((0..n).map(|v| VertexLabel::Copy { i, v }));
    }
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
    for &(i, j) in &pairs {
        for u in 0..n {
            labels.extend((0..n).map(|v| VertexLabel::Tuple { i, j, u, v }));
        }
    }
    for &(i, j) in &pairs {
        labels.push(VertexLabel::NewPair { i, j });
        labels.extend(edges.iter().map(|&edge| VertexLabel::EdgeCopy { i, j, edge }));
    }
    debug_assert_eq!(labels.len(), size);

    let mut f = Vec::new();
    let clique = |members: &[usize], f: &mut Vec<(usize, usize)>| {
        for (a, &x) in members.iter().enumerate() {
            for &y in &members[a + 1..] {
                f.push((x, y));
            }
        }
    };
    for i in 0..k {
        let block: Vec<usize> = std::iter::once(layout.new_vertex(i))
            .chain((0..n).map(|v| layout.copy(i, v)))
            .collect();
        clique(&block, &mut f);
    }
    for &(i, j) in &pairs {
        let block: Vec<usize> = std::iter::once(layout.new_pair(i, j))
            .chain(edges.iter().map(|&e| layout.edge_copy(i, j, e)))
            .collect();
        clique(&block, &mut f);
    }
    for &(i, j) in &pairs {
        for u in 0..n {
            for v in 0..n {
                let t = layout.tuple(i, j, u, v);
                f.extend((0..n).filter(|&w| w != u).map(|w| (t, layout.copy(i, w))));
                f.extend((0..n).filter(|&w| w != v).map(|w| (t, layout.copy(j, w))));
                if u != v && g.has_edge(u, v) {
                    f.push((t, layout.edge_copy(i, j, Edge::new(u, v))));
                }
            }
        }
    }
    Ok(DsInstance {
        graph: Graph::from_edges(size, f)?,
        target_size: target_size(k),
        k,
        labels,
        source_n: n,
        source_edges: edges,
    })
}

impl DsInstance {
    fn layout(&self) -> Layout {
        Layout {
            n: self.source_n,
            k: self.k,
            m: self.source_edges.len(),
            edge_rank: self.source_edges.iter().enumerate().map(|(r, e)| (*e, r)).collect(),
        }
    }

    /// JSON sidecar: `{"target_size": k', "labels": {"1": "new(1)", ...}}`
    /// with 1-based vertex keys.
    pub fn sidecar_json(&self) -> serde_json::Value {
        let labels: serde_json::Map<String, serde_json::Value> = self
            .labels
            .iter()
            .enumerate()
            .map(|(w, l)| ((w + 1).to_string(), serde_json::Value::String(l.to_string())))
            .collect();
        serde_json::json!({
            "target_size": self.target_size,
            "k": self.k,
            "labels": labels,
        })
    }
}

/// `D(C) = {u_1(1), .., u_k(k)} ∪ {{u_i,u_j}(i,j) | i < j}` for a `k`-clique
/// `C = {u_1 < .. < u_k}`; checked to dominate `H`.
pub fn clique_to_ds_witness(g: &Graph, clique: &VertexSet, inst: &DsInstance) -> Result<VertexSet> {
    if g.n() != inst.source_n {
        return Err(Error::SizeMismatch {
            left: g.n(),
            right: inst.source_n,
        });
    }
    if clique.len() != inst.k || !g.is_clique(clique) {
        return Err(Error::param(format!("input is not a {}-clique of G", inst.k)));
    }
    let layout = inst.layout();
    let us = clique.to_vec();
    let mut d: Vec<usize> = us.iter().enumerate().map(|(i, &u)| layout.copy(i, u)).collect();
    for i in 0..inst.k {
        for j in i + 1..inst.k {
            d.push(layout.edge_copy(i, j, Edge::new(us[i], us[j])));
        }
    }
    let set = VertexSet::from_vertices(inst.graph.n(), d)?;
    if !inst.graph.is_dominating(&set) {
        return Err(Error::Infeasible("witness does not dominate H".into()));
    }
    Ok(set)
}

// ---------------------------------------------------------------------------
// Verification harness

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    /// Every graph on exactly `n_max` vertices.
    Exhaustive,
    /// `count` graphs from `ER(n_max, 1/2)`, graph `i` drawn from stream
    /// `(seed, i)`.
    Sampled { count: usize, seed: u64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct Mismatch {
    pub graph: String,
    pub k: usize,
    pub has_clique: bool,
    pub has_dominating_set: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    pub n: usize,
    pub ks: Vec<usize>,
    pub graphs: usize,
    pub skipped_edgeless: usize,
    pub checks: usize,
    pub cliques_found: usize,
    pub mismatches: Vec<Mismatch>,
    pub witness_failures: usize,
    #[serde(skip)]
    pub elapsed_ms: u128,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.witness_failures == 0
    }
}

/// Largest `n` accepted by exhaustive verification.
pub const EXHAUSTIVE_N_MAX: usize = 4;

/// Compare `has_clique(G, k)` with the existence of a dominating set of size
/// `k + C(k,2)` in the reduced instance, and check `D(C)` for every clique
/// found. Edgeless graphs are skipped (the reduction needs an edge).
pub fn verify_equivalence(n_max: usize, ks: &[usize], mode: VerifyMode) -> Result<EquivalenceReport> {
    if let Some(&k) = ks.iter().find(|&&k| k < 2) {
        return Err(Error::param(format!("k = {k}: the reduction needs k >= 2")));
    }
    let graphs: Vec<Graph> = match mode {
        VerifyMode::Exhaustive => {
            if n_max > EXHAUSTIVE_N_MAX {
                let kmax = ks.iter().copied().max().unwrap_or(2);
                return Err(Error::Infeasible(format!(
                    "exhaustive mode at n = {n_max}: 2^{} graphs, instances up to {} vertices; \
                     use n <= {EXHAUSTIVE_N_MAX} or sampled mode",
                    pair_count(n_max),
                    instance_vertex_count(n_max, pair_count(n_max), kmax)
                )));
            }
            (0..1u64 << pair_count(n_max))
                .map(|mask| Graph::from_mask(n_max, mask))
                .collect()
        }
        VerifyMode::Sampled { count, seed } => (0..count)
            .map(|i| crate::random::sample_er(n_max, 0.5, RngStream::new(seed, i as u64)))
            .collect::<Result<_>>()?,
    };
    let started = Instant::now();
    let skipped = graphs.iter().filter(|g| g.edge_count() == 0).count();
    let jobs: Vec<(&Graph, usize)> = graphs
        .iter()
        .filter(|g| g.edge_count() > 0)
        .flat_map(|g| ks.iter().map(move |&k| (g, k)))
        .collect();
    let outcomes: Vec<(Option<Mismatch>, bool, bool)> = jobs
        .par_iter()
        .map(|&(g, k)| {
            let inst = reduce_clique_to_ds(g, k).expect("k >= 2 and E nonempty");
            let clique = find_clique(g, k);
            let ds = has_dominating_set_of_size(&inst.graph, inst.target_size);
            let witness_ok = clique
                .as_ref()
                .is_none_or(|c| clique_to_ds_witness(g, c, &inst).is_ok());
            let mismatch = (clique.is_some() != ds).then(|| Mismatch {
                graph: format!("{g:?}"),
                k,
                has_clique: clique.is_some(),
                has_dominating_set: ds,
            });
            (mismatch, clique.is_some(), witness_ok)
        })
        .collect();
    Ok(EquivalenceReport {
        n: n_max,
        ks: ks.to_vec(),
        graphs: graphs.len(),
        skipped_edgeless: skipped,
        checks: outcomes.len(),
        cliques_found: outcomes.iter().filter(|o| o.1).count(),
        witness_failures: outcomes.iter().filter(|o| !o.2).count(),
        mismatches: outcomes.into_iter().filter_map(|o| o.0).collect(),
        elapsed_ms: started.elapsed().as_millis(),
    })
}
