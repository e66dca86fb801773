//! Simple undirected graphs on `{0, .., n-1}` with a bit table over the
//! `n choose 2` potential edges, plus exact clique and dominating-set solvers.
//!
//! Vertices are 0-based in memory. Every text and JSON format in this crate
//! writes them 1-based.

use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

pub type Vertex = usize;

/// Number of potential edges on `n` vertices.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Unordered pair `{u, v}` stored with `u < v`.
///
/// The derived ordering is lexicographic on `(u, v)`, which is the canonical
/// edge order used everywhere (bit tables, truth-table variables, renumbering
/// inside restrictions).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    u: Vertex,
    v: Vertex,
}

impl Edge {
    /// Panics on a loop.
    pub fn new(a: Vertex, b: Vertex) -> Self {
        assert_ne!(a, b, "loops are not edges");
        if a < b {
            Edge { u: a, v: b }
        } else {
            Edge { u: b, v: a }
        }
    }

    pub fn try_new(a: Vertex, b: Vertex) -> Result<Self> {
        if a == b {
            return Err(Error::param(format!("loop at vertex {}", a + 1)));
        }
        Ok(Edge::new(a, b))
    }

    pub fn u(&self) -> Vertex {
        self.u
    }

    pub fn v(&self) -> Vertex {
        self.v
    }

    /// Position in the canonical order of edges over `n` vertices.
    pub fn index(&self, n: usize) -> usize {
        debug_assert!(self.v < n);
        self.u * n - self.u * (self.u + 1) / 2 + (self.v - self.u - 1)
    }

    pub fn contains(&self, x: Vertex) -> bool {
        self.u == x || self.v == x
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.u + 1, self.v + 1)
    }
}

/// All edges of `K_n` in canonical order.
pub fn all_edges(n: usize) -> impl Iterator<Item = Edge> {
    (0..n).flat_map(move |u| (u + 1..n).map(move |v| Edge { u, v }))
}

/// A subset of `{0, .., n-1}` with O(1) cardinality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    bits: FixedBitSet,
    len: usize,
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        VertexSet {
            bits: FixedBitSet::with_capacity(n),
            len: 0,
        }
    }

    pub fn full(n: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(n);
        bits.insert_range(..);
        VertexSet { bits, len: n }
    }

    pub fn from_vertices(n: usize, vertices: impl IntoIterator<Item = Vertex>) -> Result<Self> {
        let mut set = VertexSet::empty(n);
        for x in vertices {
            if x >= n {
                return Err(Error::VertexOutOfRange { vertex: x + 1, n });
            }
            set.insert(x);
        }
        Ok(set)
    }

    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, x: Vertex) -> bool {
        self.bits.contains(x)
    }

    pub fn insert(&mut self, x: Vertex) {
        if !self.bits.put(x) {
            self.len += 1;
        }
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.bits.ones()
    }

    pub fn to_vec(&self) -> Vec<Vertex> {
        self.iter().collect()
    }

    pub fn as_bits(&self) -> &FixedBitSet {
        &self.bits
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|x| x + 1)).finish()
    }
}

/// Simple undirected graph on `{0, .., n-1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: FixedBitSet,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: FixedBitSet::with_capacity(pair_count(n)),
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        g.edges.insert_range(..);
        g
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self> {
        let mut g = Graph::empty(n);
        for (a, b) in edges {
            for x in [a, b] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x + 1, n });
                }
            }
            g.edges.insert(Edge::try_new(a, b)?.index(n));
        }
        Ok(g)
    }

    /// Graph whose edge table is exactly `bits` (length `n choose 2`).
    pub fn from_bits(n: usize, bits: FixedBitSet) -> Self {
        assert_eq!(bits.len(), pair_count(n));
        Graph { n, edges: bits }
    }

    /// The graph on `n` vertices whose edge set is given by the bits of
    /// `mask` in canonical edge order. Only meaningful for `n choose 2 <= 64`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        let mut g = Graph::empty(n);
        for i in 0..pair_count(n) {
            if mask >> i & 1 == 1 {
                g.edges.insert(i);
            }
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.count_ones(..)
    }

    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        a != b && self.edges.contains(Edge::new(a, b).index(self.n))
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.edges.contains(e.index(self.n))
    }

    pub fn bit(&self, index: usize) -> bool {
        self.edges.contains(index)
    }

    pub fn edge_bits(&self) -> &FixedBitSet {
        &self.edges
    }

    pub(crate) fn set_bit(&mut self, index: usize) {
        self.edges.insert(index);
    }

    /// Edges in canonical order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        all_edges(self.n).filter(move |e| self.contains(*e))
    }

    pub fn neighbors(&self, x: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.n).filter(move |&y| self.has_edge(x, y))
    }

    pub fn adjacency(&self) -> Vec<FixedBitSet> {
        let mut rows = vec![FixedBitSet::with_capacity(self.n); self.n];
        for e in self.edges() {
            rows[e.u].insert(e.v);
            rows[e.v].insert(e.u);
        }
        rows
    }

    /// `G + C(A)`: `a` completed into a clique.
    pub fn plant_clique(&self, a: &VertexSet) -> Result<Graph> {
        if a.universe() > self.n {
            if let Some(bad) = a.iter().find(|&x| x >= self.n) {
                return Err(Error::VertexOutOfRange {
                    vertex: bad + 1,
                    n: self.n,
                });
            }
        }
        let mut out = self.clone();
        let members = a.to_vec();
        for (i, &x) in members.iter().enumerate() {
            for &y in &members[i + 1..] {
                out.edges.insert(Edge::new(x, y).index(self.n));
            }
        }
        Ok(out)
    }

    /// `H ∪ G` on a shared vertex set.
    pub fn union(&self, other: &Graph) -> Result<Graph> {
        if self.n != other.n {
            return Err(Error::SizeMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let mut out = self.clone();
        out.edges.union_with(&other.edges);
        Ok(out)
    }

    pub fn is_clique(&self, set: &VertexSet) -> bool {
        let members = set.to_vec();
        members
            .iter()
            .enumerate()
            .all(|(i, &x)| members[i + 1..].iter().all(|&y| self.has_edge(x, y)))
    }

    pub fn is_dominating(&self, set: &VertexSet) -> bool {
        (0..self.n).all(|x| set.contains(x) || self.neighbors(x).any(|y| set.contains(y)))
    }

    /// Serialize as `n m` followed by one `u v` line per edge (1-based).
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edge_count());
        for e in self.edges() {
            out.push_str(&format!("{} {}\n", e.u + 1, e.v + 1));
        }
        out
    }

    /// Parse the edge-list format. Lines starting with `#` are skipped.
    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
        let (n, m) = parse_pair(hline, header)?;
        let mut g = Graph::empty(n);
        let mut seen = 0;
        for (line, body) in lines {
            let (a, b) = parse_pair(line, body)?;
            if a == 0 || b == 0 || a > n || b > n {
                return Err(Error::parse(line, format!("endpoint out of range 1..={n}")));
            }
            if a == b {
                return Err(Error::parse(line, "loop"));
            }
            if a > b {
                return Err(Error::parse(line, "endpoints must satisfy u < v"));
            }
            let idx = Edge::new(a - 1, b - 1).index(n);
            if g.edges.put(idx) {
                return Err(Error::parse(line, "duplicate edge"));
            }
            seen += 1;
        }
        if seen != m {
            return Err(Error::parse(1, format!("header declares {m} edges, found {seen}")));
        }
        Ok(g)
    }
}

fn parse_pair(line: usize, body: &str) -> Result<(usize, usize)> {
    let mut it = body.split_whitespace();
    let mut next = || -> Result<usize> {
        it.next()
            .ok_or_else(|| Error::parse(line, "expected two integers"))?
            .parse()
            .map_err(|_| Error::parse(line, "not a natural number"))
    };
    let pair = (next()?, next()?);
    if it.next().is_some() {
        return Err(Error::parse(line, "trailing tokens"));
    }
    Ok(pair)
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, [", self.n)?;
        for (i, e) in self.edges().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "])")
    }
}

// ---------------------------------------------------------------------------
// Cliques

struct CliqueSearch<'a> {
    adj: &'a [FixedBitSet],
    current: Vec<Vertex>,
    best: Vec<Vertex>,
    /// Stop as soon as a clique of this size is found.
    stop_at: usize,
}

impl CliqueSearch<'_> {
    fn done(&self) -> bool {
        self.best.len() >= self.stop_at
    }

    fn expand(&mut self, mut candidates: FixedBitSet) {
        let (order, colors) = greedy_color(self.adj, &candidates);
        for i in (0..order.len()).rev() {
            if self.current.len() + colors[i] <= self.best.len() {
                return;
            }
            let v = order[i];
            self.current.push(v);
            let mut next = candidates.clone();
            next.intersect_with(&self.adj[v]);
            if next.is_clear() {
                if self.current.len() > self.best.len() {
                    self.best = self.current.clone();
                }
            } else {
                self.expand(next);
            }
            self.current.pop();
            if self.done() {
                return;
            }
            candidates.set(v, false);
        }
    }
}

/// Sequential greedy coloring. Returns vertices with nondecreasing color
/// numbers; `colors[i]` bounds the clique size inside `order[..=i]`.
fn greedy_color(adj: &[FixedBitSet], candidates: &FixedBitSet) -> (Vec<Vertex>, Vec<usize>) {
    let mut uncolored = candidates.clone();
    let mut order = Vec::with_capacity(candidates.count_ones(..));
    let mut colors = Vec::with_capacity(order.capacity());
    let mut color = 0;
    while !uncolored.is_clear() {
        color += 1;
        let mut q = uncolored.clone();
        while let Some(v) = q.minimum() {
            q.set(v, false);
            uncolored.set(v, false);
            q.difference_with(&adj[v]);
            order.push(v);
            colors.push(color);
        }
    }
    (order, colors)
}

fn clique_search(g: &Graph, stop_at: usize) -> Vec<Vertex> {
    let adj = g.adjacency();
    let mut search = CliqueSearch {
        adj: &adj,
        current: Vec::new(),
        best: Vec::new(),
        stop_at,
    };
    if g.n > 0 {
        let mut all = FixedBitSet::with_capacity(g.n);
        all.insert_range(..);
        search.expand(all);
    }
    search.best
}

/// A maximum clique (branch and bound with greedy-coloring bounds).
pub fn max_clique(g: &Graph) -> VertexSet {
    let best = clique_search(g, usize::MAX);
    VertexSet::from_vertices(g.n, best).expect("solver returns vertices of g")
}

/// Clique number; 0 for the graph without vertices.
pub fn max_clique_size(g: &Graph) -> usize {
    clique_search(g, usize::MAX).len()
}

pub fn has_clique(g: &Graph, k: usize) -> bool {
    find_clique(g, k).is_some()
}

/// Some clique of size exactly `k`, if one exists.
pub fn find_clique(g: &Graph, k: usize) -> Option<VertexSet> {
    if k > g.n {
        return None;
    }
    let mut found = clique_search(g, k.max(1));
    if k == 0 {
        found.clear();
    }
    if found.len() < k {
        return None;
    }
    found.truncate(k);
    Some(VertexSet::from_vertices(g.n, found).expect("solver returns vertices of g"))
}

// ---------------------------------------------------------------------------
// Dominating sets

fn closed_neighborhoods(g: &Graph) -> Vec<FixedBitSet> {
    let mut rows = g.adjacency();
    for (x, row) in rows.iter_mut().enumerate() {
        row.insert(x);
    }
    rows
}

fn ds_search(
    closed: &[FixedBitSet],
    dominated: &FixedBitSet,
    budget: usize,
    widest: usize,
    chosen: &mut Vec<Vertex>,
) -> bool {
    let missing = dominated.len() - dominated.count_ones(..);
    if missing == 0 {
        return true;
    }
    if budget == 0 || missing > budget * widest {
        return false;
    }
    // Branch on the undominated vertex with the fewest dominators.
    let pivot = dominated
        .zeroes()
        .min_by_key(|&w| closed[w].count_ones(..))
        .expect("missing > 0");
    for x in closed[pivot].ones() {
        let mut next = dominated.clone();
        next.union_with(&closed[x]);
        chosen.push(x);
        if ds_search(closed, &next, budget - 1, widest, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// A dominating set of size at most `budget`, if one exists.
pub fn find_dominating_set(g: &Graph, budget: usize) -> Option<VertexSet> {
    let closed = closed_neighborhoods(g);
    let widest = closed.iter().map(|r| r.count_ones(..)).max().unwrap_or(0);
    let mut chosen = Vec::new();
    let dominated = FixedBitSet::with_capacity(g.n);
    if ds_search(&closed, &dominated, budget, widest, &mut chosen) {
        Some(VertexSet::from_vertices(g.n, chosen).expect("solver returns vertices of g"))
    } else {
        None
    }
}

/// Whether some dominating set has exactly `k` vertices.
///
/// Supersets of dominating sets dominate, so this holds iff the domination
/// number is at most `k` and `k <= n`.
pub fn has_dominating_set_of_size(g: &Graph, k: usize) -> bool {
    if k > g.n {
        return false;
    }
    find_dominating_set(g, k).is_some()
}

// ---------------------------------------------------------------------------
// Exhaustive twins, the reference oracles for the solvers above.

/// Visit every `k`-subset of `{0, .., n-1}` in colex order of bitmasks.
/// Stops early when `visit` returns true. Requires `n <= 63`.
pub fn any_subset_of_size(n: usize, k: usize, mut visit: impl FnMut(u64) -> bool) -> bool {
    assert!(n <= 63);
    if k > n {
        return false;
    }
    if k == 0 {
        return visit(0);
    }
    let limit = 1u64 << n;
    let mut s: u64 = (1u64 << k) - 1;
    while s < limit {
        if visit(s) {
            return true;
        }
        // Gosper's hack.
        let c = s & s.wrapping_neg();
        let r = s + c;
        s = (((r ^ s) >> 2) / c) | r;
    }
    false
}

fn members(mask: u64) -> impl Iterator<Item = Vertex> {
    (0..64).filter(move |i| mask >> i & 1 == 1)
}

pub fn has_clique_exhaustive(g: &Graph, k: usize) -> bool {
    any_subset_of_size(g.n, k, |s| {
        let vs: Vec<_> = members(s).collect();
        vs.iter()
            .enumerate()
            .all(|(i, &x)| vs[i + 1..].iter().all(|&y| g.has_edge(x, y)))
    })
}

pub fn max_clique_size_exhaustive(g: &Graph) -> usize {
    (0..=g.n).rev().find(|&k| has_clique_exhaustive(g, k)).unwrap_or(0)
}

pub fn has_dominating_set_exhaustive(g: &Graph, k: usize) -> bool {
    let adj: Vec<u64> = (0..g.n)
        .map(|x| g.neighbors(x).fold(1u64 << x, |m, y| m | 1 << y))
        .collect();
    let all = if g.n == 64 { u64::MAX } else { (1u64 << g.n) - 1 };
    any_subset_of_size(g.n, k, |s| members(s).fold(0u64, |acc, x| acc | adj[x]) == all)
}
