//! Clique-style random restrictions `C^{ℓ,q}_n`, their composition, the
//! parameter schedule used by the indistinguishability argument, and exact
//! restriction of edge functions.

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::boolfn::{EdgeDnf, EdgeFunction, TruthTable};
use crate::error::{Error, Result};
use crate::graph::{all_edges, pair_count, Edge, Graph, VertexSet};
use crate::rng::StreamRng;

/// A partial assignment to the edge variables on `n` vertices that leaves
/// exactly the edges inside `star` free and fixes every other edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Restriction {
    n: usize,
    star: VertexSet,
    fixed: FixedBitSet,
}

impl Restriction {
    /// `fixed(e)` is consulted only for edges outside `star`.
    pub fn new(n: usize, star: VertexSet, fixed: impl Fn(Edge) -> bool) -> Result<Self> {
        if star.universe() != n {
            return Err(Error::SizeMismatch {
                left: star.universe(),
                right: n,
            });
        }
        let mut bits = FixedBitSet::with_capacity(pair_count(n));
        for (i, e) in all_edges(n).enumerate() {
            if !(star.contains(e.u()) && star.contains(e.v())) && fixed(e) {
                bits.insert(i);
            }
        }
        Ok(Restriction { n, star, fixed: bits })
    }

    pub fn all_star(n: usize) -> Self {
        Restriction {
            n,
            star: VertexSet::full(n),
            fixed: FixedBitSet::with_capacity(pair_count(n)),
        }
    }

    /// The total assignment given by the edges of `g`.
    pub fn total(g: &Graph) -> Self {
        Restriction {
            n: g.n(),
            star: VertexSet::empty(g.n()),
            fixed: g.edge_bits().clone(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn star(&self) -> &VertexSet {
        &self.star
    }

    pub fn is_star(&self, e: Edge) -> bool {
        self.star.contains(e.u()) && self.star.contains(e.v())
    }

    /// `None` for a free edge.
    pub fn value(&self, e: Edge) -> Option<bool> {
        if self.is_star(e) {
            None
        } else {
            Some(self.fixed.contains(e.index(self.n)))
        }
    }

    /// Free edges in canonical order.
    pub fn star_edges(&self) -> Vec<Edge> {
        let u = self.star.to_vec();
        let mut out = Vec::with_capacity(pair_count(u.len()));
        for (i, &a) in u.iter().enumerate() {
            for &b in &u[i + 1..] {
                out.push(Edge::new(a, b));
            }
        }
        out
    }

    /// Edges fixed to 1, as a graph on `n` vertices.
    pub fn ones(&self) -> Graph {
        Graph::from_bits(self.n, self.fixed.clone())
    }

    /// `S ∪ μ`: star edges read from `s`, the rest from the restriction.
    pub fn combine(&self, s: &Graph) -> Result<Graph> {
        if s.n() != self.n {
            return Err(Error::SizeMismatch {
                left: s.n(),
                right: self.n,
            });
        }
        let mut bits = self.fixed.clone();
        for e in self.star_edges() {
            bits.set(e.index(self.n), s.contains(e));
        }
        Ok(Graph::from_bits(self.n, bits))
    }

    /// `{"n": n, "star": [..], "fixed": {"u-v": 0|1}}`, vertices 1-based.
    pub fn to_json(&self) -> serde_json::Value {
        let fixed: BTreeMap<String, u8> = all_edges(self.n)
            .filter(|e| !self.is_star(*e))
            .map(|e| (e.to_string(), u8::from(self.fixed.contains(e.index(self.n)))))
            .collect();
        serde_json::to_value(RestrictionJson {
            n: self.n,
            star: self.star.iter().map(|x| x + 1).collect(),
            fixed,
        })
        .expect("restriction JSON is serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RestrictionJson = serde_json::from_str(text)?;
        let n = raw.n;
        let mut star = VertexSet::empty(n);
        for x in raw.star {
            if x == 0 || x > n {
                return Err(Error::VertexOutOfRange { vertex: x, n });
            }
            star.insert(x - 1);
        }
        let mut values = BTreeMap::new();
        for (key, bit) in raw.fixed {
            let e = parse_edge_key(&key, n)?;
            if bit > 1 {
                return Err(Error::param(format!("edge {key} has value {bit}")));
            }
            values.insert(e, bit == 1);
        }
        let r = Restriction::new(n, star, |e| values.get(&e).copied().unwrap_or(false))?;
        let expected = pair_count(n) - pair_count(r.star.len());
        if values.len() != expected || values.keys().any(|e| r.is_star(*e)) {
            return Err(Error::param(
                "fixed part must cover exactly the edges outside the star block",
            ));
        }
        Ok(r)
    }
}

fn parse_edge_key(key: &str, n: usize) -> Result<Edge> {
    let bad = || Error::param(format!("malformed edge key {key:?}"));
    let (a, b) = key.split_once('-').ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    for x in [a, b] {
        if x == 0 || x > n {
            return Err(Error::VertexOutOfRange { vertex: x, n });
        }
    }
    Edge::try_new(a - 1, b - 1)
}

#[derive(Serialize, Deserialize)]
struct RestrictionJson {
    n: usize,
    star: Vec<usize>,
    fixed: BTreeMap<String, u8>,
}

/// Draws `μ ∈ C^{ℓ,q}_n`: a uniform `ℓ`-subset `U` first, then one
/// Bernoulli(q) bit per edge outside `(U choose 2)` in canonical order.
pub fn sample_restriction(n: usize, ell: usize, q: f64, rng: &mut StreamRng) -> Result<Restriction> {
    if ell > n {
        return Err(Error::param(format!("star block size {ell} exceeds n = {n}")));
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::param(format!("q = {q} is not a probability")));
    }
    let star = VertexSet::from_vertices(n, rng.subset(n, ell))?;
    let mut fixed = FixedBitSet::with_capacity(pair_count(n));
    for (i, e) in all_edges(n).enumerate() {
        if !(star.contains(e.u()) && star.contains(e.v())) && rng.bernoulli(q) {
            fixed.insert(i);
        }
    }
    Ok(Restriction { n, star, fixed })
}

/// `μ ∘ π` where `π` lives on the star block of `μ`: local vertex `i` of `π`
/// is the `i`-th smallest member of `μ`'s star set.
pub fn compose_restrictions(mu: &Restriction, pi: &Restriction) -> Result<Restriction> {
    if mu.star.len() != pi.n {
        return Err(Error::SizeMismatch {
            left: mu.star.len(),
            right: pi.n,
        });
    }
    let outer = mu.star.to_vec();
    let mut local = vec![usize::MAX; mu.n];
    for (i, &x) in outer.iter().enumerate() {
        local[x] = i;
    }
    let star = VertexSet::from_vertices(mu.n, pi.star.iter().map(|i| outer[i]))?;
    Restriction::new(mu.n, star, |e| match mu.value(e) {
        Some(b) => b,
        None => pi
            .value(Edge::new(local[e.u()], local[e.v()]))
            .expect("edges outside the composed star are fixed by π"),
    })
}

/// `F↾μ` as a truth table over the star edges of `μ`.
pub fn restrict_function(f: &dyn EdgeFunction, mu: &Restriction) -> Result<TruthTable> {
    if f.n_vertices() != mu.n {
        return Err(Error::SizeMismatch {
            left: f.n_vertices(),
            right: mu.n,
        });
    }
    let vars = mu.star_edges();
    let lookup = vars.clone();
    TruthTable::from_fn(mu.n, vars, |a| {
        f.eval_edges(&|e| match mu.value(e) {
            Some(b) => b,
            None => {
                let i = lookup.binary_search(&e).expect("star edge");
                a >> i & 1 == 1
            }
        })
    })
}

/// Symbolic restriction of a DNF; the result mentions only star edges.
pub fn restrict_dnf(f: &EdgeDnf, mu: &Restriction) -> Result<EdgeDnf> {
    if f.n() != mu.n {
        return Err(Error::SizeMismatch {
            left: f.n(),
            right: mu.n,
        });
    }
    Ok(f.partial(|e| mu.value(e)))
}

/// Minterm DNF of `F↾μ` over its essential variables, with the largest
/// vertex length of its terms.
pub fn restricted_dnf(f: &dyn EdgeFunction, mu: &Restriction) -> Result<(EdgeDnf, usize)> {
    let dnf = restrict_function(f, mu)?.essential().minterm_dnf();
    let r = dnf.max_vertex_length();
    Ok((dnf, r))
}

/// Parameters `q`, `s` and the star-block sizes `ℓ_0 ≥ ℓ_1 ≥ .. ≥ ℓ_d`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Schedule {
    pub n: u64,
    pub k: f64,
    pub size: u64,
    pub depth: u64,
    pub q: f64,
    pub s: u64,
    pub ell: Vec<u64>,
    /// Some `ℓ_i` is 0.
    pub degenerate: bool,
}

/// Relative slack for floors of quantities that are integers in exact
/// arithmetic but come out of `powf`/`ln` slightly below.
const FLOOR_SLACK: f64 = 1e-9;

fn floor_tol(x: f64) -> u64 {
    (x + FLOOR_SLACK * x.abs().max(1.0)).floor().max(0.0) as u64
}

/// `q = n^{-1/k}`, `s = ⌊√(k · log_n(S·d))⌋`, `ℓ_0 = n`,
/// `ℓ_{i+1} = ⌊ℓ_i / n^{5s/k}⌋`.
pub fn restriction_schedule(n: u64, k: f64, size: u64, depth: u64) -> Result<Schedule> {
    if n < 2 {
        return Err(Error::param("schedule needs n >= 2"));
    }
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::param(format!("k = {k} must be positive")));
    }
    if size < n {
        return Err(Error::param(format!("circuit size {size} is below n = {n}")));
    }
    if depth < 1 {
        return Err(Error::param("depth must be at least 1"));
    }
    let ln_n = (n as f64).ln();
    let q = (-ln_n / k).exp();
    let log_n_sd = ((size as f64).ln() + (depth as f64).ln()) / ln_n;
    let s = floor_tol((k * log_n_sd).sqrt());
    let divisor = (5.0 * s as f64 / k * ln_n).exp();
    let mut ell = vec![n];
    for i in 0..depth as usize {
        ell.push(floor_tol(ell[i] as f64 / divisor));
    }
    let degenerate = ell.contains(&0);
    Ok(Schedule {
        n,
        k,
        size,
        depth,
        q,
        s,
        ell,
        degenerate,
    })
}
