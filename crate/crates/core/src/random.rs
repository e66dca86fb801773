//! Erdős–Rényi and planted-clique samplers.

use crate::error::{Error, Result};
use crate::graph::{pair_count, Graph, VertexSet};
use crate::rng::{RngStream, StreamRng};

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param(format!("probability {p} outside [0, 1]")));
    }
    Ok(())
}

/// `G ~ ER(n, p)`: one Bernoulli draw per potential edge in canonical order.
pub fn sample_er(n: usize, p: f64, stream: RngStream) -> Result<Graph> {
    check_probability(p)?;
    Ok(draw_er(n, p, &mut stream.rng()))
}

pub(crate) fn draw_er(n: usize, p: f64, rng: &mut StreamRng) -> Graph {
    let mut g = Graph::empty(n);
    for i in 0..pair_count(n) {
        if rng.bernoulli(p) {
            g.set_bit(i);
        }
    }
    g
}

/// `(G, A) ∈ ER(n, p, c)` together with the planted graph `G + C(A)`.
#[derive(Clone, Debug)]
pub struct PlantedSample {
    pub base: Graph,
    pub planted_set: VertexSet,
    pub planted_graph: Graph,
}

/// Draws the base graph first, then `A` from the same stream.
pub fn sample_planted(n: usize, p: f64, c: usize, stream: RngStream) -> Result<PlantedSample> {
    check_probability(p)?;
    if c > n {
        return Err(Error::param(format!("planted size {c} exceeds n = {n}")));
    }
    let mut rng = stream.rng();
    let base = draw_er(n, p, &mut rng);
    let planted_set = VertexSet::from_vertices(n, rng.subset(n, c))?;
    let planted_graph = base.plant_clique(&planted_set)?;
    Ok(PlantedSample {
        base,
        planted_set,
        planted_graph,
    })
}

/// Edge probability `p` with `p + (1 - p) n^{-1/k} = n^{-1/k'}`: the union of
/// `ER(n, p)` and an independent `ER(n, n^{-1/k})` is `ER(n, n^{-1/k'})`.
pub fn bridge_probability(n: usize, k: f64, k_prime: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::param("bridge probability needs n >= 2"));
    }
    if k.is_nan() || k <= 0.0 || !k_prime.is_finite() {
        return Err(Error::param("k and k' must be positive reals"));
    }
    if k_prime < k {
        return Err(Error::param(format!("k' = {k_prime} is smaller than k = {k}")));
    }
    let nf = n as f64;
    let small = nf.powf(-1.0 / k);
    let target = nf.powf(-1.0 / k_prime);
    Ok(((target - small) / (1.0 - small)).max(0.0))
}
