//! Fixtures shared by the benchmarks.

use paraac_core::boolfn::TruthTable;
use paraac_core::graph::all_edges;
use paraac_core::random::{sample_er, sample_planted};
use paraac_core::{Graph, RngStream};

pub const SEED: u64 = 99;

/// `ER(n, p)` drawn from stream `(SEED, index)`.
pub fn random_graph(n: usize, p: f64, index: u64) -> Graph {
    sample_er(n, p, RngStream::new(SEED, index)).expect("valid parameters")
}

/// A sparse graph on `n` vertices with a planted clique of size `c`.
pub fn planted_graph(n: usize, c: usize) -> Graph {
    let q = (n as f64).powf(-1.0 / 3.0);
    sample_planted(n, q, c, RngStream::new(SEED, n as u64))
        .expect("valid parameters")
        .planted_graph
}

/// A pseudorandom function of all six edges on four vertices.
pub fn random_function_on_4(index: u64) -> TruthTable {
    let bits = RngStream::new(SEED, index).rng().next_u64();
    TruthTable::from_fn(4, all_edges(4).collect(), |row| bits >> row & 1 == 1).expect("six variables")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_deterministic() {
        assert_eq!(random_graph(20, 0.3, 1), random_graph(20, 0.3, 1));
        assert!(paraac_core::graph::max_clique_size(&planted_graph(64, 8)) >= 8);
        assert_eq!(random_function_on_4(3).num_vars(), 6);
    }
}
