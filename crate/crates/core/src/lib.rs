//! Laboratory code for parameterized lower bounds in bounded-depth circuit
//! complexity: the clique to dominating-set and clique to weighted-SAT
//! reductions, the color-coding hash family, clique-style random
//! restrictions, decision-tree vertex depth, and the planted-clique
//! indistinguishability experiment.

pub mod boolfn;
pub mod circuit;
pub mod colorcoding;
pub mod dtree;
pub mod error;
pub mod experiments;
pub mod formulas;
pub mod graph;
pub mod random;
pub mod reductions;
pub mod restriction;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
pub use graph::{Edge, Graph, Vertex, VertexSet};
pub use rng::RngStream;
