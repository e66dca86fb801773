//! The circuit zoo: small-depth test circuits with fast direct evaluators
//! and DNF forms for restriction experiments.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::boolfn::{star_terms, EdgeDnf, Literal};
use crate::circuit::{Circuit, GateKind};
use crate::dtree::RestrictableDnf;
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};
use crate::restriction::{restrict_dnf, Restriction};

/// Number of fixed vertices a star centre must be adjacent to.
pub const STAR_ARITY: usize = 3;
/// Size of the fixed vertex set probed for a clique.
pub const SET_CLIQUE_SIZE: usize = 3;

/// Configuration name of a zoo member; `custom` loads a circuit JSON file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CircuitSpec {
    Const,
    EdgeProbe,
    Triangle,
    KStar,
    SetClique,
    Custom { path: String },
}

impl CircuitSpec {
    pub fn standard() -> Vec<CircuitSpec> {
        vec![
            CircuitSpec::Const,
            CircuitSpec::EdgeProbe,
            CircuitSpec::Triangle,
            CircuitSpec::KStar,
            CircuitSpec::SetClique,
        ]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ZooEntry {
    /// Constant 1.
    Const,
    /// `X_{1,2}`.
    EdgeProbe,
    Triangle,
    /// Some vertex outside `{1, 2, 3}` is adjacent to all three.
    KStar,
    /// `{1, 2, 3}` is a clique.
    SetClique,
    Custom {
        name: String,
        circuit: Box<Circuit>,
    },
}

impl ZooEntry {
    /// Reads the circuit file of a custom entry.
    pub fn resolve(spec: &CircuitSpec) -> Result<ZooEntry> {
        Ok(match spec {
            CircuitSpec::Const => ZooEntry::Const,
            CircuitSpec::EdgeProbe => ZooEntry::EdgeProbe,
            CircuitSpec::Triangle => ZooEntry::Triangle,
            CircuitSpec::KStar => ZooEntry::KStar,
            CircuitSpec::SetClique => ZooEntry::SetClique,
            CircuitSpec::Custom { path } => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::param(format!("cannot read circuit {path}: {e}")))?;
                let name = std::path::Path::new(path)
                    .file_stem()
                    .map_or_else(|| path.clone(), |s| s.to_string_lossy().into_owned());
                ZooEntry::Custom {
                    name: format!("custom:{name}"),
                    circuit: Box::new(Circuit::from_json(&text)?),
                }
            }
        })
    }

    pub fn standard() -> Vec<ZooEntry> {
        vec![
            ZooEntry::Const,
            ZooEntry::EdgeProbe,
            ZooEntry::Triangle,
            ZooEntry::KStar,
            ZooEntry::SetClique,
        ]
    }

    pub fn name(&self) -> &str {
        match self {
            ZooEntry::Const => "const",
            ZooEntry::EdgeProbe => "edge_probe",
            ZooEntry::Triangle => "triangle",
            ZooEntry::KStar => "k_star",
            ZooEntry::SetClique => "set_clique",
            ZooEntry::Custom { name, .. } => name,
        }
    }

    pub(crate) fn check_n(&self, n: usize) -> Result<()> {
        match self {
            ZooEntry::EdgeProbe if n < 2 => Err(Error::param("edge probe needs n >= 2")),
            ZooEntry::Custom { circuit, .. } if circuit.n_vertices() != n => Err(Error::SizeMismatch {
                left: n,
                right: circuit.n_vertices(),
            }),
            _ => Ok(()),
        }
    }

    /// The gate-level circuit on `n` vertices.
    pub fn circuit(&self, n: usize) -> Result<Circuit> {
        self.check_n(n)?;
        Ok(match self {
            ZooEntry::Const => Circuit::constant(n, true),
            ZooEntry::EdgeProbe => Circuit::edge_probe(n, Edge::new(0, 1))?,
            ZooEntry::Triangle => Circuit::triangle_detector(n),
            ZooEntry::KStar => Circuit::star_detector(n, STAR_ARITY),
            ZooEntry::SetClique => Circuit::set_clique_probe(n, SET_CLIQUE_SIZE),
            ZooEntry::Custom { circuit, .. } => (**circuit).clone(),
        })
    }

    /// Direct evaluation, equal to evaluating [`ZooEntry::circuit`].
    pub fn eval(&self, g: &Graph) -> Result<bool> {
        let n = g.n();
        self.check_n(n)?;
        Ok(match self {
            ZooEntry::Const => true,
            ZooEntry::EdgeProbe => g.has_edge(0, 1),
            ZooEntry::Triangle => has_triangle(g),
            ZooEntry::KStar => n > STAR_ARITY && (STAR_ARITY..n).any(|c| (0..STAR_ARITY).all(|i| g.has_edge(i, c))),
            ZooEntry::SetClique => {
                let m = SET_CLIQUE_SIZE.min(n);
                (0..m).all(|a| (a + 1..m).all(|b| g.has_edge(a, b)))
            }
            ZooEntry::Custom { circuit, .. } => circuit.eval(g)?,
        })
    }

    /// DNF form for restriction experiments.
    pub fn dnf(&self, n: usize) -> Result<ZooDnf> {
        self.check_n(n)?;
        let mono = |terms| EdgeDnf::monotone(n, terms).map(ZooDnf::Plain);
        match self {
            ZooEntry::Const => Ok(ZooDnf::Plain(EdgeDnf::constant(n, true))),
            ZooEntry::EdgeProbe => mono(vec![vec![Edge::new(0, 1)]]),
            ZooEntry::Triangle => Ok(ZooDnf::Triangle { n }),
            ZooEntry::KStar => mono(star_terms(n, STAR_ARITY)),
            ZooEntry::SetClique => mono(vec![crate::graph::all_edges(SET_CLIQUE_SIZE.min(n)).collect()]),
            ZooEntry::Custom { circuit, .. } => circuit_dnf(circuit).map(ZooDnf::Plain),
        }
    }
}

fn has_triangle(g: &Graph) -> bool {
    let adj = g.adjacency();
    g.edges().any(|e| !adj[e.u()].is_disjoint(&adj[e.v()]))
}

/// Reads a circuit of the shape OR of ANDs of (negated) inputs, or any
/// sub-shape of it, as a DNF.
pub fn circuit_dnf(c: &Circuit) -> Result<EdgeDnf> {
    let gates = c.gates();
    let literal = |id: usize| -> Option<Literal> {
        match &gates[id] {
            GateKind::Input(e) => Some(Literal::pos(*e)),
            GateKind::Not(x) => match gates[*x] {
                GateKind::Input(e) => Some(Literal::neg(e)),
                _ => None,
            },
            _ => None,
        }
    };
    // A term is a literal, a constant, or an AND of literals; `None` marks
    // a constant-false term.
    let term = |id: usize| -> Option<Option<Vec<Literal>>> {
        if let Some(l) = literal(id) {
            return Some(Some(vec![l]));
        }
        match &gates[id] {
            GateKind::Const(b) => Some(b.then(Vec::new)),
            GateKind::And(xs) => xs.iter().map(|&x| literal(x)).collect::<Option<Vec<_>>>().map(Some),
            _ => None,
        }
    };
    let unsupported = || Error::param("circuit is not an OR of ANDs of literals");
    let out = c.output();
    let terms: Vec<Vec<Literal>> = match &gates[out] {
        GateKind::Or(xs) => xs
            .iter()
            .map(|&x| term(x).ok_or_else(unsupported))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect(),
        _ => term(out).ok_or_else(unsupported)?.into_iter().collect(),
    };
    EdgeDnf::new(c.n_vertices(), terms)
}

/// DNF of a zoo member. The triangle detector has `n choose 3` terms, so its
/// restriction is computed from the structure of the restriction instead
/// of term by term.
#[derive(Clone, Debug, PartialEq)]
pub enum ZooDnf {
    Triangle { n: usize },
    Plain(EdgeDnf),
}

impl RestrictableDnf for ZooDnf {
    fn n_vertices(&self) -> usize {
        match self {
            ZooDnf::Triangle { n } => *n,
            ZooDnf::Plain(d) => d.n(),
        }
    }

    fn max_vertex_length(&self) -> usize {
        match self {
            ZooDnf::Triangle { n } => {
                if *n >= 3 {
                    3
                } else {
                    0
                }
            }
            ZooDnf::Plain(d) => d.max_vertex_length(),
        }
    }

    fn restrict(&self, mu: &Restriction) -> Result<EdgeDnf> {
        match self {
            ZooDnf::Plain(d) => restrict_dnf(d, mu),
            ZooDnf::Triangle { n } => restrict_triangle(*n, mu),
        }
    }
}

/// A triangle survives when each of its edges is free or fixed to 1. If one
/// survives with all edges fixed the result is constant 1; otherwise every
/// survivor has a free edge, hence two vertices in the star block.
fn restrict_triangle(n: usize, mu: &Restriction) -> Result<EdgeDnf> {
    if mu.n() != n {
        return Err(Error::SizeMismatch { left: mu.n(), right: n });
    }
    if has_triangle(&mu.ones()) {
        return Ok(EdgeDnf::constant(n, true));
    }
    let star = mu.star().to_vec();
    let alive = |e: Edge| mu.value(e) != Some(false);
    let mut terms = BTreeSet::new();
    for (i, &a) in star.iter().enumerate() {
        for &b in &star[i + 1..] {
            for c in (0..n).filter(|&c| c != a && c != b) {
                let (ac, bc) = (Edge::new(a, c), Edge::new(b, c));
                if alive(ac) && alive(bc) {
                    let mut t: Vec<Edge> = [Edge::new(a, b), ac, bc]
                        .into_iter()
                        .filter(|&e| mu.is_star(e))
                        .collect();
                    t.sort();
                    terms.insert(t);
                }
            }
        }
    }
    EdgeDnf::monotone(n, terms.into_iter().collect())
}
