//! Unbounded fan-in AND/OR/NOT circuits over the edge variables of graphs on
//! `n` vertices.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{all_edges, Edge, Graph};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GateKind {
    And(Vec<usize>),
    Or(Vec<usize>),
    Not(usize),
    Input(Edge),
    Const(bool),
}

/// Gates are stored in topological order: every input id is smaller than the
/// id of the gate reading it. The gate id is its position.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Circuit {
    n_vertices: usize,
    gates: Vec<GateKind>,
    output: usize,
}

impl Circuit {
    pub fn new(n_vertices: usize, gates: Vec<GateKind>, output: usize) -> Result<Self> {
        if output >= gates.len() {
            return Err(Error::param(format!("output gate {output} does not exist")));
        }
        for (id, gate) in gates.iter().enumerate() {
            let inputs: &[usize] = match gate {
                GateKind::And(xs) | GateKind::Or(xs) => xs,
                GateKind::Not(x) => std::slice::from_ref(x),
                GateKind::Input(e) => {
                    if e.v() >= n_vertices {
                        return Err(Error::VertexOutOfRange {
                            vertex: e.v() + 1,
                            n: n_vertices,
                        });
                    }
                    &[]
                }
                GateKind::Const(_) => &[],
            };
            if let Some(bad) = inputs.iter().find(|&&x| x >= id) {
                return Err(Error::param(format!(
                    "gate {id} reads gate {bad}; gates must be topologically ordered"
                )));
            }
        }
        Ok(Circuit {
            n_vertices,
            gates,
            output,
        })
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn gates(&self) -> &[GateKind] {
        &self.gates
    }

    pub fn output(&self) -> usize {
        self.output
    }

    /// Gate count.
    pub fn size(&self) -> usize {
        self.gates.len()
    }

    /// Longest directed path ending at the output gate.
    pub fn depth(&self) -> usize {
        let mut depth = vec![0usize; self.gates.len()];
        for (id, gate) in self.gates.iter().enumerate() {
            depth[id] = match gate {
                GateKind::And(xs) | GateKind::Or(xs) => xs.iter().map(|&x| depth[x] + 1).max().unwrap_or(0),
                GateKind::Not(x) => depth[*x] + 1,
                GateKind::Input(_) | GateKind::Const(_) => 0,
            };
        }
        depth[self.output]
    }

    /// Distinct edges read by input gates.
    pub fn input_edges(&self) -> BTreeSet<Edge> {
        self.gates
            .iter()
            .filter_map(|g| match g {
                GateKind::Input(e) => Some(*e),
                _ => None,
            })
            .collect()
    }

    /// Single topological pass with `edge` supplying the input bits.
    pub fn eval_with(&self, edge: impl Fn(Edge) -> bool) -> bool {
        let mut value = vec![false; self.gates.len()];
        for (id, gate) in self.gates.iter().enumerate() {
            value[id] = match gate {
                GateKind::And(xs) => xs.iter().all(|&x| value[x]),
                GateKind::Or(xs) => xs.iter().any(|&x| value[x]),
                GateKind::Not(x) => !value[*x],
                GateKind::Input(e) => edge(*e),
                GateKind::Const(b) => *b,
            };
        }
        value[self.output]
    }

    pub fn eval(&self, g: &Graph) -> Result<bool> {
        if g.n() != self.n_vertices {
            return Err(Error::SizeMismatch {
                left: g.n(),
                right: self.n_vertices,
            });
        }
        Ok(self.eval_with(|e| g.contains(e)))
    }

    /// `C^H` with `C^H(G) = C(H ∪ G)`.
    ///
    /// Each input `X_e` becomes `X_e ∨ [e ∈ H]`, written in collapsed form: a
    /// constant 1 gate when `e ∈ H`, the input itself otherwise. Size and
    /// depth do not grow.
    pub fn hardwire(&self, h: &Graph) -> Result<Circuit> {
        if h.n() != self.n_vertices {
            return Err(Error::SizeMismatch {
                left: h.n(),
                right: self.n_vertices,
            });
        }
        let gates = self
            .gates
            .iter()
            .map(|g| match g {
                GateKind::Input(e) if h.contains(*e) => GateKind::Const(true),
                other => other.clone(),
            })
            .collect();
        Circuit::new(self.n_vertices, gates, self.output)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let gates = self
            .gates
            .iter()
            .enumerate()
            .map(|(id, g)| {
                let (kind, inputs, edge, bit) = match g {
                    GateKind::And(xs) => ("and", xs.clone(), None, None),
                    GateKind::Or(xs) => ("or", xs.clone(), None, None),
                    GateKind::Not(x) => ("not", vec![*x], None, None),
                    GateKind::Input(e) => ("input", vec![], Some([e.u() + 1, e.v() + 1]), None),
                    GateKind::Const(b) => ("const", vec![], None, Some(u8::from(*b))),
                };
                GateJson {
                    id,
                    kind: kind.to_string(),
                    edge,
                    bit,
                    inputs,
                }
            })
            .collect();
        serde_json::to_value(CircuitJson {
            n_vertices: self.n_vertices,
            gates,
            output: self.output,
        })
        .expect("circuit JSON is serializable")
    }

    pub fn from_json(text: &str) -> Result<Circuit> {
        let raw: CircuitJson = serde_json::from_str(text)?;
        let n = raw.n_vertices;
        let mut gates = Vec::with_capacity(raw.gates.len());
        for (pos, g) in raw.gates.into_iter().enumerate() {
            if g.id != pos {
                return Err(Error::param(format!("gate at position {pos} has id {}", g.id)));
            }
            let kind = match g.kind.as_str() {
                "and" => GateKind::And(g.inputs),
                "or" => GateKind::Or(g.inputs),
                "not" => match g.inputs.as_slice() {
                    [x] => GateKind::Not(*x),
                    _ => return Err(Error::param(format!("not gate {pos} needs exactly one input"))),
                },
                "input" => {
                    let [a, b] = g
                        .edge
                        .ok_or_else(|| Error::param(format!("input gate {pos} lacks an edge")))?;
                    if a == 0 || b == 0 || a > n || b > n {
                        return Err(Error::VertexOutOfRange { vertex: a.max(b), n });
                    }
                    GateKind::Input(Edge::try_new(a - 1, b - 1)?)
                }
                "const" => match g.bit {
                    Some(0) => GateKind::Const(false),
                    Some(1) => GateKind::Const(true),
                    _ => return Err(Error::param(format!("const gate {pos} needs bit 0 or 1"))),
                },
                other => return Err(Error::param(format!("unknown gate kind {other:?}"))),
            };
            gates.push(kind);
        }
        Circuit::new(n, gates, raw.output)
    }
}

#[derive(Serialize, Deserialize)]
struct CircuitJson {
    n_vertices: usize,
    gates: Vec<GateJson>,
    output: usize,
}

#[derive(Serialize, Deserialize)]
struct GateJson {
    id: usize,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    edge: Option<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bit: Option<u8>,
    #[serde(default)]
    inputs: Vec<usize>,
}

/// Incremental builder used by the standard circuits below.
#[derive(Default)]
struct Builder {
    gates: Vec<GateKind>,
}

impl Builder {
    fn push(&mut self, g: GateKind) -> usize {
        self.gates.push(g);
        self.gates.len() - 1
    }

    fn finish(self, n: usize) -> Circuit {
        let out = self.gates.len() - 1;
        Circuit::new(n, self.gates, out).expect("builder emits valid circuits")
    }
}

fn dnf_circuit(n: usize, terms: &[Vec<Edge>]) -> Circuit {
    let mut b = Builder::default();
    let inputs: std::collections::BTreeMap<Edge, usize> = terms
        .iter()
        .flatten()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .map(|e| (e, b.push(GateKind::Input(e))))
        .collect();
    let ands: Vec<usize> = terms
        .iter()
        .map(|t| b.push(GateKind::And(t.iter().map(|e| inputs[e]).collect())))
        .collect();
    b.push(GateKind::Or(ands));
    b.finish(n)
}

impl Circuit {
    pub fn constant(n: usize, bit: bool) -> Circuit {
        Circuit::new(n, vec![GateKind::Const(bit)], 0).expect("valid")
    }

    /// The single input `X_e`.
    pub fn edge_probe(n: usize, e: Edge) -> Result<Circuit> {
        Circuit::new(n, vec![GateKind::Input(e)], 0)
    }

    /// OR over all edge inputs.
    pub fn any_edge(n: usize) -> Circuit {
        let mut b = Builder::default();
        let xs: Vec<usize> = all_edges(n).map(|e| b.push(GateKind::Input(e))).collect();
        b.push(GateKind::Or(xs));
        b.finish(n)
    }

    /// OR over all triples of the AND of their three edges.
    pub fn triangle_detector(n: usize) -> Circuit {
        dnf_circuit(n, &crate::boolfn::triangle_terms(n))
    }

    /// Some vertex outside `{0, .., k-1}` is adjacent to all of them.
    pub fn star_detector(n: usize, k: usize) -> Circuit {
        dnf_circuit(n, &crate::boolfn::star_terms(n, k))
    }

    /// `{0, .., m-1}` is a clique (AND of its edges).
    pub fn set_clique_probe(n: usize, m: usize) -> Circuit {
        let mut b = Builder::default();
        let xs: Vec<usize> = all_edges(m.min(n)).map(|e| b.push(GateKind::Input(e))).collect();
        b.push(GateKind::And(xs));
        b.finish(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn evaluation_examples() {
        assert!(Circuit::any_edge(3).eval(&Graph::complete(3)).unwrap());
        assert!(!Circuit::any_edge(3).eval(&Graph::empty(3)).unwrap());
        assert!(!Circuit::triangle_detector(5).eval(&cycle(5)).unwrap());
        assert!(Circuit::triangle_detector(5).eval(&Graph::complete(5)).unwrap());
        assert!(Circuit::constant(4, true).eval(&Graph::empty(4)).unwrap());
        assert!(Circuit::any_edge(3).eval(&Graph::empty(4)).is_err());
    }

    #[test]
    fn empty_gates_are_constants() {
        let and0 = Circuit::new(2, vec![GateKind::And(vec![])], 0).unwrap();
        let or0 = Circuit::new(2, vec![GateKind::Or(vec![])], 0).unwrap();
        assert!(and0.eval(&Graph::empty(2)).unwrap());
        assert!(!or0.eval(&Graph::complete(2)).unwrap());
    }

    #[test]
    fn rejects_malformed_circuits() {
        assert!(Circuit::new(3, vec![GateKind::Not(0)], 0).is_err());
        assert!(Circuit::new(3, vec![GateKind::Const(true)], 1).is_err());
        assert!(Circuit::new(3, vec![GateKind::Input(Edge::new(0, 3))], 0).is_err());
    }

    #[test]
    fn depth_and_size() {
        let t = Circuit::triangle_detector(4);
        assert_eq!(t.depth(), 2);
        assert_eq!(t.size(), 6 + 4 + 1);
        let neg = Circuit::new(
            2,
            vec![
                GateKind::Input(Edge::new(0, 1)),
                GateKind::Not(0),
                GateKind::Or(vec![1]),
            ],
            2,
        )
        .unwrap();
        assert_eq!(neg.depth(), 2);
    }

    #[test]
    fn hardwire_examples() {
        let t = Circuit::triangle_detector(5);
        let same = t.hardwire(&Graph::empty(5)).unwrap();
        let k3 = Graph::from_edges(5, [(0, 1), (0, 2), (1, 2)]).unwrap();
        let wired = t.hardwire(&k3).unwrap();
        for mask in 0..1u64 << 10 {
            let g = Graph::from_mask(5, mask);
            assert_eq!(same.eval(&g).unwrap(), t.eval(&g).unwrap());
            assert!(wired.eval(&g).unwrap());
        }
        assert!(wired.size() <= t.size() + 10);
        assert!(wired.depth() <= t.depth() + 1);
        assert!(t.hardwire(&Graph::empty(4)).is_err());
    }

    #[test]
    fn json_round_trip() {
        let c = Circuit::new(
            3,
            vec![
                GateKind::Input(Edge::new(0, 2)),
                GateKind::Const(false),
                GateKind::Not(1),
                GateKind::And(vec![0, 2]),
            ],
            3,
        )
        .unwrap();
        let json = c.to_json();
        assert_eq!(json["gates"][0]["edge"], serde_json::json!([1, 3]));
        assert_eq!(json["gates"][1]["bit"], 0);
        assert_eq!(Circuit::from_json(&json.to_string()).unwrap(), c);
        assert!(Circuit::from_json(r#"{"n_vertices":2,"gates":[{"id":0,"kind":"xor"}],"output":0}"#).is_err());
        assert!(
            Circuit::from_json(r#"{"n_vertices":2,"gates":[{"id":1,"kind":"const","bit":1}],"output":0}"#).is_err()
        );
        assert!(
            Circuit::from_json(r#"{"n_vertices":2,"gates":[{"id":0,"kind":"input","edge":[1,3]}],"output":0}"#)
                .is_err()
        );
    }
}
